#include "tangentloci/complexmat.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace tangentloci {

const char* err_name(Err code) {
    switch (code) {
        case Err::RankMismatch: return "RankMismatch";
        case Err::RankTooLow: return "RankTooLow";
        case Err::NotSingularPencil: return "NotSingularPencil";
        case Err::PencilInsideDeterminantal: return "PencilInsideDeterminantal";
        case Err::Indeterminate: return "Indeterminate";
        case Err::IdenticallyZero: return "IdenticallyZero";
        case Err::NotFixedVertex: return "NotFixedVertex";
        case Err::ClusteredRoots: return "ClusteredRoots";
        case Err::NotInPerspective: return "NotInPerspective";
        case Err::NoSolution: return "NoSolution";
        case Err::PlaneThroughVertex: return "PlaneThroughVertex";
        case Err::NoIntersection: return "NoIntersection";
        case Err::DegenerateParameter: return "DegenerateParameter";
        case Err::CoincidentPoints: return "CoincidentPoints";
        case Err::AtInfinity: return "AtInfinity";
        case Err::NullDirection: return "NullDirection";
        case Err::Singular: return "Singular";
        case Err::NonGeneric: return "NonGeneric";
        case Err::NonGenericPair: return "NonGenericPair";
        case Err::SingularIntersection: return "SingularIntersection";
        case Err::DuplicateCenters: return "DuplicateCenters";
        case Err::ThreeCollinear: return "ThreeCollinear";
        case Err::FrameDegenerate: return "FrameDegenerate";
        case Err::DefectiveCount: return "DefectiveCount";
        case Err::InvalidInput: return "InvalidInput";
        case Err::ParseError: return "ParseError";
    }
    return "UnknownError";
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t tag) {
    // splitmix64 step over seed xor tag
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

VecXc Rng::cgauss_vec(int n) {
    VecXc v(n);
    for (int i = 0; i < n; ++i) v(i) = cgauss();
    return v;
}

MatXc Rng::cgauss_mat(int rows, int cols) {
    MatXc m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = cgauss();
    return m;
}

MatXc Rng::unitary(int n) {
    MatXc g = cgauss_mat(n, n);
    Eigen::HouseholderQR<MatXc> qr(g);
    MatXc q = qr.householderQ() * MatXc::Identity(n, n);
    MatXc r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cplx d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0) ? d / a : cplx(1, 0);
    }
    return q;
}

void canonicalize(Eigen::Ref<MatXc> m) {
    double norm = m.norm();
    if (!(norm > 0)) fail(Err::InvalidInput, "cannot canonicalize the zero matrix");
    m /= norm;
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, std::abs(m(i, j)));
    const double slack = 1.0 - 1e-12;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) >= best * slack) {
                cplx phase = m(i, j) / std::abs(m(i, j));
                m /= phase;
                return;
            }
        }
    }
}

double proj_distance(const MatXc& a, const MatXc& b) {
    // √(2−2|⟨a,b⟩|) on unit vectors, evaluated as the aligned residual norm
    // ‖b−sa‖·√(2/(1+|s|)): the naive form cancels catastrophically near
    // |⟨a,b⟩| = 1 and floors at √ε instead of ε.
    const double na = a.norm(), nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) return std::sqrt(2.0);
    MatXc au = a / na, bu = b / nb;
    const cplx s = (au.conjugate().cwiseProduct(bu)).sum();
    const double c = std::min(1.0, std::abs(s));
    const double r = (bu - s * au).norm();
    return r * std::sqrt(2.0 / (1.0 + c));
}

SvdRank numeric_rank_svd(const MatXc& m, double tol) {
    Eigen::JacobiSVD<MatXc> svd(m);
    SvdRank out;
    out.singular_values = svd.singularValues();
    double s1 = out.singular_values.size() ? out.singular_values(0) : 0.0;
    for (int i = 0; i < out.singular_values.size(); ++i)
        if (out.singular_values(i) > tol * s1) ++out.rank;
    return out;
}

MatXc nullspace(const MatXc& a, double tol) {
    Eigen::JacobiSVD<MatXc> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double s1 = sv.size() ? sv(0) : 0.0;
    int n = static_cast<int>(a.cols());
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * s1 && sv(i) > 0) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

MatXc orthonormal_columns(const MatXc& a, double tol) {
    Eigen::JacobiSVD<MatXc> svd(a, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double s1 = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * s1 && sv(i) > 0) ++rank;
    return svd.matrixU().leftCols(rank);
}

double span_residual(const MatXc& cols, const VecXc& x) {
    MatXc q = orthonormal_columns(cols, 1e-13);
    VecXc r = x - q * (q.adjoint() * x);
    return r.norm() / x.norm();
}

MatXc span_intersection(const MatXc& a, const MatXc& b, double gap) {
    MatXc qa = orthonormal_columns(a, 1e-13);
    MatXc qb = orthonormal_columns(b, 1e-13);
    if (qa.cols() == 0 || qb.cols() == 0) return MatXc(a.rows(), 0);
    MatXc overlap = qa.adjoint() * qb;
    Eigen::JacobiSVD<MatXc> svd(overlap, Eigen::ComputeFullU);
    int keep = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1.0 - gap) ++keep;
    return qa * svd.matrixU().leftCols(keep);
}

VecXc sym_to_vec(const MatXc& m) {
    const int n = static_cast<int>(m.rows());
    VecXc v(n * (n + 1) / 2);
    const double s2 = std::sqrt(2.0);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) v(k++) = (i == j) ? m(i, j) : s2 * m(i, j);
    return v;
}

MatXc vec_to_sym(const VecXc& v, int n) {
    MatXc m(n, n);
    const double s2 = std::sqrt(2.0);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            cplx e = v(k++);
            if (i == j) {
                m(i, j) = e;
            } else {
                m(i, j) = e / s2;
                m(j, i) = e / s2;
            }
        }
    }
    return m;
}

cplx det2(const cplx& a, const cplx& b, const cplx& c, const cplx& d) { return a * d - b * c; }

}  // namespace tangentloci
