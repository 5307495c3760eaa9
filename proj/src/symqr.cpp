// Complex symmetric 4×4 quadric algebra: canonical forms, numeric rank,
// pencil determinant forms, rank-one/two factorization, singular-pencil
// classification, and projective cross-ratios.

#include "tangentloci/symqr.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace tangentloci::symqr {

namespace {

cplx det2pt(const ProjPoint1& x, const ProjPoint1& y) {
    return x.lambda * y.mu - y.lambda * x.mu;
}

template <int N>
Eigen::Vector<cplx, N> rank_one_impl(const Eigen::Matrix<cplx, N, N>& q_in, const Config& cfg) {
    Eigen::Matrix<cplx, N, N> q = canonicalized(symmetrize(q_in));
    Eigen::JacobiSVD<Eigen::Matrix<cplx, N, N>> svd(q, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < N; ++i) rank += sv(i) > cfg.tol * sv(0) ? 1 : 0;
    if (rank != 1) fail(Err::RankMismatch, "rank-one factorization needs numeric rank 1");
    Eigen::Vector<cplx, N> w = svd.matrixU().col(0);
    // q = uuᵀ with u = αw; α² = wᴴ q w̄.
    cplx c = w.dot(q * w.conjugate());
    Eigen::Vector<cplx, N> u = std::sqrt(c) * w;
    return canonicalized(u);
}

template <int N>
std::pair<Eigen::Vector<cplx, N>, Eigen::Vector<cplx, N>> rank_two_impl(
    const Eigen::Matrix<cplx, N, N>& q_in, const Config& cfg) {
    Eigen::Matrix<cplx, N, N> q = canonicalized(symmetrize(q_in));
    Eigen::JacobiSVD<Eigen::Matrix<cplx, N, N>> svd(q, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < N; ++i) rank += sv(i) > cfg.tol * sv(0) ? 1 : 0;
    if (rank != 2) fail(Err::RankMismatch, "rank-two factorization needs numeric rank 2");
    Eigen::Matrix<cplx, N, 2> W = svd.matrixU().leftCols(2);
    // q = W C Wᵀ with C = Wᴴ q W̄ (W has orthonormal columns spanning col q).
    Mat2c C = symmetrize((W.adjoint() * q * W.conjugate()).eval());
    // Split the binary quadratic C₁₁x² + 2C₁₂xy + C₂₂y² into two linear
    // factors, working in the chart whose squared term dominates.
    Vec2c a, b;
    const double c11 = std::abs(C(0, 0));
    const double c22 = std::abs(C(1, 1));
    const double scale = C.norm();
    if (std::max(c11, c22) <= 1e-8 * scale) {
        a = Vec2c(cplx(1.0), cplx(0.0));
        b = Vec2c(cplx(0.0), 2.0 * C(0, 1));
    } else if (c11 >= c22) {
        cplx disc = std::sqrt(C(0, 1) * C(0, 1) - C(0, 0) * C(1, 1));
        cplx r1 = (-C(0, 1) + disc) / C(0, 0);
        cplx r2 = (-C(0, 1) - disc) / C(0, 0);
        a = Vec2c(cplx(1.0), -r1);
        b = Vec2c(C(0, 0), -C(0, 0) * r2);
    } else {
        cplx disc = std::sqrt(C(0, 1) * C(0, 1) - C(0, 0) * C(1, 1));
        cplx r1 = (-C(0, 1) + disc) / C(1, 1);
        cplx r2 = (-C(0, 1) - disc) / C(1, 1);
        a = Vec2c(-r1, cplx(1.0));
        b = Vec2c(-C(1, 1) * r2, C(1, 1));
    }
    Eigen::Vector<cplx, N> u = W * a;
    Eigen::Vector<cplx, N> v = W * b;
    return {canonicalized(u), canonicalized(v)};
}

// Random-weighted combination of all k×k minors of λQ₁+μQ₂ (k = 2 or 3),
// interpolated as a degree-k binary form. The minors cut the rank ≤ k−1
// locus on the pencil; a generic combination has the common zeros among its
// roots, and rank checks at the roots discard the spurious ones.
BinaryForm minor_combo_form(const Pencil& p, int k, Rng& rng, double* minor_scale) {
    const int n = k + 1;
    std::vector<std::pair<std::array<int, 3>, std::array<int, 3>>> index;  // row set, col set
    if (k == 2) {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                for (int a = 0; a < 4; ++a)
                    for (int b = a + 1; b < 4; ++b)
                        index.push_back({{i, j, -1}, {a, b, -1}});
    } else {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                std::array<int, 3> rows{}, cols{};
                int r = 0, c = 0;
                for (int t = 0; t < 4; ++t) {
                    if (t != i) rows[r++] = t;
                    if (t != j) cols[c++] = t;
                }
                index.push_back({rows, cols});
            }
    }
    VecXc weights(static_cast<int>(index.size()));
    for (int m = 0; m < weights.size(); ++m) weights(m) = rng.cgauss();

    VecXc samples(n);
    double scale = 0.0;
    for (int s = 0; s < n; ++s) {
        cplx t = form_sample_node(n - 1, s);
        Mat4c M = t * p.m1 + p.m2;
        cplx acc(0.0);
        for (size_t m = 0; m < index.size(); ++m) {
            const auto& [rows, cols] = index[m];
            cplx minor;
            if (k == 2) {
                minor = det2(M(rows[0], cols[0]), M(rows[0], cols[1]), M(rows[1], cols[0]),
                             M(rows[1], cols[1]));
            } else {
                Mat3c sub;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) sub(a, b) = M(rows[a], cols[b]);
                minor = sub.determinant();
            }
            scale = std::max(scale, std::abs(minor));
            acc += weights(m) * minor;
        }
        samples(s) = acc;
    }
    if (minor_scale) *minor_scale = scale;
    return form_from_samples(samples);
}

}  // namespace

// ---- ProjQuadric -----------------------------------------------------------

ProjQuadric::ProjQuadric() : m_(Mat4c::Zero()) { m_(0, 0) = cplx(1.0); }

ProjQuadric::ProjQuadric(const Mat4c& m) {
    Mat4c s = symmetrize(m);
    if (!(s.norm() > 1e-150)) fail(Err::InvalidInput, "quadric matrix is zero");
    m_ = canonicalized(s);
}

Vec10c ProjQuadric::vec() const { return sym_to_vec(m_); }

ProjQuadric ProjQuadric::from_vec(const Vec10c& v) {
    return ProjQuadric(Mat4c(vec_to_sym(v, 4)));
}

double distance(const ProjQuadric& a, const ProjQuadric& b) {
    return proj_distance(a.matrix(), b.matrix());
}

RankProfile numeric_rank(const ProjQuadric& q, double tol) {
    if (!(tol > 0.0) || !(tol < 1.0)) fail(Err::InvalidInput, "rank tolerance outside (0,1)");
    Eigen::JacobiSVD<Mat4c> svd(q.matrix());
    RankProfile rp;
    rp.singular_values = svd.singularValues();
    rp.tol_used = tol;
    for (int i = 0; i < 4; ++i) rp.rank += rp.singular_values(i) > tol * rp.singular_values(0) ? 1 : 0;
    return rp;
}

// ---- pencils ---------------------------------------------------------------

Pencil make_pencil(const Mat4c& m1, const Mat4c& m2, const Config& cfg) {
    Pencil p;
    p.m1 = symmetrize(m1);
    p.m2 = symmetrize(m2);
    p.q1 = ProjQuadric(m1);
    p.q2 = ProjQuadric(m2);
    if (distance(p.q1, p.q2) <= cfg.tol)
        fail(Err::InvalidInput, "pencil requires projectively distinct quadrics");
    p.det_form = pencil_det_form(p.m1, p.m2);
    return p;
}

Pencil make_pencil(const ProjQuadric& q1, const ProjQuadric& q2, const Config& cfg) {
    return make_pencil(q1.matrix(), q2.matrix(), cfg);
}

Mat4c pencil_at(const Pencil& p, const ProjPoint1& t) { return t.lambda * p.m1 + t.mu * p.m2; }

BinaryForm pencil_det_form(const Mat4c& m1, const Mat4c& m2) {
    VecXc samples(5);
    bool all_tiny = true;
    for (int k = 0; k < 5; ++k) {
        cplx t = form_sample_node(4, k);
        Mat4c M = t * m1 + m2;
        samples(k) = M.determinant();
        double bound = M.norm();
        all_tiny = all_tiny && std::abs(samples(k)) < 1e-12 * bound * bound * bound * bound;
    }
    BinaryForm f = form_from_samples(samples);
    f.identically_zero = all_tiny;
    return f;
}

BinaryForm conic_pencil_det_form(const Mat3c& m1, const Mat3c& m2) {
    VecXc samples(4);
    bool all_tiny = true;
    for (int k = 0; k < 4; ++k) {
        cplx t = form_sample_node(3, k);
        Mat3c M = t * m1 + m2;
        samples(k) = M.determinant();
        double bound = M.norm();
        all_tiny = all_tiny && std::abs(samples(k)) < 1e-12 * bound * bound * bound;
    }
    BinaryForm f = form_from_samples(samples);
    f.identically_zero = all_tiny;
    return f;
}

std::vector<SingularPoint> pencil_singular_points(const Pencil& p, const Config& cfg) {
    if (p.det_form.identically_zero)
        fail(Err::PencilInsideDeterminantal, "every pencil member is singular");
    std::vector<FormRoot> roots = binary_form_roots(p.det_form, cfg);
    std::vector<SingularPoint> out;
    out.reserve(roots.size());
    for (const FormRoot& r : roots) {
        SingularPoint sp;
        sp.point = r.point;
        sp.member = ProjQuadric(pencil_at(p, r.point));
        sp.rank = numeric_rank(sp.member, cfg.tol);
        sp.multiplicity = r.multiplicity;
        out.push_back(sp);
    }
    return out;
}

std::optional<RankOneHit> pencil_meets_rank_one(const Pencil& p, const Config& cfg) {
    std::vector<SingularPoint> pts = pencil_singular_points(p, cfg);
    for (const SingularPoint& sp : pts) {
        if (sp.rank.rank == 1) {
            RankOneHit hit;
            hit.point = sp.point;
            hit.member = sp.member;
            hit.residual = sp.rank.singular_values(1) / sp.rank.singular_values(0);
            return hit;
        }
    }
    return std::nullopt;
}

// ---- factorization ----------------------------------------------------------

Vec4c factor_rank_one(const ProjQuadric& q, const Config& cfg) {
    return rank_one_impl<4>(q.matrix(), cfg);
}

std::pair<Vec4c, Vec4c> factor_rank_two(const ProjQuadric& q, const Config& cfg) {
    return rank_two_impl<4>(q.matrix(), cfg);
}

Vec3c factor_rank_one_3(const Mat3c& c, const Config& cfg) { return rank_one_impl<3>(c, cfg); }

std::pair<Vec3c, Vec3c> factor_rank_two_3(const Mat3c& c, const Config& cfg) {
    return rank_two_impl<3>(c, cfg);
}

// ---- singular pencil classification -----------------------------------------

SingularPencilClass classify_singular_pencil(const Pencil& p, const Config& cfg) {
    if (!p.det_form.identically_zero)
        fail(Err::NotSingularPencil, "determinant form is not identically zero");

    Rng rng(Rng::mix(cfg.seed, UINT64_C(0x636c736670656e)));

    // Generic rank from random samples along the pencil (special parameters
    // form a measure-zero set, so the max over a handful of draws is the
    // generic value).
    struct Sample {
        ProjPoint1 t;
        RankProfile rank;
    };
    std::vector<Sample> samples;
    int generic_rank = 0;
    for (int s = 0; s < 7; ++s) {
        ProjPoint1 t(rng.cgauss(), rng.cgauss());
        Sample smp;
        smp.t = t;
        smp.rank = numeric_rank(ProjQuadric(pencil_at(p, t)), cfg.tol);
        generic_rank = std::max(generic_rank, smp.rank.rank);
        samples.push_back(smp);
    }
    if (generic_rank < 2)
        fail(Err::Indeterminate, "pencil of rank-one quadrics is numerically inconsistent");
    if (generic_rank == 4)
        fail(Err::NotSingularPencil, "sampled member has full rank despite zero determinant form");

    SingularPencilClass out;
    out.generic_rank = generic_rank;

    const int minor_size = generic_rank;  // k×k minors cut rank ≤ k−1
    BinaryForm combo;
    double minor_scale = 0.0;
    bool have_combo = false;
    for (int attempt = 0; attempt < 5 && !have_combo; ++attempt) {
        combo = minor_combo_form(p, minor_size, rng, &minor_scale);
        if (!(minor_scale > 1e-14))
            fail(Err::Indeterminate, "minors vanish along the pencil below the generic rank");
        have_combo = combo.max_abs_coeff() > 1e-10 * minor_scale;
    }
    if (!have_combo)
        fail(Err::Indeterminate, "random minor combinations degenerate on every attempt");

    {
        std::vector<FormRoot> roots = binary_form_roots(combo, cfg);
        for (const FormRoot& r : roots) {
            SingularPoint sp;
            sp.point = r.point;
            sp.member = ProjQuadric(pencil_at(p, r.point));
            sp.rank = numeric_rank(sp.member, cfg.tol);
            sp.multiplicity = r.multiplicity;
            if (sp.rank.rank <= generic_rank - 1) out.special_points.push_back(sp);
        }
    }

    if (generic_rank == 3) {
        // Kernel directions at two generic members decide whether the vertex
        // is fixed or moves along a line.
        std::vector<Vec4c> kernels;
        for (const Sample& smp : samples) {
            if (smp.rank.rank != 3 || kernels.size() == 2) continue;
            MatXc ker = nullspace(pencil_at(p, smp.t), cfg.tol);
            if (ker.cols() < 1) continue;
            kernels.push_back(canonicalized(Vec4c(ker.col(0))));
        }
        if (kernels.size() < 2)
            fail(Err::Indeterminate, "could not extract kernels at two generic members");
        if (proj_distance(kernels[0], kernels[1]) < 1e-6) {
            out.kind = PencilKind::FixedVertex;
            out.vertex = kernels[0];
        } else {
            out.kind = PencilKind::MovingVertex;
            out.axis = {kernels[0], kernels[1]};
        }
    } else {
        out.kind = PencilKind::InRankTwo;
        int distinct = 0;
        for (const SingularPoint& sp : out.special_points) distinct += sp.rank.rank == 1 ? 1 : 0;
        out.double_plane_count = distinct;
    }
    return out;
}

// ---- cross-ratio --------------------------------------------------------------

cplx CrossRatio::value() const {
    if (is_indeterminate()) fail(Err::Indeterminate, "cross-ratio of the form 0/0");
    if (is_infinite()) return cplx(std::numeric_limits<double>::infinity(), 0.0);
    return num / den;
}

CrossRatio cross_ratio(const ProjPoint1& a, const ProjPoint1& b, const ProjPoint1& u,
                       const ProjPoint1& v) {
    CrossRatio r;
    r.num = det2pt(a, u) * det2pt(b, v);
    r.den = det2pt(a, v) * det2pt(b, u);
    return r;
}

}  // namespace tangentloci::symqr
