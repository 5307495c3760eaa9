// Plücker coordinates on the Grassmannian quadric, the ∧² tangency map and
// its duality transfer, rulings of smooth quadrics, and sampled tangents of
// quadric intersection curves.

#include "tangentloci/linegeom.hpp"

#include "tangentloci/complexmat.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace tangentloci::linegeom {

using symqr::BinaryForm;
using symqr::FormRoot;
using symqr::ProjPoint1;
using symqr::ProjQuadric;

namespace {

constexpr int kPair[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

cplx quad_eval(const Mat6c& n, const Vec6c& a, const Vec6c& b) {
    return (a.transpose() * n * b).value();
}

// The adjugate/compound chain is evaluated in extended precision: the
// identity ν(adj Q) = det(Q)·Gν(Q)G is exact, but in working precision the
// 2×2 minors of a poorly conditioned adjugate cancel catastrophically
// (error ~ ε·κ(Q)²).
using lcplx = std::complex<long double>;
using Mat4l = Eigen::Matrix<lcplx, 4, 4>;
using Mat6l = Eigen::Matrix<lcplx, 6, 6>;

Mat4l widen(const Mat4c& m) {
    Mat4l out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = lcplx(m(i, j).real(), m(i, j).imag());
    return out;
}

lcplx det3_l(const Mat4l& m, const int r[3], const int c[3]) {
    return m(r[0], c[0]) * (m(r[1], c[1]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[1])) -
           m(r[0], c[1]) * (m(r[1], c[0]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[0])) +
           m(r[0], c[2]) * (m(r[1], c[0]) * m(r[2], c[1]) - m(r[1], c[1]) * m(r[2], c[0]));
}

Mat4l adjugate_l(const Mat4l& m) {
    Mat4l adj;
    for (int i = 0; i < 4; ++i) {
        int r[3];
        for (int k = 0, t = 0; k < 4; ++k)
            if (k != i) r[t++] = k;
        for (int j = 0; j < 4; ++j) {
            int c[3];
            for (int k = 0, t = 0; k < 4; ++k)
                if (k != j) c[t++] = k;
            const long double sign = ((i + j) % 2 == 0) ? 1.0L : -1.0L;
            adj(j, i) = sign * det3_l(m, r, c);
        }
    }
    return adj;
}

Mat6l nu_l(const Mat4l& q) {
    Mat6l n;
    for (int r = 0; r < 6; ++r) {
        const int i = kPair[r][0], j = kPair[r][1];
        for (int c = 0; c < 6; ++c) {
            const int k = kPair[c][0], el = kPair[c][1];
            n(r, c) = q(i, k) * q(j, el) - q(i, el) * q(j, k);
        }
    }
    return n;
}

}  // namespace

// ---- lines ---------------------------------------------------------------

PluckerLine::PluckerLine(const Vec6c& raw) {
    if (!(raw.norm() > 1e-150)) fail(Err::InvalidInput, "zero Plücker vector");
    x = canonicalized(raw);
}

cplx g_form(const Vec6c& x) { return 2.0 * (x(0) * x(5) - x(1) * x(4) + x(2) * x(3)); }

double PluckerLine::g_residual() const { return std::abs(g_form(x)); }

Mat6c plucker_pairing() {
    Mat6c g = Mat6c::Zero();
    g(0, 5) = g(5, 0) = cplx(1.0);
    g(2, 3) = g(3, 2) = cplx(1.0);
    g(1, 4) = g(4, 1) = cplx(-1.0);
    return g;
}

Vec6c wedge(const Vec4c& a, const Vec4c& b) {
    Vec6c x;
    for (int k = 0; k < 6; ++k) {
        const int i = kPair[k][0], j = kPair[k][1];
        x(k) = a(i) * b(j) - a(j) * b(i);
    }
    return x;
}

PluckerLine plucker_from_points(const Vec4c& a, const Vec4c& b) {
    Vec6c x = wedge(a, b);
    if (x.norm() <= 1e-12 * a.norm() * b.norm())
        fail(Err::CoincidentPoints, "wedge of projectively equal points");
    return PluckerLine(x);
}

std::pair<Vec4c, Vec4c> spanning_points(const PluckerLine& l) {
    // X = uvᵀ − vuᵀ has column space span{u,v}; its two leading left singular
    // vectors recover the span for any decomposable x.
    Mat4c skew = Mat4c::Zero();
    for (int k = 0; k < 6; ++k) {
        const int i = kPair[k][0], j = kPair[k][1];
        skew(i, j) = l.x(k);
        skew(j, i) = -l.x(k);
    }
    Eigen::JacobiSVD<Mat4c> svd(skew, Eigen::ComputeFullU);
    return {Vec4c(svd.matrixU().col(0)), Vec4c(svd.matrixU().col(1))};
}

PluckerLine pv_to_plucker(const PVLine& l) {
    Vec4c a, b;
    a << l.p(0), l.p(1), l.p(2), cplx(1.0);
    b << l.p(0) + l.v(0), l.p(1) + l.v(1), l.p(2) + l.v(2), cplx(1.0);
    return plucker_from_points(a, b);
}

PVLine plucker_to_pv(const PluckerLine& l) {
    // With spanning points (p,1) and (p+v,1): x_{i4} = −vᵢ and the 3×3 block
    // is the moment m = p×v; then p = v×m/⟨v,v⟩ is the foot point.
    Vec3c v(-l.x(2), -l.x(4), -l.x(5));
    Vec3c m(l.x(3), -l.x(1), l.x(0));
    if (v.norm() <= 1e-10 * l.x.norm()) fail(Err::AtInfinity, "line lies in the plane x₄=0");
    cplx vv = v.transpose() * v;
    if (std::abs(vv) <= 1e-12 * v.squaredNorm())
        fail(Err::NullDirection, "direction is isotropic: ⟨v,v⟩ = 0");
    Vec3c cross(v(1) * m(2) - v(2) * m(1), v(2) * m(0) - v(0) * m(2), v(0) * m(1) - v(1) * m(0));
    PVLine out;
    out.p = cross / vv;
    out.v = canonicalized(v);
    return out;
}

// ---- tangency quadric and duality -----------------------------------------

Mat6c nu(const Mat4c& q) {
    Mat6c n;
    for (int r = 0; r < 6; ++r) {
        const int i = kPair[r][0], j = kPair[r][1];
        for (int c = 0; c < 6; ++c) {
            const int k = kPair[c][0], el = kPair[c][1];
            n(r, c) = q(i, k) * q(j, el) - q(i, el) * q(j, k);
        }
    }
    return n;
}

Mat6c nu(const ProjQuadric& q) { return nu(q.matrix()); }

TangencyCheck is_tangent(const PluckerLine& l, const ProjQuadric& q, double tol) {
    Mat6c n = nu(q.matrix());
    n /= n.norm();
    TangencyCheck out;
    out.residual = std::abs(quad_eval(n, l.x, l.x));
    out.tangent = out.residual < tol;
    return out;
}

PluckerLine plucker_orthogonal(const PluckerLine& l) {
    auto [u, v] = spanning_points(l);
    MatXc rows(2, 4);
    rows.row(0) = u.transpose();
    rows.row(1) = v.transpose();
    MatXc ker = nullspace(rows, 1e-10);
    if (ker.cols() != 2) fail(Err::Indeterminate, "orthogonal line span did not have rank 2");
    return plucker_from_points(Vec4c(ker.col(0)), Vec4c(ker.col(1)));
}

ProjQuadric dual_quadric(const ProjQuadric& q, const Config& cfg) {
    if (numeric_rank(q, cfg.tol).rank != 4)
        fail(Err::Singular, "dual quadric requires a smooth quadric");
    const Mat4l adj = adjugate_l(widen(q.matrix()));
    Mat4c out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = cplx(static_cast<double>(adj(i, j).real()),
                             static_cast<double>(adj(i, j).imag()));
    return ProjQuadric(out);
}

double duality_identity_residual(const ProjQuadric& q, const Config& cfg) {
    if (numeric_rank(q, cfg.tol).rank != 4)
        fail(Err::Singular, "duality identity requires a smooth quadric");
    const Mat4l m = widen(q.matrix());
    const Mat6l lhs = nu_l(adjugate_l(m));
    Mat6l g = Mat6l::Zero();
    g(0, 5) = g(5, 0) = lcplx(1.0L);
    g(2, 3) = g(3, 2) = lcplx(1.0L);
    g(1, 4) = g(4, 1) = lcplx(-1.0L);
    const Mat6l rhs = g * nu_l(m) * g;
    // projective distance √(2−2|⟨a,b⟩|) on unit Frobenius vectors, evaluated
    // as the aligned residual norm to avoid the √ε cancellation floor
    lcplx ip(0.0L);
    long double na = 0.0L, nb = 0.0L;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            ip += std::conj(lhs(i, j)) * rhs(i, j);
            na += std::norm(lhs(i, j));
            nb += std::norm(rhs(i, j));
        }
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    if (!(na > 0.0L) || !(nb > 0.0L)) return std::sqrt(2.0);
    const lcplx s = ip / (na * nb);
    long double c = std::abs(s);
    long double r2 = 0.0L;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r2 += std::norm(rhs(i, j) / nb - s * (lhs(i, j) / na));
    if (c > 1.0L) c = 1.0L;
    return static_cast<double>(std::sqrt(r2) * std::sqrt(2.0L / (1.0L + c)));
}

// ---- rulings ----------------------------------------------------------------

Mat4c symmetric_factor(const Mat4c& q_in, const Config& cfg) {
    Mat4c q = symmetrize(q_in);
    if (numeric_rank_svd(q, cfg.tol).rank != 4)
        fail(Err::Singular, "congruence to the identity requires full rank");
    const double qn = q.norm();
    Rng rng(Rng::mix(cfg.seed, UINT64_C(0x73796d666163)));
    for (int attempt = 0; attempt < 6; ++attempt) {
        Mat4c r = (attempt == 0) ? Mat4c::Identity() : Mat4c(rng.unitary(4));
        Mat4c qr = r.transpose() * q * r;
        // complex LLᵀ (plain transpose, principal square roots), pivot-gated;
        // a fresh unitary frame retries any breakdown.
        Mat4c lo = Mat4c::Zero();
        bool ok = true;
        for (int j = 0; j < 4 && ok; ++j) {
            cplx d = qr(j, j);
            for (int k = 0; k < j; ++k) d -= lo(j, k) * lo(j, k);
            if (std::abs(d) < 1e-12 * qn) {
                ok = false;
                break;
            }
            lo(j, j) = std::sqrt(d);
            for (int i = j + 1; i < 4; ++i) {
                cplx s = qr(i, j);
                for (int k = 0; k < j; ++k) s -= lo(i, k) * lo(j, k);
                lo(i, j) = s / lo(j, j);
            }
        }
        if (!ok) continue;
        Mat4c t = r * lo.transpose().inverse();
        Eigen::JacobiSVD<Mat4c> svd(t);
        const double kappa = svd.singularValues()(0) / svd.singularValues()(3);
        if (!std::isfinite(kappa) || kappa > 1e8) continue;
        return t;
    }
    fail(Err::NonGeneric, "no well-conditioned congruence to the identity found");
}

PluckerLine RulingFamily::at(const ProjPoint1& t) const {
    return PluckerLine(Vec6c(t.lambda * t.lambda * A + t.lambda * t.mu * B + t.mu * t.mu * C));
}

std::pair<Vec4c, Vec4c> RulingFamily::span_at(const ProjPoint1& t) const {
    return {Vec4c(p0 * t.lambda + p1 * t.mu), Vec4c(q0 * t.lambda + q1 * t.mu)};
}

std::pair<RulingFamily, RulingFamily> rulings(const ProjQuadric& q, const Config& cfg) {
    const Mat4c t = symmetric_factor(q.matrix(), cfg);
    // u-coordinates turn Σzᵢ² into u₁u₂+u₃u₄, whose two line families are
    // linear in the parameter; columns of t·C⁻¹ send u-basis vectors back to
    // ambient coordinates.
    Mat4c cinv;
    cinv << cplx(0.5), cplx(0.5), cplx(0.0), cplx(0.0),            //
        cplx(0.0, -0.5), cplx(0.0, 0.5), cplx(0.0), cplx(0.0),     //
        cplx(0.0), cplx(0.0), cplx(0.5), cplx(0.5),                //
        cplx(0.0), cplx(0.0), cplx(0.0, -0.5), cplx(0.0, 0.5);
    const Mat4c m = t * cinv;
    RulingFamily fa, fb;
    // family A: points (t₀,0,t₁,0) and (0,t₁,0,−t₀) in u-coordinates
    fa.p0 = m.col(0);
    fa.p1 = m.col(2);
    fa.q0 = -m.col(3);
    fa.q1 = m.col(1);
    // family B: points (s₀,0,0,−s₁) and (0,s₁,s₀,0)
    fb.p0 = m.col(0);
    fb.p1 = -m.col(3);
    fb.q0 = m.col(2);
    fb.q1 = m.col(1);
    for (RulingFamily* f : {&fa, &fb}) {
        f->A = wedge(f->p0, f->q0);
        f->C = wedge(f->p1, f->q1);
        f->B = wedge(f->p0, f->q1) + wedge(f->p1, f->q0);
    }
    return {fa, fb};
}

std::vector<PluckerLine> ruling_tangency_points(const ProjQuadric& q1, const ProjQuadric& q2,
                                                const Config& cfg) {
    auto r1 = rulings(q1, cfg);
    auto r2 = rulings(q2, cfg);
    const std::array<std::pair<const RulingFamily*, const ProjQuadric*>, 4> fams = {{
        {&r1.first, &q2},
        {&r1.second, &q2},
        {&r2.first, &q1},
        {&r2.second, &q1},
    }};
    std::vector<PluckerLine> out;
    out.reserve(16);
    for (const auto& [fam, other] : fams) {
        const Mat6c n = nu(other->matrix());
        BinaryForm f;
        f.coeffs = VecXc(5);
        f.coeffs << quad_eval(n, fam->A, fam->A),                                 //
            2.0 * quad_eval(n, fam->A, fam->B),                                   //
            2.0 * quad_eval(n, fam->A, fam->C) + quad_eval(n, fam->B, fam->B),    //
            2.0 * quad_eval(n, fam->B, fam->C),                                   //
            quad_eval(n, fam->C, fam->C);
        const double scale = std::max({fam->A.norm(), fam->B.norm(), fam->C.norm()});
        if (f.max_abs_coeff() < 1e-12 * n.norm() * scale * scale)
            fail(Err::NonGenericPair, "a ruling is identically tangent to the partner quadric");
        std::vector<FormRoot> roots = binary_form_roots(f, cfg);
        for (const FormRoot& r : roots)
            if (r.multiplicity != 1)
                fail(Err::NonGenericPair, "tangency parameters cluster on a ruling");
        for (const FormRoot& r : roots) out.push_back(fam->at(r.point));
    }
    return out;
}

// ---- intersection curve sampling ---------------------------------------------

namespace {

// The four intersection points of two smooth plane conics, via a rank-two
// member of their pencil (a pair of lines, each meeting the partner conic in
// two points). NonGeneric when the slice is tangential or degenerate.
std::vector<Vec3c> intersect_conics(const Mat3c& a, const Mat3c& b, const Config& cfg) {
    BinaryForm det3 = symqr::conic_pencil_det_form(a, b);
    if (det3.identically_zero) fail(Err::NonGeneric, "conic pencil everywhere singular");
    for (const FormRoot& r : binary_form_roots(det3, cfg)) {
        Mat3c s = r.point.lambda * a + r.point.mu * b;
        if (numeric_rank_svd(s, cfg.tol).rank != 2) continue;
        // intersect the two lines with whichever input conic is not the
        // singular member itself
        const Mat3c& target = (std::abs(r.point.mu) >= std::abs(r.point.lambda)) ? a : b;
        auto [u, w] = symqr::factor_rank_two_3(s, cfg);
        std::vector<Vec3c> pts;
        bool ok = true;
        for (const Vec3c& line : {u, w}) {
            MatXc lrow(1, 3);
            lrow.row(0) = line.transpose();
            MatXc basis = nullspace(lrow, 1e-10);
            if (basis.cols() != 2) {
                ok = false;
                break;
            }
            Mat2c cc = symmetrize((basis.transpose() * target * basis).eval());
            BinaryForm qf;
            qf.coeffs = VecXc(3);
            qf.coeffs << cc(0, 0), 2.0 * cc(0, 1), cc(1, 1);
            if (qf.max_abs_coeff() < 1e-12 * target.norm()) {
                ok = false;  // line lies on the conic: tangential slice
                break;
            }
            for (const FormRoot& rt : binary_form_roots(qf, cfg))
                pts.push_back(basis * Vec2c(rt.point.lambda, rt.point.mu));
        }
        if (!ok || pts.size() != 4) continue;
        bool distinct = true;
        for (size_t i = 0; i < pts.size() && distinct; ++i)
            for (size_t j = i + 1; j < pts.size() && distinct; ++j)
                distinct = proj_distance(canonicalized(pts[i]), canonicalized(pts[j])) >
                           cfg.tol_cluster;
        if (!distinct) continue;
        return pts;
    }
    fail(Err::NonGeneric, "no usable rank-two conic in the pencil");
}

}  // namespace

std::vector<PluckerLine> intersection_curve_tangents(const ProjQuadric& q1, const ProjQuadric& q2,
                                                     int n, const Config& cfg) {
    if (numeric_rank(q1, cfg.tol).rank != 4 || numeric_rank(q2, cfg.tol).rank != 4)
        fail(Err::Singular, "intersection curve sampling requires smooth quadrics");
    Rng rng(Rng::mix(cfg.seed, UINT64_C(0x65637572)));
    std::vector<PluckerLine> out;
    out.reserve(n);
    int failures = 0;
    while (static_cast<int>(out.size()) < n) {
        if (failures > 25)
            fail(Err::SingularIntersection, "plane slices of the intersection curve persistently degenerate");
        try {
            Vec4c h = rng.cgauss_vec(4);
            MatXc hrow(1, 4);
            hrow.row(0) = h.transpose();
            MatXc w = nullspace(hrow, 1e-10);
            if (w.cols() != 3) {
                ++failures;
                continue;
            }
            Mat3c a = w.transpose() * q1.matrix() * w;
            Mat3c b = w.transpose() * q2.matrix() * w;
            std::vector<PluckerLine> slice;
            for (const Vec3c& y : intersect_conics(a, b, cfg)) {
                Vec4c x = w * y;
                // tangent line at x: common kernel of the two gradient rows,
                // which contains x itself
                MatXc rows(2, 4);
                rows.row(0) = (q1.matrix() * x).transpose();
                rows.row(1) = (q2.matrix() * x).transpose();
                MatXc ker = nullspace(rows, 1e-8);
                if (ker.cols() != 2) fail(Err::NonGeneric, "gradients degenerate at sample point");
                slice.push_back(plucker_from_points(Vec4c(ker.col(0)), Vec4c(ker.col(1))));
            }
            for (const PluckerLine& l : slice)
                if (static_cast<int>(out.size()) < n) out.push_back(l);
            failures = 0;
        } catch (const Error&) {
            ++failures;
        }
    }
    return out;
}

}  // namespace tangentloci::linegeom
