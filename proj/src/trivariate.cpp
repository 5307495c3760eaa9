// Homogeneous trivariate polynomials over C and intersection of plane curves
// by Sylvester resultants evaluated on interpolation nodes.

#include "tangentloci/trivariate.hpp"

#include "tangentloci/complexmat.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tangentloci::trivariate {

using symqr::BinaryForm;
using symqr::FormRoot;

int TriPoly::index(int i, int j) const {
    // block of fixed i has deg−i+1 entries (j = 0..deg−i)
    return i * (deg + 1) - i * (i - 1) / 2 + j;
}

cplx TriPoly::eval(const Vec3c& v) const {
    VecXc p1(deg + 1), p2(deg + 1), p3(deg + 1);
    p1(0) = p2(0) = p3(0) = cplx(1.0);
    for (int k = 1; k <= deg; ++k) {
        p1(k) = p1(k - 1) * v(0);
        p2(k) = p2(k - 1) * v(1);
        p3(k) = p3(k - 1) * v(2);
    }
    cplx acc(0.0);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg - i; ++j) acc += at(i, j) * p1(i) * p2(j) * p3(deg - i - j);
    return acc;
}

double TriPoly::max_abs() const {
    double s = 0.0;
    for (int k = 0; k < c.size(); ++k) s = std::max(s, std::abs(c(k)));
    return s;
}

TriPoly tri_constant(cplx a) {
    TriPoly p(0);
    p.c(0) = a;
    return p;
}

TriPoly tri_linear(const Vec3c& a) {
    TriPoly p(1);
    p.at(1, 0) = a(0);
    p.at(0, 1) = a(1);
    p.at(0, 0) = a(2);
    return p;
}

TriPoly tri_add(const TriPoly& a, const TriPoly& b) {
    if (a.deg != b.deg) fail(Err::InvalidInput, "degree mismatch in polynomial sum");
    TriPoly out(a.deg);
    out.c = a.c + b.c;
    return out;
}

TriPoly tri_scale(const TriPoly& a, cplx s) {
    TriPoly out = a;
    out.c *= s;
    return out;
}

TriPoly tri_mul(const TriPoly& a, const TriPoly& b) {
    TriPoly out(a.deg + b.deg);
    for (int i1 = 0; i1 <= a.deg; ++i1)
        for (int j1 = 0; j1 <= a.deg - i1; ++j1) {
            const cplx ca = a.at(i1, j1);
            if (ca == cplx(0.0)) continue;
            for (int i2 = 0; i2 <= b.deg; ++i2)
                for (int j2 = 0; j2 <= b.deg - i2; ++j2)
                    out.at(i1 + i2, j1 + j2) += ca * b.at(i2, j2);
        }
    return out;
}

TriPoly tri_diff(const TriPoly& p, int axis) {
    if (p.deg == 0) return TriPoly(0);
    TriPoly out(p.deg - 1);
    for (int i = 0; i <= p.deg; ++i) {
        for (int j = 0; j <= p.deg - i; ++j) {
            const cplx v = p.at(i, j);
            if (v == cplx(0.0)) continue;
            if (axis == 0 && i > 0) out.at(i - 1, j) += static_cast<double>(i) * v;
            if (axis == 1 && j > 0) out.at(i, j - 1) += static_cast<double>(j) * v;
            if (axis == 2 && p.deg - i - j > 0) out.at(i, j) += static_cast<double>(p.deg - i - j) * v;
        }
    }
    return out;
}

TriPoly tri_linear_change(const TriPoly& p, const Mat3c& m) {
    // powers of the three substituted linear forms ⟨m.row(k), v⟩
    std::vector<std::vector<TriPoly>> pw(3);
    for (int k = 0; k < 3; ++k) {
        pw[k].push_back(tri_constant(cplx(1.0)));
        if (p.deg >= 1) pw[k].push_back(tri_linear(Vec3c(m.row(k))));
        for (int e = 2; e <= p.deg; ++e) pw[k].push_back(tri_mul(pw[k][e - 1], pw[k][1]));
    }
    TriPoly out(p.deg);
    for (int i = 0; i <= p.deg; ++i) {
        for (int j = 0; j <= p.deg - i; ++j) {
            const cplx ca = p.at(i, j);
            if (ca == cplx(0.0)) continue;
            TriPoly term = tri_mul(tri_mul(pw[0][i], pw[1][j]), pw[2][p.deg - i - j]);
            out = tri_add(out, tri_scale(term, ca));
        }
    }
    return out;
}

BinaryForm restrict_to_line(const TriPoly& p, const Vec3c& a, const Vec3c& b) {
    VecXc samples(p.deg + 1);
    for (int k = 0; k <= p.deg; ++k) {
        cplx t = symqr::form_sample_node(p.deg, k);
        samples(k) = p.eval(Vec3c(t * a + b));
    }
    return symqr::form_from_samples(samples);
}

namespace {

// coefficients of p(λ,μ,z) as a univariate polynomial in z, ascending
VecXc univariate_in_v3(const TriPoly& p, cplx lambda, cplx mu) {
    VecXc out = VecXc::Zero(p.deg + 1);
    VecXc p1(p.deg + 1), p2(p.deg + 1);
    p1(0) = p2(0) = cplx(1.0);
    for (int k = 1; k <= p.deg; ++k) {
        p1(k) = p1(k - 1) * lambda;
        p2(k) = p2(k - 1) * mu;
    }
    for (int i = 0; i <= p.deg; ++i)
        for (int j = 0; j <= p.deg - i; ++j) out(p.deg - i - j) += p.at(i, j) * p1(i) * p2(j);
    return out;
}

cplx sylvester_det(const VecXc& a, const VecXc& b) {
    const int m = static_cast<int>(a.size()) - 1;
    const int n = static_cast<int>(b.size()) - 1;
    MatXc s = MatXc::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + k) = a(m - k);
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + k) = b(n - k);
    return Eigen::PartialPivLU<MatXc>(s).determinant();
}

cplx horner(const VecXc& asc, cplx z) {
    cplx acc(0.0);
    for (int k = static_cast<int>(asc.size()) - 1; k >= 0; --k) acc = acc * z + asc(k);
    return acc;
}

double poly_value_scale(const VecXc& asc, cplx z) {
    double acc = 0.0, zp = 1.0, az = std::abs(z);
    for (int k = 0; k < asc.size(); ++k) {
        acc += std::abs(asc(k)) * zp;
        zp *= az;
    }
    return acc;
}

}  // namespace

std::vector<PlanePoint> intersect_plane_curves(const TriPoly& f, const TriPoly& g,
                                               const Config& cfg) {
    const int m = f.deg, n = g.deg;
    const double fscale = f.max_abs(), gscale = g.max_abs();
    if (!(fscale > 0.0) || !(gscale > 0.0)) fail(Err::IdenticallyZero, "zero plane curve");
    if (m == 0 || n == 0) return {};
    const int bez = m * n;

    const TriPoly fx = tri_diff(f, 0), fy = tri_diff(f, 1), fz = tri_diff(f, 2);
    const TriPoly gx = tri_diff(g, 0), gy = tri_diff(g, 1), gz = tri_diff(g, 2);

    Rng rng(Rng::mix(cfg.seed, UINT64_C(0x747269736f6c76)));
    for (int attempt = 0; attempt < 5; ++attempt) {
        Mat3c u = rng.unitary(3);
        TriPoly ff = tri_linear_change(f, u);
        TriPoly gg = tri_linear_change(g, u);
        // ff.at(0,0) is the coefficient of v₃^m: it must stay away from zero so
        // the pivot direction sees all roots at finite v₃
        if (std::abs(ff.at(0, 0)) < 1e-8 * fscale) continue;
        if (std::abs(gg.at(0, 0)) < 1e-8 * gscale) continue;

        VecXc samples(bez + 1);
        bool all_tiny = true;
        for (int k = 0; k <= bez; ++k) {
            cplx t = symqr::form_sample_node(bez, k);
            VecXc av = univariate_in_v3(ff, t, cplx(1.0));
            VecXc bv = univariate_in_v3(gg, t, cplx(1.0));
            samples(k) = sylvester_det(av, bv);
            double ascale = 0.0, bscale = 0.0;
            for (int e = 0; e < av.size(); ++e) ascale = std::max(ascale, std::abs(av(e)));
            for (int e = 0; e < bv.size(); ++e) bscale = std::max(bscale, std::abs(bv(e)));
            all_tiny = all_tiny &&
                       std::abs(samples(k)) < 1e-12 * std::pow(ascale, n) * std::pow(bscale, m);
        }
        BinaryForm res = symqr::form_from_samples(samples);
        res.identically_zero = all_tiny;
        if (res.identically_zero)
            fail(Err::IdenticallyZero, "plane curves share a component (resultant vanishes)");

        std::vector<FormRoot> roots;
        try {
            roots = binary_form_roots(res, cfg);
        } catch (const Error&) {
            continue;
        }

        std::vector<PlanePoint> out;
        out.reserve(bez);
        bool ok = true;
        for (const FormRoot& r : roots) {
            VecXc av = univariate_in_v3(ff, r.point.lambda, r.point.mu);
            VecXc bv = univariate_in_v3(gg, r.point.lambda, r.point.mu);
            std::vector<cplx> zs = symqr::poly_roots_ascending(av);
            cplx zbest(0.0);
            double best = 1e300;
            int small_count = 0;
            for (const cplx& z : zs) {
                double rel = std::abs(horner(bv, z)) / std::max(1e-300, poly_value_scale(bv, z));
                if (rel < 1e-6) ++small_count;
                if (rel < best) {
                    best = rel;
                    zbest = z;
                }
            }
            // exactly one shared v₃ per projection point: a second one means
            // the frame stacked two intersection points, a large minimum
            // means the resultant root failed back-substitution
            if (best > 1e-6 || small_count > r.multiplicity) {
                ok = false;
                break;
            }
            Vec3c v = u * Vec3c(r.point.lambda, r.point.mu, zbest);
            v = canonicalized(v);
            if (r.multiplicity == 1) {
                // Newton polish on the original pair in the dominant affine chart
                int fixed = 0;
                for (int k = 1; k < 3; ++k)
                    if (std::abs(v(k)) > std::abs(v(fixed))) fixed = k;
                for (int it = 0; it < 12; ++it) {
                    Vec3c grad_f(fx.eval(v), fy.eval(v), fz.eval(v));
                    Vec3c grad_g(gx.eval(v), gy.eval(v), gz.eval(v));
                    Vec2c rhs(-f.eval(v), -g.eval(v));
                    Mat2c jac;
                    int col = 0;
                    for (int k = 0; k < 3; ++k) {
                        if (k == fixed) continue;
                        jac(0, col) = grad_f(k);
                        jac(1, col) = grad_g(k);
                        ++col;
                    }
                    const cplx det = jac(0, 0) * jac(1, 1) - jac(0, 1) * jac(1, 0);
                    if (!(std::abs(det) > 1e-14)) break;
                    Vec2c step;
                    step(0) = (rhs(0) * jac(1, 1) - rhs(1) * jac(0, 1)) / det;
                    step(1) = (jac(0, 0) * rhs(1) - jac(1, 0) * rhs(0)) / det;
                    col = 0;
                    for (int k = 0; k < 3; ++k) {
                        if (k == fixed) continue;
                        v(k) += step(col++);
                    }
                    if (step.norm() <= 1e-15 * v.norm()) break;
                }
                v = canonicalized(v);
            }
            PlanePoint pp;
            pp.v = v;
            pp.multiplicity = r.multiplicity;
            pp.residual = std::max(std::abs(f.eval(v)) / fscale, std::abs(g.eval(v)) / gscale);
            out.push_back(pp);
        }
        if (!ok) continue;
        return out;
    }
    fail(Err::NonGeneric, "no usable frame for plane curve intersection");
}

}  // namespace tangentloci::trivariate
