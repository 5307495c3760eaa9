#include "tangentloci/spheres.hpp"

#include "tangentloci/complexmat.hpp"
#include "tangentloci/trivariate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tangentloci::spheres {

using linegeom::PluckerLine;
using linegeom::PVLine;
using symqr::ProjQuadric;
using trivariate::TriPoly;

namespace {

cplx bil(const Vec3c& a, const Vec3c& b) { return (a.array() * b.array()).sum(); }

Vec3c refoot(const Vec3c& p, const Vec3c& v) {
    const cplx vv = bil(v, v);
    if (std::abs(vv) == 0.0) return p;
    return p - v * (bil(p, v) / vv);
}

double config_scale(const std::array<Sphere, 4>& s) {
    double m = 1.0;
    for (const Sphere& sp : s) m = std::max({m, sp.center.norm(), sp.radius});
    return m;
}

std::array<ProjQuadric, 4> sphere_quadrics(const std::array<Sphere, 4>& s) {
    std::array<ProjQuadric, 4> q = {ProjQuadric(), ProjQuadric(), ProjQuadric(), ProjQuadric()};
    for (int i = 0; i < 4; ++i) q[i] = sphere_to_quadric(s[i]).second;
    return q;
}

// σ ratios of the centered 4×3 difference matrix.
void center_ratios(const std::array<Sphere, 4>& s, double& planarity, double& collinearity) {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const Sphere& sp : s) mean += sp.center;
    mean /= 4.0;
    Eigen::Matrix<double, 4, 3> d;
    for (int i = 0; i < 4; ++i) d.row(i) = (s[i].center - mean).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(d);
    const Eigen::Vector3d sv = svd.singularValues();
    planarity = sv(2) / sv(0);
    collinearity = sv(1) / sv(0);
}

bool triple_collinear(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                      double tol) {
    const Eigen::Vector3d u = b - a, w = c - a;
    return u.cross(w).norm() <= tol * u.norm() * w.norm();
}

// Gauge-fixed Newton on the full system ⟨p,v⟩ = 0, tangency to all four
// spheres; the largest component of v stays frozen at 1.
void newton_polish(Vec3c& p, Vec3c& v, const std::array<Sphere, 4>& s) {
    int i0 = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(v(k)) > std::abs(v(i0))) i0 = k;
    if (std::abs(v(i0)) == 0.0) return;
    v /= v(i0);
    const int f1 = (i0 == 0) ? 1 : 0, f2 = (i0 == 2) ? 1 : 2;

    auto eval = [&](const Vec3c& pp, const Vec3c& vv5, Eigen::Matrix<cplx, 5, 1>& F) {
        F(0) = bil(pp, vv5);
        const cplx vv = bil(vv5, vv5);
        for (int i = 0; i < 4; ++i) {
            const Vec3c d = pp - s[i].center.cast<cplx>();
            const cplx dv = bil(d, vv5);
            F(1 + i) = bil(d, d) * vv - dv * dv - cplx(s[i].radius * s[i].radius) * vv;
        }
    };

    Eigen::Matrix<cplx, 5, 1> F, Fn;
    eval(p, v, F);
    for (int iter = 0; iter < 30; ++iter) {
        Eigen::Matrix<cplx, 5, 5> J;
        J.row(0) << v(0), v(1), v(2), p(f1), p(f2);
        const cplx vv = bil(v, v);
        for (int i = 0; i < 4; ++i) {
            const Vec3c d = p - s[i].center.cast<cplx>();
            const cplx dv = bil(d, v), dd = bil(d, d), r2 = cplx(s[i].radius * s[i].radius);
            const Vec3c dp = 2.0 * (vv * d - dv * v);
            J(1 + i, 0) = dp(0);
            J(1 + i, 1) = dp(1);
            J(1 + i, 2) = dp(2);
            J(1 + i, 3) = 2.0 * ((dd - r2) * v(f1) - dv * d(f1));
            J(1 + i, 4) = 2.0 * ((dd - r2) * v(f2) - dv * d(f2));
        }
        Eigen::Matrix<cplx, 5, 1> delta = J.fullPivLu().solve(-F);
        if (!delta.allFinite()) break;
        const double zn = p.norm() + v.norm() + 1.0;
        if (delta.norm() > 1e6 * zn) break;
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h < 5; ++h) {
            Vec3c pn = p, vn = v;
            pn += step * delta.head<3>();
            vn(f1) += step * delta(3);
            vn(f2) += step * delta(4);
            eval(pn, vn, Fn);
            if (Fn.norm() <= F.norm() || delta.norm() * step <= 1e-15 * zn) {
                p = pn;
                v = vn;
                F = Fn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || delta.norm() <= 1e-15 * zn) break;
    }
    p = refoot(p, v);
}

// Canonicalize (p,v), decide reality, zero negligible imaginary parts.
bool realize(Vec3c& p, Vec3c& v, double tol, double scale) {
    int i0 = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(v(k)) > std::abs(v(i0))) i0 = k;
    v /= v(i0);
    p = refoot(p, v);
    const bool real = v.imag().norm() <= tol * v.real().norm() &&
                      p.imag().norm() <= tol * (scale + p.real().norm());
    if (real) {
        v = v.real().cast<cplx>();
        p = refoot(p.real().cast<cplx>(), v);
    }
    return real;
}

struct RawSolution {
    Vec3c p, v;
    int multiplicity;
};

std::vector<TangentSolution> finalize_solutions(std::vector<RawSolution> raw,
                                                const std::array<Sphere, 4>& s, const Config& cfg,
                                                int expected) {
    const double scale = config_scale(s);
    const std::array<ProjQuadric, 4> quads = sphere_quadrics(s);

    struct Entry {
        Vec6c plu;
        TangentSolution sol;
    };
    std::vector<Entry> entries;
    for (RawSolution& r : raw) {
        newton_polish(r.p, r.v, s);
        TangentSolution sol;
        sol.p = r.p;
        sol.v = r.v;
        sol.multiplicity = r.multiplicity;
        sol.is_real = realize(sol.p, sol.v, cfg.tol, scale);
        Vec4c a, b;
        a << sol.p, cplx(1.0);
        b << sol.v, cplx(0.0);
        PluckerLine line = linegeom::plucker_from_points(a, b);
        bool merged = false;
        for (Entry& e : entries)
            if (proj_distance(e.plu, line.x) <= cfg.tol_cluster) {
                e.sol.multiplicity += sol.multiplicity;
                merged = true;
                break;
            }
        if (merged) continue;
        for (int i = 0; i < 4; ++i)
            sol.residuals[i] = linegeom::is_tangent(line, quads[i], cfg.tol).residual;
        entries.push_back({line.x, sol});
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        for (int k = 0; k < 6; ++k) {
            if (a.plu(k).real() != b.plu(k).real()) return a.plu(k).real() < b.plu(k).real();
            if (a.plu(k).imag() != b.plu(k).imag()) return a.plu(k).imag() < b.plu(k).imag();
        }
        return false;
    });

    std::vector<TangentSolution> out;
    int total = 0;
    for (Entry& e : entries) {
        total += e.sol.multiplicity;
        out.push_back(std::move(e.sol));
    }
    if (expected > 0 && total != expected)
        fail(Err::DefectiveCount, "tangent multiplicities sum to " + std::to_string(total) +
                                      " instead of " + std::to_string(expected));
    return out;
}

TriPoly tri_vv() {
    TriPoly q(2);
    q.at(2, 0) = 1.0;
    q.at(0, 2) = 1.0;
    q.at(0, 0) = 1.0;
    return q;
}

TriPoly tri_axis(int axis) {
    Vec3c e = Vec3c::Zero();
    e(axis) = 1.0;
    return trivariate::tri_linear(e);
}

std::vector<RawSolution> generic_core(const std::array<Sphere, 4>& s, const Config& cfg,
                                      int& isotropic_excess) {
    isotropic_excess = 0;  // impossible for real affinely independent centers
    const Eigen::Vector3d o = s[0].center;
    const double r = s[0].radius;
    Eigen::Matrix3d M;
    Eigen::Vector3d phi0;
    for (int i = 1; i < 4; ++i) {
        const Eigen::Vector3d c = s[i].center - o;
        M.row(i - 1) = c.transpose();
        phi0(i - 1) = c.squaredNorm() + r * r - s[i].radius * s[i].radius;
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
    if (svd.singularValues()(2) <= 1e-10 * svd.singularValues()(0))
        fail(Err::NonGeneric, "centers are not affinely independent");
    const Eigen::Matrix3d Minv = M.inverse();

    const TriPoly vv = tri_vv();
    std::array<TriPoly, 3> phi;
    for (int i = 0; i < 3; ++i) {
        const TriPoly li = trivariate::tri_linear(M.row(i).transpose().cast<cplx>());
        phi[i] = trivariate::tri_add(trivariate::tri_scale(trivariate::tri_mul(li, li), -1.0),
                                     trivariate::tri_scale(vv, phi0(i)));
    }
    std::array<TriPoly, 3> w;
    for (int j = 0; j < 3; ++j) {
        w[j] = trivariate::tri_scale(phi[0], Minv(j, 0));
        w[j] = trivariate::tri_add(w[j], trivariate::tri_scale(phi[1], Minv(j, 1)));
        w[j] = trivariate::tri_add(w[j], trivariate::tri_scale(phi[2], Minv(j, 2)));
    }
    TriPoly cubic(3);
    for (int j = 0; j < 3; ++j) cubic = trivariate::tri_add(cubic, trivariate::tri_mul(w[j], tri_axis(j)));
    TriPoly quartic(4);
    for (int j = 0; j < 3; ++j) quartic = trivariate::tri_add(quartic, trivariate::tri_mul(w[j], w[j]));
    quartic = trivariate::tri_add(quartic,
                                  trivariate::tri_scale(trivariate::tri_mul(vv, vv), -4.0 * r * r));

    std::vector<RawSolution> raw;
    for (const trivariate::PlanePoint& root : trivariate::intersect_plane_curves(cubic, quartic, cfg)) {
        const Vec3c v = root.v;
        const cplx vvv = bil(v, v);
        if (std::abs(vvv) <= 1e-8 * v.squaredNorm()) continue;  // isotropic artifact
        Vec3c wv;
        for (int j = 0; j < 3; ++j) wv(j) = w[j].eval(v);
        Vec3c p = wv / (2.0 * vvv) + o.cast<cplx>();
        raw.push_back({refoot(p, v), v, root.multiplicity});
    }
    return raw;
}

// Shared coplanar elimination; assumes coplanar centers, tolerates a
// collinear triple as long as two of c₁,c₂,c₃ stay independent. Trapeze
// center quadrilaterals place two of the twelve elimination points on the
// isotropic conic (four for a parallelogram); those satisfy both curves but
// admit no affine line, so they are counted into isotropic_excess instead.
std::vector<RawSolution> coplanar_core(const std::array<Sphere, 4>& s, const Config& cfg,
                                       int& isotropic_excess) {
    isotropic_excess = 0;
    const Eigen::Vector3d o = s[0].center;
    const double r = s[0].radius;
    Eigen::Matrix3d D;
    for (int i = 1; i < 4; ++i) D.row(i - 1) = (s[i].center - o).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(D, Eigen::ComputeFullV);
    Eigen::Matrix3d R;  // columns: in-plane frame, then the normal
    R.col(0) = svd.matrixV().col(0);
    R.col(1) = svd.matrixV().col(1);
    R.col(2) = svd.matrixV().col(0).cross(svd.matrixV().col(1));

    Eigen::Matrix3d M;  // local centers, third coordinate suppressed
    Eigen::Vector3d phi0;
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d l = R.transpose() * D.row(i).transpose();
        l(2) = 0.0;
        M.row(i) = l.transpose();
        phi0(i) = l.squaredNorm() + r * r - s[i + 1].radius * s[i + 1].radius;
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> msvd(M, Eigen::ComputeFullU);
    if (msvd.singularValues()(1) <= 1e-10 * msvd.singularValues()(0))
        fail(Err::NonGeneric, "centers are collinear");
    const Eigen::Vector3d k = msvd.matrixU().col(2);  // kernel of Mᵀ

    // best-conditioned 2×2 row pair for the block inverse
    int bi = 0, bj = 1;
    double best = -1.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double det = std::abs(M(i, 0) * M(j, 1) - M(i, 1) * M(j, 0));
            const double nrm = M.row(i).norm() * M.row(j).norm();
            if (nrm > 0 && det / nrm > best) {
                best = det / nrm;
                bi = i;
                bj = j;
            }
        }
    if (best <= 1e-10) fail(Err::NonGeneric, "no independent center pair in the plane");
    Eigen::Matrix2d C2;
    C2 << M(bi, 0), M(bi, 1), M(bj, 0), M(bj, 1);
    const Eigen::Matrix2d C2inv = C2.inverse();

    const TriPoly vv = tri_vv();
    std::array<TriPoly, 3> phi;
    for (int i = 0; i < 3; ++i) {
        const TriPoly li = trivariate::tri_linear(M.row(i).transpose().cast<cplx>());
        phi[i] = trivariate::tri_add(trivariate::tri_scale(trivariate::tri_mul(li, li), -1.0),
                                     trivariate::tri_scale(vv, phi0(i)));
    }

    TriPoly conic(2);
    for (int i = 0; i < 3; ++i) conic = trivariate::tri_add(conic, trivariate::tri_scale(phi[i], k(i)));

    std::array<TriPoly, 2> w12;
    for (int a = 0; a < 2; ++a)
        w12[a] = trivariate::tri_add(trivariate::tri_scale(phi[bi], C2inv(a, 0)),
                                     trivariate::tri_scale(phi[bj], C2inv(a, 1)));
    TriPoly v3sq(2);
    v3sq.at(0, 0) = 1.0;
    TriPoly wnorm = trivariate::tri_add(trivariate::tri_mul(w12[0], w12[0]),
                                        trivariate::tri_mul(w12[1], w12[1]));
    wnorm = trivariate::tri_add(
        wnorm, trivariate::tri_scale(trivariate::tri_mul(vv, vv), -4.0 * r * r));
    TriPoly dotwv = trivariate::tri_add(trivariate::tri_mul(w12[0], tri_axis(0)),
                                        trivariate::tri_mul(w12[1], tri_axis(1)));
    const TriPoly sextic = trivariate::tri_add(trivariate::tri_mul(v3sq, wnorm),
                                               trivariate::tri_mul(dotwv, dotwv));

    std::vector<RawSolution> raw;
    auto to_world = [&](const Vec3c& x) { return Vec3c(R.cast<cplx>() * x); };
    for (const trivariate::PlanePoint& root : trivariate::intersect_plane_curves(conic, sextic, cfg)) {
        Vec3c v = root.v;
        const cplx vvv = bil(v, v);
        if (std::abs(vvv) <= 1e3 * cfg.tol * v.squaredNorm()) {
            isotropic_excess += root.multiplicity;
            continue;
        }
        Vec2c wval(w12[0].eval(v), w12[1].eval(v));
        if (std::abs(v(2)) > 1e-6 * v.norm()) {
            Vec3c p;
            p.head<2>() = wval / (2.0 * vvv);
            p(2) = -(p(0) * v(0) + p(1) * v(1)) / v(2);
            raw.push_back({refoot(to_world(p) + o.cast<cplx>(), to_world(v)), to_world(v),
                           root.multiplicity});
        } else {
            // direction inside the center plane: the sextic root is even in
            // v₃, and the two mirror feet share one projective direction
            v(2) = 0.0;
            const cplx vv12 = bil(v, v);
            if (std::abs(vv12) <= 1e-8 * v.squaredNorm()) continue;
            wval << w12[0].eval(v), w12[1].eval(v);
            Vec3c p;
            p.head<2>() = wval / (2.0 * vv12);
            const cplx p3sq = cplx(r * r) - p(0) * p(0) - p(1) * p(1);
            const cplx p3 = std::sqrt(p3sq);
            const Vec3c vw = to_world(v);
            const double s2 = config_scale(s) * config_scale(s);
            if (std::abs(p3sq) <= cfg.tol * s2) {
                p(2) = 0.0;
                raw.push_back({refoot(to_world(p) + o.cast<cplx>(), vw), vw, root.multiplicity});
            } else {
                const int m1 = root.multiplicity - root.multiplicity / 2;
                const int m2 = root.multiplicity / 2;
                p(2) = p3;
                raw.push_back({refoot(to_world(p) + o.cast<cplx>(), vw), vw, m1});
                if (m2 > 0) {
                    p(2) = -p3;
                    raw.push_back({refoot(to_world(p) + o.cast<cplx>(), vw), vw, m2});
                }
            }
        }
    }
    return raw;
}

std::vector<TangentSolution> run_with_reseed(
    const std::array<Sphere, 4>& s, const Config& cfg, int expected,
    std::vector<RawSolution> (*core)(const std::array<Sphere, 4>&, const Config&, int&),
    int* excess_out = nullptr) {
    Config attempt = cfg;
    for (int a = 0;; ++a) {
        try {
            int excess = 0;
            std::vector<RawSolution> raw = core(s, attempt, excess);
            std::vector<TangentSolution> out =
                finalize_solutions(std::move(raw), s, attempt, expected - excess);
            if (excess_out) *excess_out = excess;
            return out;
        } catch (const Error& e) {
            if (e.code() != Err::DefectiveCount || a >= 2) throw;
            attempt.seed = attempt.seed * 6364136223846793005ull + 1442695040888963407ull;
        }
    }
}

}  // namespace

// ---- sphere coordinates ----------------------------------------------------

Eigen::Matrix4d SphereCoords::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = m(1, 1) = m(2, 2) = a(0);
    for (int i = 0; i < 3; ++i) {
        m(i, 3) = a(1 + i);
        m(3, i) = a(1 + i);
    }
    m(3, 3) = a(4);
    return m;
}

double det_identity_residual(const SphereCoords& sc) {
    const double a0 = sc.a(0), a4 = sc.a(4);
    const Eigen::Vector3d b = sc.a.segment<3>(1);
    const double det = sc.a.norm() > 0 ? sc.matrix().determinant() : 0.0;
    const double rhs = -a0 * a0 * (b.squaredNorm() - a0 * a4);
    const double scale = std::pow(sc.a.norm(), 4);
    if (!(scale > 0)) return 0.0;
    return std::abs(det - rhs) / scale;
}

std::pair<SphereCoords, symqr::ProjQuadric> sphere_to_quadric(const Sphere& s) {
    if (!(s.radius > 0)) fail(Err::InvalidInput, "sphere radius must be positive");
    SphereCoords sc;
    sc.a(0) = 1.0;
    sc.a.segment<3>(1) = -s.center;
    sc.a(4) = s.center.squaredNorm() - s.radius * s.radius;
    return {sc, ProjQuadric(sc.matrix().cast<cplx>())};
}

// ---- dispatch geometry -------------------------------------------------------

CenterReport center_geometry(const std::array<Sphere, 4>& s, const Config& cfg) {
    const double scale = config_scale(s);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if ((s[i].center - s[j].center).norm() <= cfg.tol * scale)
                fail(Err::DuplicateCenters,
                     std::abs(s[i].radius - s[j].radius) <= cfg.tol * scale
                         ? "two spheres coincide"
                         : "two spheres are concentric");

    CenterReport rep;
    center_ratios(s, rep.planarity, rep.collinearity);
    const double lo = 1e-9, hi = 1e-7, mid = 1e-8;
    if (rep.planarity > mid) {
        rep.geometry = CenterGeometry::Generic;
        rep.borderline = rep.planarity < hi;
        return rep;
    }
    rep.borderline = rep.planarity > lo;
    if (rep.collinearity > mid) {
        rep.geometry = CenterGeometry::Coplanar;
        rep.borderline = rep.borderline || rep.collinearity < hi;
        for (int a = 0; a < 4 && !rep.three_collinear; ++a) {
            const int i = (a + 1) % 4, j = (a + 2) % 4, k = (a + 3) % 4;
            rep.three_collinear =
                triple_collinear(s[i].center, s[j].center, s[k].center, mid);
        }
    } else {
        rep.geometry = CenterGeometry::Collinear;
        rep.borderline = rep.borderline || rep.collinearity > lo;
    }
    return rep;
}

// ---- finite solvers ----------------------------------------------------------

std::vector<TangentSolution> common_tangents_generic(const std::array<Sphere, 4>& s,
                                                     const Config& cfg) {
    return run_with_reseed(s, cfg, 12, &generic_core);
}

std::vector<TangentSolution> common_tangents_coplanar(const std::array<Sphere, 4>& s,
                                                      const Config& cfg, int* isotropic_excess) {
    double planarity, collinearity;
    center_ratios(s, planarity, collinearity);
    if (planarity > 1e-7) fail(Err::NonGeneric, "centers are affinely independent");
    for (int a = 0; a < 4; ++a) {
        const int i = (a + 1) % 4, j = (a + 2) % 4, k = (a + 3) % 4;
        if (triple_collinear(s[i].center, s[j].center, s[k].center, 1e-8))
            fail(Err::ThreeCollinear, "three centers are collinear");
    }
    return run_with_reseed(s, cfg, 12, &coplanar_core, isotropic_excess);
}

// ---- collinear classifier ------------------------------------------------------

const char* degenerate_class_name(DegenerateClass c) {
    switch (c) {
        case DegenerateClass::CommonCircle: return "CommonCircle";
        case DegenerateClass::CommonPoint: return "CommonPoint";
        case DegenerateClass::Cylinder: return "Cylinder";
        case DegenerateClass::Cone: return "Cone";
        case DegenerateClass::Hyperboloid: return "Hyperboloid";
        case DegenerateClass::ComplexOnly: return "ComplexOnly";
        case DegenerateClass::None: return "None";
    }
    return "None";
}

double point_line_distance(const Eigen::Vector3d& x, const Eigen::Vector3d& p,
                           const Eigen::Vector3d& v) {
    const Eigen::Vector3d vh = v.normalized();
    const Eigen::Vector3d d = x - p;
    return (d - vh * d.dot(vh)).norm();
}

DegenerateReport classify_collinear(const std::array<Sphere, 4>& s, const Config& cfg) {
    const double scale = config_scale(s);
    const Eigen::Vector3d o = s[0].center;
    Eigen::Matrix3d D;
    for (int i = 1; i < 4; ++i) D.row(i - 1) = (s[i].center - o).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(D, Eigen::ComputeFullV);
    Eigen::Vector3d dir = svd.matrixV().col(0);
    int far = 1;
    for (int i = 2; i < 4; ++i)
        if ((s[i].center - o).norm() > (s[far].center - o).norm()) far = i;
    if (dir.dot(s[far].center - o) < 0) dir = -dir;

    DegenerateReport rep;
    rep.axis_point = o;
    rep.axis_dir = dir;
    for (int i = 0; i < 4; ++i) {
        const Eigen::Vector3d d = s[i].center - o;
        rep.abscissae[i] = d.dot(dir);
        if ((d - rep.abscissae[i] * dir).norm() > 1e3 * cfg.tol * scale)
            fail(Err::NonGeneric, "centers are not collinear");
    }

    // frame normal to the axis, deterministic
    int kmin = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(dir(k)) < std::abs(dir(kmin))) kmin = k;
    Eigen::Vector3d n1 = dir.cross(Eigen::Vector3d::Unit(kmin)).normalized();
    Eigen::Vector3d n2 = dir.cross(n1);

    const std::array<double, 4>& x = rep.abscissae;
    std::array<double, 4> r{};
    for (int i = 0; i < 4; ++i) r[i] = s[i].radius;

    // common circle / point: radical abscissae of all pairs must agree
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, xsum = 0.0;
    int pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double xs =
                ((x[j] * x[j] - x[i] * x[i]) - (r[j] * r[j] - r[i] * r[i])) / (2.0 * (x[j] - x[i]));
            xmin = std::min(xmin, xs);
            xmax = std::max(xmax, xs);
            xsum += xs;
            ++pairs;
        }
    if (xmax - xmin <= 1e3 * cfg.tol * scale) {
        const double xstar = xsum / pairs;
        double rho2 = 0.0;
        for (int i = 0; i < 4; ++i) rho2 += r[i] * r[i] - (xstar - x[i]) * (xstar - x[i]);
        rho2 /= 4.0;
        DegenerateEntry e;
        e.axis_x = xstar;
        if (rho2 > 1e3 * cfg.tol * scale * scale) {
            e.cls = DegenerateClass::CommonCircle;
            e.circle_radius = std::sqrt(rho2);
        } else if (rho2 >= -1e3 * cfg.tol * scale * scale) {
            e.cls = DegenerateClass::CommonPoint;
        } else {
            e.cls = DegenerateClass::ComplexOnly;  // imaginary common circle
        }
        rep.classes.push_back(e);
    }

    // meridian profile y² = Ax² + Bx + C inscribing every sphere:
    // the double-contact condition is linear in (u, A, B), u = B² − 4(A+1)C
    Eigen::Matrix<double, 4, 3> sys;
    Eigen::Matrix<double, 4, 1> rhs;
    for (int i = 0; i < 4; ++i) {
        sys(i, 0) = 1.0;
        sys(i, 1) = 4.0 * (r[i] * r[i] - x[i] * x[i]);
        sys(i, 2) = -4.0 * x[i];
        rhs(i) = -4.0 * r[i] * r[i];
    }
    const Eigen::Vector3d uab = sys.colPivHouseholderQr().solve(rhs);
    rep.meridian_residual = (sys * uab - rhs).norm() / (1.0 + rhs.norm());

    if (rep.meridian_residual <= 1e3 * cfg.tol) {
        const double u = uab(0), A = uab(1), B = uab(2);
        const double eA = 1e3 * cfg.tol, eB = 1e3 * cfg.tol * scale,
                     eC = 1e3 * cfg.tol * scale * scale;
        DegenerateEntry e;
        e.A = A;
        e.B = B;
        if (std::abs(A + 1.0) <= eA) {
            e.cls = DegenerateClass::ComplexOnly;  // profile collapses to a circle
            rep.classes.push_back(e);
        } else {
            e.C = (B * B - u) / (4.0 * (A + 1.0));
            if (std::abs(A) <= eA && std::abs(B) <= eB) {
                e.cls = e.C > eC ? DegenerateClass::Cylinder : DegenerateClass::ComplexOnly;
            } else if (std::abs(A) <= eA) {
                e.cls = DegenerateClass::ComplexOnly;  // parabolic profile, unruled
            } else if (A > 0) {
                const double disc = e.C - B * B / (4.0 * A);
                if (std::abs(disc) <= eC) e.cls = DegenerateClass::Cone;
                else if (disc > 0) e.cls = DegenerateClass::Hyperboloid;
                else e.cls = DegenerateClass::ComplexOnly;
            } else {
                e.cls = DegenerateClass::ComplexOnly;  // elliptic profile, unruled
            }
            rep.classes.push_back(e);

            // certify ruled classes with sampled rulings
            const int nsamp = 12;
            const std::array<ProjQuadric, 4> quads = sphere_quadrics(s);
            for (int t = 0; t < nsamp && e.cls != DegenerateClass::ComplexOnly; ++t) {
                const double th = 2.0 * M_PI * t / nsamp;
                Eigen::Vector3d pw, vw;
                if (e.cls == DegenerateClass::Cylinder) {
                    const double rc = std::sqrt(e.C);
                    pw = o + rc * (std::cos(th) * n1 + std::sin(th) * n2);
                    vw = dir;
                } else if (e.cls == DegenerateClass::Cone) {
                    const double x0 = -B / (2.0 * A), sa = std::sqrt(A);
                    pw = o + x0 * dir;
                    vw = dir + sa * (std::cos(th) * n1 + std::sin(th) * n2);
                } else {  // hyperboloid of one sheet
                    const double x0 = -B / (2.0 * A), sa = std::sqrt(A);
                    const double throat = std::sqrt(e.C - B * B / (4.0 * A));
                    pw = o + x0 * dir + throat * (std::cos(th) * n1 + std::sin(th) * n2);
                    vw = dir + sa * (-std::sin(th) * n1 + std::cos(th) * n2);
                }
                const Eigen::Vector3d vh = vw.normalized();
                const Eigen::Vector3d foot = pw - vh * pw.dot(vh);
                for (int i = 0; i < 4; ++i) {
                    if (std::abs(point_line_distance(s[i].center, foot, vh) - r[i]) >
                        1e3 * cfg.tol * scale)
                        fail(Err::NonGeneric, "ruling certification failed");
                    Vec4c pa, pb;
                    pa << foot.cast<cplx>(), cplx(1.0);
                    pb << vh.cast<cplx>(), cplx(0.0);
                    if (linegeom::is_tangent(linegeom::plucker_from_points(pa, pb), quads[i], cfg.tol)
                            .residual > 1e3 * cfg.tol)
                        fail(Err::NonGeneric, "ruling certification failed");
                }
                PVLine pv;
                pv.p = foot.cast<cplx>();
                pv.v = vh.cast<cplx>();
                rep.sample_tangents.push_back(pv);
            }
        }
    }

    if (rep.classes.empty()) rep.classes.push_back(DegenerateEntry{});
    return rep;
}

// ---- dispatch ------------------------------------------------------------------

SolveResult solve(const std::array<Sphere, 4>& s, const Config& cfg) {
    const double scale = config_scale(s);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if ((s[i].center - s[j].center).norm() <= cfg.tol * scale) {
                if (std::abs(s[i].radius - s[j].radius) <= cfg.tol * scale)
                    fail(Err::DuplicateCenters, "two spheres coincide");
                SolveResult res;
                res.complex_count = 0;
                res.note = "concentric pair: no common tangents in the affine part";
                return res;
            }

    const CenterReport geo = center_geometry(s, cfg);
    SolveResult res;
    res.regime = geo.geometry;
    res.borderline = geo.borderline;

    if (geo.geometry == CenterGeometry::Collinear) {
        res.degenerate = classify_collinear(s, cfg);
        bool infinite = false;
        for (const DegenerateEntry& e : res.degenerate->classes)
            if (e.cls != DegenerateClass::None) infinite = true;
        res.complex_count = infinite ? -1 : 0;
        return res;
    }

    if (geo.geometry == CenterGeometry::Coplanar) {
        if (geo.three_collinear) {
            res.note = "coplanar centers with a collinear triple; elimination stays valid";
            res.tangents = run_with_reseed(s, cfg, 12, &coplanar_core, &res.isotropic_excess);
        } else {
            res.tangents = common_tangents_coplanar(s, cfg, &res.isotropic_excess);
        }
        if (res.isotropic_excess > 0) {
            res.note += (res.note.empty() ? "" : "; ");
            res.note += "trapeze centers: " + std::to_string(res.isotropic_excess) +
                        " elimination points on the isotropic conic excluded";
        }
    } else {
        res.tangents = common_tangents_generic(s, cfg);
    }
    for (const TangentSolution& t : res.tangents) res.complex_count += t.multiplicity;

    if (geo.borderline) {
        res.note += (res.note.empty() ? "" : "; ");
        res.note += "borderline center geometry";
        try {
            int cross_excess = 0;
            std::vector<TangentSolution> cross =
                geo.geometry == CenterGeometry::Generic
                    ? run_with_reseed(s, cfg, 12, &coplanar_core, &cross_excess)
                    : run_with_reseed(s, cfg, 12, &generic_core, &cross_excess);
            int cc = 0;
            for (const TangentSolution& t : cross) cc += t.multiplicity;
            res.note += "; cross-regime count " + std::to_string(cc);
        } catch (const Error&) {
            res.note += "; cross-regime solver unavailable";
        }
    }
    return res;
}

// ---- basket conditions in the sphere family ---------------------------------------

namespace {

Eigen::Matrix<double, 5, 1> coord_vector(const Sphere& s) {
    return sphere_to_quadric(s).first.a;
}

}  // namespace

TripleBasketReport basket_conditions_spheres(const std::array<Sphere, 3>& s, const Config& cfg) {
    MatXc cols(5, 3);
    for (int i = 0; i < 3; ++i) cols.col(i) = coord_vector(s[i]).cast<cplx>();
    VecXc T = VecXc::Zero(5);
    T(4) = 1.0;
    TripleBasketReport rep;
    rep.span_residual = span_residual(cols, T);
    const Eigen::Vector3d u = s[1].center - s[0].center, w = s[2].center - s[0].center;
    rep.collinearity_residual = u.cross(w).norm() / std::max(u.norm() * w.norm(), 1e-300);
    rep.holds = rep.span_residual <= 1e3 * cfg.tol && rep.collinearity_residual <= 1e3 * cfg.tol;
    return rep;
}

QuadBasketReport basket_conditions_spheres(const std::array<Sphere, 4>& s, const Config& cfg) {
    std::array<Eigen::Matrix<double, 5, 1>, 4> a;
    for (int i = 0; i < 4; ++i) a[i] = coord_vector(s[i]);
    Eigen::Matrix<double, 5, 1> T = Eigen::Matrix<double, 5, 1>::Zero();
    T(4) = 1.0;

    const int pair_order[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& pr : pair_order) {
        const int i = pr[0], j = pr[1];
        Eigen::MatrixXd frame(5, 3);
        frame.col(0) = T;
        frame.col(1) = a[i];
        frame.col(2) = a[j];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(frame, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.singularValues()(2) <= 1e-6 * svd.singularValues()(0)) continue;

        int rest[2], nr = 0;
        for (int t = 0; t < 4; ++t)
            if (t != i && t != j) rest[nr++] = t;
        Eigen::Vector3d alpha = svd.solve(a[rest[0]]);
        Eigen::Vector3d beta = svd.solve(a[rest[1]]);
        const double span_a = (frame * alpha - a[rest[0]]).norm() / a[rest[0]].norm();
        const double span_b = (frame * beta - a[rest[1]]).norm() / a[rest[1]].norm();
        const double amin = std::min(std::abs(alpha(1)), std::abs(alpha(2)));
        const double bmin = std::min(std::abs(beta(1)), std::abs(beta(2)));
        if (amin <= 1e-6 * alpha.norm() || bmin <= 1e-6 * beta.norm()) continue;

        const double lhs = alpha(0) * (1.0 / alpha(1) + 1.0 / alpha(2));
        const double rhs = beta(0) * (1.0 / beta(1) + 1.0 / beta(2));
        QuadBasketReport rep;
        rep.identity_residual =
            std::max({std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)), span_a, span_b});
        rep.holds = rep.identity_residual <= 1e3 * cfg.tol;
        return rep;
    }
    fail(Err::FrameDegenerate, "no sphere pair spans an independent frame with the corner point");
}

// ---- isotropic exclusion ----------------------------------------------------------

double isotropic_exclusion_min(const std::array<Sphere, 4>& s, int grid, const Config& cfg) {
    (void)cfg;
    const Eigen::Vector3d o = s[0].center;
    Eigen::Matrix3d M;
    for (int i = 1; i < 4; ++i) M.row(i - 1) = (s[i].center - o).transpose();
    const Eigen::Matrix3d Minv = M.inverse();
    double cmax = 0.0;
    for (int i = 0; i < 3; ++i) cmax = std::max(cmax, M.row(i).norm());
    const double ref = Minv.norm() * cmax * cmax;

    double best = std::numeric_limits<double>::infinity();
    auto probe = [&](const cplx& t) {
        Vec3c v(1.0 - t * t, cplx(0, 1) * (1.0 + t * t), 2.0 * t);
        const double vn = v.norm();
        if (!(vn > 0)) return;
        v /= vn;
        Vec3c phi2;
        for (int i = 0; i < 3; ++i) {
            const cplx cv = bil(M.row(i).transpose().cast<cplx>(), v);
            phi2(i) = -cv * cv;
        }
        const Vec3c w = Minv.cast<cplx>() * phi2;
        const double res =
            std::max(std::abs(bil(w, v)) / ref, (w.norm() / ref) * (w.norm() / ref));
        best = std::min(best, res);
    };
    for (int a = 0; a < grid; ++a) {
        const double rad = std::pow(10.0, -2.0 + 4.0 * a / std::max(1, grid - 1));
        for (int b = 0; b < grid; ++b) {
            const double th = 2.0 * M_PI * b / grid;
            probe(rad * std::exp(cplx(0, th)));
        }
    }
    probe(cplx(0.0));
    return best;
}

}  // namespace tangentloci::spheres
