#include "tangentloci/selfcheck.hpp"

#include "tangentloci/baskets.hpp"
#include "tangentloci/complexmat.hpp"
#include "tangentloci/jsonio.hpp"
#include "tangentloci/linegeom.hpp"
#include "tangentloci/spheres.hpp"
#include "tangentloci/symqr.hpp"
#include "tangentloci/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace tangentloci::selfcheck {

namespace {

using symqr::ProjPoint1;
using symqr::ProjQuadric;

Mat4c diag4(double a, double b, double c, double d) {
    Mat4c m = Mat4c::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

cplx bil3(const Vec3c& a, const Vec3c& b) { return (a.array() * b.array()).sum(); }

ProjQuadric random_smooth_quadric(Rng& rng, const Config& cfg) {
    for (;;) {
        ProjQuadric q(symmetrize(rng.cgauss_mat(4, 4).eval()));
        const symqr::RankProfile rp = symqr::numeric_rank(q, cfg.tol);
        if (rp.rank == 4 && rp.singular_values(3) >= 1e-4 * rp.singular_values(0)) return q;
    }
}

// A line tangent to q at a point x0 found on a random chord, with a random
// direction inside the tangent plane at x0.
linegeom::PluckerLine random_tangent_line(const ProjQuadric& q, Rng& rng) {
    for (;;) {
        const Vec4c a = rng.cgauss_vec(4), b = rng.cgauss_vec(4);
        // q(a + t b) = 0
        const cplx qaa = (a.transpose() * q.matrix() * a).value();
        const cplx qab = (a.transpose() * q.matrix() * b).value();
        const cplx qbb = (b.transpose() * q.matrix() * b).value();
        const cplx disc = std::sqrt(qab * qab - qaa * qbb);
        if (std::abs(qbb) < 1e-8) continue;
        const cplx t = (-qab + disc) / qbb;
        const Vec4c x0 = a + t * b;
        const Vec4c grad = q.matrix() * x0;  // tangent plane covector at x0
        Vec4c y = rng.cgauss_vec(4);
        const cplx gy = (grad.transpose() * y).value();
        const cplx gB = (grad.transpose() * b).value();
        if (std::abs(gB) < 1e-10) continue;
        y -= (gy / gB) * b;  // now grad^T y = 0
        try {
            return linegeom::plucker_from_points(x0, y);
        } catch (const Error&) {
            continue;
        }
    }
}

struct Runner {
    std::vector<CheckResult> out;
    const Config& cfg;

    void run(const char* name, const std::function<void(CheckResult&)>& fn) {
        CheckResult r;
        r.name = name;
        try {
            fn(r);
        } catch (const Error& e) {
            r.pass = false;
            r.note = std::string(err_name(e.code())) + ": " + e.what();
        } catch (const std::exception& e) {
            r.pass = false;
            r.note = e.what();
        }
        out.push_back(std::move(r));
    }
};

void held_below(CheckResult& r, double metric, double threshold, const char* what) {
    r.metric = metric;
    r.threshold = threshold;
    r.pass = metric <= threshold;
    if (r.note.empty()) r.note = what;
}

void held_above(CheckResult& r, double metric, double threshold, const char* what) {
    r.metric = metric;
    r.threshold = threshold;
    r.pass = metric >= threshold;
    if (r.note.empty()) r.note = what;
}

}  // namespace

std::vector<CheckResult> run_all(const Config& cfg) {
    Runner R{.out = {}, .cfg = cfg};

    // ---- sphere coordinates ------------------------------------------------

    R.run("sphere-determinant-identity", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 101));
        double worst = 0;
        for (int k = 0; k < 2000; ++k) {
            spheres::SphereCoords sc;
            for (int i = 0; i < 5; ++i) sc.a(i) = rng.gauss();
            worst = std::max(worst, spheres::det_identity_residual(sc));
        }
        held_below(r, worst, 1e-12, "worst |det - closed form| / |a|^4 over 2000 draws");
    });

    // ---- line geometry -----------------------------------------------------

    R.run("plucker-embedding", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 102));
        double worst = 0;
        for (int k = 0; k < 100; ++k)
            worst = std::max(
                worst,
                linegeom::plucker_from_points(rng.cgauss_vec(4), rng.cgauss_vec(4)).g_residual());
        held_below(r, worst, 1e-12, "worst Grassmannian residual of lines through point pairs");
    });

    R.run("pv-chart-roundtrip", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 103));
        double worst = 0;
        for (int k = 0; k < 100; ++k) {
            const linegeom::PluckerLine l =
                linegeom::plucker_from_points(rng.cgauss_vec(4), rng.cgauss_vec(4));
            const linegeom::PluckerLine back = linegeom::pv_to_plucker(linegeom::plucker_to_pv(l));
            worst = std::max(worst, proj_distance(back.x, l.x));
        }
        held_below(r, worst, 1e-9, "worst Plucker -> foot/direction -> Plucker distance");
    });

    R.run("orthogonal-involution", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 104));
        double worst = 0;
        for (int k = 0; k < 100; ++k) {
            const linegeom::PluckerLine l =
                linegeom::plucker_from_points(rng.cgauss_vec(4), rng.cgauss_vec(4));
            worst = std::max(
                worst,
                proj_distance(linegeom::plucker_orthogonal(linegeom::plucker_orthogonal(l)).x, l.x));
        }
        held_below(r, worst, 1e-10, "worst distance of orthogonal-of-orthogonal from identity");
    });

    R.run("tangency-gram-identity", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 105));
        double worst = 0;
        for (int k = 0; k < 100; ++k) {
            const Vec4c a = rng.cgauss_vec(4), b = rng.cgauss_vec(4);
            const Mat4c q = symmetrize(rng.cgauss_mat(4, 4).eval());
            const Vec6c w = linegeom::wedge(a, b);
            const cplx lhs = (w.transpose() * linegeom::nu(q) * w).value();
            const cplx qaa = (a.transpose() * q * a).value(), qab = (a.transpose() * q * b).value();
            const cplx qbb = (b.transpose() * q * b).value();
            const cplx rhs = qaa * qbb - qab * qab;
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
        }
        held_below(r, worst, 1e-10,
                   "worst defect of <a^b, nu(Q) a^b> against the 2x2 tangency Gram determinant");
    });

    R.run("duality-identity", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 106));
        double worst = 0;
        for (int k = 0; k < 200; ++k)
            worst = std::max(worst, linegeom::duality_identity_residual(
                                        random_smooth_quadric(rng, cfg), cfg));
        held_below(r, worst, 1e-10, "worst nu(adjugate) vs pairing-conjugated nu over 200 quadrics");
    });

    R.run("duality-closed-form", [&](CheckResult& r) {
        held_below(r, linegeom::duality_identity_residual(ProjQuadric(diag4(1, 2, 3, 4)), cfg),
                   1e-14, "duality identity residual on the diagonal 1,2,3,4 quadric");
    });

    R.run("tangency-transfer", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 107));
        double worst = 0;
        for (int k = 0; k < 200; ++k) {
            const ProjQuadric q = random_smooth_quadric(rng, cfg);
            const linegeom::PluckerLine l = random_tangent_line(q, rng);
            worst = std::max(worst, linegeom::is_tangent(l, q, cfg.tol).residual);
            worst = std::max(worst, linegeom::is_tangent(linegeom::plucker_orthogonal(l),
                                                         linegeom::dual_quadric(q, cfg), cfg.tol)
                                        .residual);
        }
        held_below(r, worst, 1e-8,
                   "worst residual of tangent lines and their orthogonals against the dual");
    });

    R.run("euclidean-tangency-agreement", [&](CheckResult& r) {
        // tangency on the Grassmannian agrees with |distance(center, line) - radius|
        Rng rng(Rng::mix(cfg.seed, 108));
        double worst = 0;
        for (int k = 0; k < 100; ++k) {
            const Eigen::Vector3d c(rng.gauss(), rng.gauss(), rng.gauss());
            const double rad = 0.5 + rng.uniform();
            const spheres::Sphere sp{c, rad};
            // a real tangent line: touch point c + rad*n, direction orthogonal to n
            Eigen::Vector3d n(rng.gauss(), rng.gauss(), rng.gauss());
            n.normalize();
            Eigen::Vector3d u(rng.gauss(), rng.gauss(), rng.gauss());
            u -= u.dot(n) * n;
            u.normalize();
            const Eigen::Vector3d p = c + rad * n;
            worst = std::max(worst, std::abs(spheres::point_line_distance(c, p, u) - rad));
            Vec4c ph, vh;
            ph << p.cast<cplx>(), cplx(1);
            vh << u.cast<cplx>(), cplx(0);
            worst = std::max(worst, linegeom::is_tangent(linegeom::plucker_from_points(ph, vh),
                                                         spheres::sphere_to_quadric(sp).second,
                                                         cfg.tol)
                                        .residual);
        }
        held_below(r, worst, 1e-10, "geometric touch lines pass both tangency oracles");
    });

    // ---- rank strata and factorization --------------------------------------

    R.run("rank-factor-roundtrip", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 109));
        double worst = 0;
        for (int k = 0; k < 50; ++k) {
            const Vec4c u = rng.cgauss_vec(4), v = rng.cgauss_vec(4);
            const ProjQuadric one(Mat4c(u * u.transpose()));
            const Vec4c fu = symqr::factor_rank_one(one, cfg);
            worst = std::max(worst,
                             symqr::distance(ProjQuadric(Mat4c(fu * fu.transpose())), one));
            const Mat4c two = 0.5 * (u * v.transpose() + v * u.transpose());
            const auto [a, b] = symqr::factor_rank_two(ProjQuadric(two), cfg);
            const Mat4c rec = 0.5 * (a * b.transpose() + b * a.transpose());
            worst = std::max(worst, symqr::distance(ProjQuadric(rec), ProjQuadric(two)));
        }
        held_below(r, worst, 1e-9, "worst reconstruction distance of rank-1/rank-2 factorizations");
    });

    R.run("pencil-root-census", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 110));
        int deviation = 0;
        // fixed-vertex cone pencil: three rank-two members counting multiplicity
        {
            const symqr::Pencil p = symqr::make_pencil(diag4(1, 1, 1, 0), diag4(1, 4, 9, 0), cfg);
            const symqr::SingularPencilClass c = symqr::classify_singular_pencil(p, cfg);
            int mult = 0;
            for (const symqr::SingularPoint& sp : c.special_points) mult += sp.multiplicity;
            deviation += std::abs(mult - 3);
            if (c.kind != symqr::PencilKind::FixedVertex) ++deviation;
        }
        // pencil spanned by two double planes: exactly two rank-one members
        const Vec4c u = rng.cgauss_vec(4), v = rng.cgauss_vec(4), w = rng.cgauss_vec(4);
        {
            const symqr::Pencil p = symqr::make_pencil(Mat4c(u * u.transpose()),
                                                       Mat4c(v * v.transpose()), cfg);
            const symqr::SingularPencilClass c = symqr::classify_singular_pencil(p, cfg);
            deviation += std::abs(c.double_plane_count - 2);
        }
        // plane pairs through a common plane u: no rank-one member
        {
            const Mat4c m1 = 0.5 * (u * v.transpose() + v * u.transpose());
            const Mat4c m2 = 0.5 * (u * w.transpose() + w * u.transpose());
            const symqr::Pencil p = symqr::make_pencil(m1, m2, cfg);
            const symqr::SingularPencilClass c = symqr::classify_singular_pencil(p, cfg);
            deviation += std::abs(c.double_plane_count - 0);
        }
        held_below(r, deviation, 0, "total census deviation over the three pencil strata fixtures");
    });

    // ---- cross-ratios and perspective ----------------------------------------

    R.run("cross-ratio-invariance", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 111));
        double worst = 0;
        for (int k = 0; k < 50; ++k) {
            ProjPoint1 pts[4];
            for (ProjPoint1& p : pts) p = ProjPoint1(rng.cgauss(), rng.cgauss());
            Mat2c m;
            do {
                m = rng.cgauss_mat(2, 2);
            } while (std::abs(m.determinant()) < 1e-2);
            ProjPoint1 im[4];
            for (int i = 0; i < 4; ++i)
                im[i] = ProjPoint1(m(0, 0) * pts[i].lambda + m(0, 1) * pts[i].mu,
                                   m(1, 0) * pts[i].lambda + m(1, 1) * pts[i].mu);
            const cplx c0 = symqr::cross_ratio(pts[0], pts[1], pts[2], pts[3]).value();
            const cplx c1 = symqr::cross_ratio(im[0], im[1], im[2], im[3]).value();
            worst = std::max(worst, std::abs(c0 - c1) / (1.0 + std::abs(c0)));
        }
        held_below(r, worst, 1e-9, "worst cross-ratio drift under random Moebius maps");
    });

    R.run("perspective-sum-fixture", [&](CheckResult& r) {
        const double res = baskets::check_c1(ProjPoint1(0, 1), ProjPoint1(1, 0), ProjPoint1(-1, 1),
                                             ProjPoint1(-2, 1), ProjPoint1(-1, 2), ProjPoint1(1, 1));
        held_below(r, res, 1e-12, "three-term cross-ratio sum defect on the reference six-tuple");
    });

    R.run("perspective-sum-randomized", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 112));
        double worst = 0;
        int made = 0;
        auto bracket = [](const ProjPoint1& x, const ProjPoint1& y) {
            return x.lambda * y.mu - y.lambda * x.mu;
        };
        while (made < 100) {
            const ProjPoint1 p1(rng.cgauss(), 1), p2(rng.cgauss(), 1), p3(rng.cgauss(), 1);
            const ProjPoint1 q1(rng.cgauss(), 1), q2(rng.cgauss(), 1);
            const cplx r1 = symqr::cross_ratio(p1, p2, p3, q1).value();
            const cplx r2 = symqr::cross_ratio(p2, p3, p1, q2).value();
            const cplx c3 = cplx(1.5) - r1 - r2;
            // solve (p3,p1;p2,q3) = c3 for q3, a linear-fractional condition
            const cplx A = bracket(p3, p2), B = bracket(p1, p2);
            const ProjPoint1 q3(A * p1.lambda - c3 * B * p3.lambda,
                                A * p1.mu - c3 * B * p3.mu);
            if (std::abs(q3.lambda) + std::abs(q3.mu) < 1e-6) continue;
            worst = std::max(worst, baskets::check_c1(p1, p2, p3, q1, q2, q3));
            ++made;
        }
        held_below(r, worst, 1e-9, "worst sum defect over 100 constructed perspective six-tuples");
    });

    R.run("desargues-recovery", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 113));
        double worst = 0;
        for (int k = 0; k < 10; ++k) {
            const Mat4c bm = symmetrize(rng.cgauss_mat(4, 4).eval());
            std::array<ProjQuadric, 3> q, d;
            for (int i = 0; i < 3; ++i) {
                const Mat4c qm = symmetrize(rng.cgauss_mat(4, 4).eval());
                q[i] = ProjQuadric(qm);
                d[i] = ProjQuadric(Mat4c(rng.cgauss() * bm + rng.cgauss() * qm));
            }
            const baskets::BasketWitness w = baskets::desargues_basket(q, d, cfg);
            worst = std::max(worst, symqr::distance(w.basket, ProjQuadric(bm)));
            for (const baskets::TangencyWitness& tw : w.witnesses)
                worst = std::max(worst, tw.residual);
        }
        held_below(r, worst, 1e-9, "worst recovery distance of the perspective point over 10 trials");
    });

    // ---- baskets --------------------------------------------------------------

    R.run("basket-pair-detect", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 114));
        int bad = 0;
        const auto w1 = baskets::is_basket_pair(ProjQuadric(diag4(1, 1, -1, -1)),
                                                ProjQuadric(diag4(1, 1, 1, -1)), cfg);
        if (!w1 || symqr::distance(w1->d, ProjQuadric(diag4(0, 0, 1, 0))) > 1e-9) ++bad;
        const auto w2 = baskets::is_basket_pair(ProjQuadric(diag4(1, 1, 1, -1)),
                                                ProjQuadric(diag4(1, 1, 1, -4)), cfg);
        if (!w2 || symqr::distance(w2->d, ProjQuadric(diag4(0, 0, 0, 1))) > 1e-9) ++bad;
        for (int k = 0; k < 20; ++k) {
            const ProjQuadric a(symmetrize(rng.cgauss_mat(4, 4).eval()));
            const ProjQuadric b(symmetrize(rng.cgauss_mat(4, 4).eval()));
            if (baskets::is_basket_pair(a, b, cfg)) ++bad;
        }
        held_below(r, bad, 0, "misclassifications over constructed positives and random negatives");
    });

    R.run("basket-curve-samples", [&](CheckResult& r) {
        const baskets::BasketCurveSet set = baskets::common_basket_curves(
            ProjQuadric(diag4(1, 1, 1, 0)), ProjQuadric(diag4(1, 4, 9, 0)), cfg);
        if (set.curves.size() != 3) {
            held_below(r, std::abs((double)set.curves.size() - 3.0), 0,
                       "common-vertex cone pair must carry three basket curves");
            return;
        }
        double worst = 0;
        for (const baskets::BasketCurve& c : set.curves)
            for (cplx s : {cplx(1.0), cplx(-1.0), cplx(0.4, 0.3)}) {
                const baskets::BasketWitness bw = baskets::sample_basket(c, s, cfg);
                for (const baskets::TangencyWitness& tw : bw.witnesses)
                    worst = std::max(worst, tw.residual);
                if (!baskets::is_basket_pair(bw.basket, ProjQuadric(c.q1), cfg) ||
                    !baskets::is_basket_pair(bw.basket, ProjQuadric(c.q2), cfg))
                    worst = std::max(worst, 1.0);
            }
        held_below(r, worst, 1e-8, "worst witness residual over sampled baskets on all three curves");
    });

    R.run("reye-configuration", [&](CheckResult& r) {
        const baskets::ReyeConfiguration rey = baskets::standard_double_four(cfg);
        const baskets::ReyeDegrees deg = baskets::reye_incidence(rey, cfg);
        int deviation = deg.ok ? 0 : 1;
        deviation += std::abs(rey.incidence.sum() - 48);
        for (int i = 0; i < 4; ++i)
            for (int a = 0; a < 4; ++a)
                if (!baskets::is_basket_pair(rey.q[i], rey.b[a], cfg)) ++deviation;
        for (const ProjQuadric& p : rey.points)
            if (symqr::numeric_rank(p, cfg.tol).rank != 2) ++deviation;
        held_below(r, deviation, 0,
                   "degree table, incidence sum, basket pairs, and point ranks of the double four");
    });

    R.run("double-five", [&](CheckResult& r) {
        const baskets::DoubleFive df = baskets::double_five(cfg);
        if (df.pencils_with_rank_one != 25) {
            held_below(r, 25.0 - df.pencils_with_rank_one, 0,
                       "cross pencils missing a rank-one member");
            return;
        }
        held_below(r, df.worst_residual, 1e-9, "worst rank-one residual over the 25 cross pencils");
    });

    R.run("quadrilateral-roundtrip", [&](CheckResult& r) {
        Rng rng(Rng::mix(cfg.seed, 115));
        std::array<ProjQuadric, 4> d;
        for (int i = 0; i < 4; ++i) {
            Mat4c e = Mat4c::Zero();
            e(i, i) = 1.0;
            d[i] = ProjQuadric(e);
        }
        Eigen::Matrix<cplx, 4, 3> y;
        for (int a = 0; a < 3; ++a) y.col(a) = rng.cgauss_vec(4);
        std::array<ProjQuadric, 3> plane;
        for (int a = 0; a < 3; ++a) {
            Mat4c m = Mat4c::Zero();
            for (int j = 0; j < 4; ++j) m += y(j, a) * d[j].matrix();
            plane[a] = ProjQuadric(m);
        }
        const baskets::CompleteQuadrilateral cq =
            baskets::construct_typical_quadrilateral(d, plane, cfg);
        double worst = 0;
        for (const baskets::QuadrilateralVertex& vert : cq.vertices)
            if (vert.rank.rank != 2) worst = 1.0;
        const std::array<ProjQuadric, 4> rec = baskets::reconstruct_tetrahedron(cq, cfg);
        for (const ProjQuadric& q : rec) {
            double best = 1.0;
            for (const ProjQuadric& dd : d) best = std::min(best, symqr::distance(q, dd));
            worst = std::max(worst, best);
        }
        held_below(r, worst, 1e-8,
                   "worst distance of reconstructed tetrahedron vertices from the generators");
    });

    // ---- rulings and intersection curves ---------------------------------------

    R.run("ruling-tangents-sixteen", [&](CheckResult& r) {
        const ProjQuadric q1(diag4(1, 1, 1, -1)), q2(diag4(1, 2, 3, -5));
        const std::vector<linegeom::PluckerLine> lines =
            linegeom::ruling_tangency_points(q1, q2, cfg);
        if (lines.size() != 16) {
            held_below(r, std::abs((double)lines.size() - 16.0), 0,
                       "ruling tangency count must be sixteen");
            return;
        }
        double worst = 0;
        for (const linegeom::PluckerLine& l : lines) {
            worst = std::max(worst, linegeom::is_tangent(l, q1, cfg.tol).residual);
            worst = std::max(worst, linegeom::is_tangent(l, q2, cfg.tol).residual);
        }
        double mind = 10;
        for (size_t i = 0; i < lines.size(); ++i)
            for (size_t j = i + 1; j < lines.size(); ++j)
                mind = std::min(mind, proj_distance(lines[i].x, lines[j].x));
        if (mind < 1e-6) worst = std::max(worst, 1.0);
        held_below(r, worst, 1e-8, "worst two-sided tangency residual of the sixteen ruling lines");
    });

    R.run("intersection-curve-tangents", [&](CheckResult& r) {
        const Mat4c m1 = diag4(1, 1, 1, -1), m2 = diag4(1, 2, 3, -5);
        const std::vector<linegeom::PluckerLine> lines =
            linegeom::intersection_curve_tangents(ProjQuadric(m1), ProjQuadric(m2), 20, cfg);
        Rng rng(Rng::mix(cfg.seed, 116));
        double worst = lines.size() == 20 ? 0.0 : 1.0;
        for (const linegeom::PluckerLine& l : lines)
            for (int k = 0; k < 5; ++k) {
                const Mat4c mem = rng.cgauss() * m1 + rng.cgauss() * m2;
                worst = std::max(worst, linegeom::is_tangent(l, ProjQuadric(mem), cfg.tol).residual);
            }
        held_below(r, worst, 1e-7,
                   "worst tangency residual of curve tangents against random pencil members");
    });

    // ---- sphere solver ----------------------------------------------------------

    const std::array<spheres::Sphere, 4> tetra = {
        spheres::Sphere{{0, 0, 0}, 0.25}, spheres::Sphere{{1, 0, 0}, 0.25},
        spheres::Sphere{{0, 1, 0}, 0.25}, spheres::Sphere{{0, 0, 1}, 0.25}};

    R.run("tangent-count-generic", [&](CheckResult& r) {
        const spheres::SolveResult res = spheres::solve(tetra, cfg);
        int total = 0;
        double worst = 0;
        for (const spheres::TangentSolution& t : res.tangents) {
            total += t.multiplicity;
            for (double x : t.residuals) worst = std::max(worst, x);
        }
        if (total != 12) {
            r.note = "tangent multiplicities sum to " + std::to_string(total) + ", want 12";
            held_below(r, std::abs(total - 12), 0, "");
            return;
        }
        held_below(r, worst, 1e-7, "worst tangency residual over the twelve tetrahedron tangents");
    });

    R.run("tangent-count-coplanar", [&](CheckResult& r) {
        const Eigen::Vector3d a(1.0, 0.2, 0.0), b(-0.3, 1.1, 0.0);
        const double r1 = 0.30, r2 = 0.45, r3 = 0.52, r4 = 0.38;
        const std::array<spheres::Sphere, 4> s = {
            spheres::Sphere{a, r1}, spheres::Sphere{b, r2}, spheres::Sphere{-a, r3},
            spheres::Sphere{-b, r4}};
        const spheres::SolveResult res = spheres::solve(s, cfg);
        int total = 0;
        double worst = 0;
        for (const spheres::TangentSolution& t : res.tangents) {
            total += t.multiplicity;
            // foot of the line relative to the quadrilateral centre (the origin),
            // where opposite-sphere subtraction pins the two linear conditions
            const cplx vv = bil3(t.v, t.v);
            const Vec3c foot = t.p - (bil3(t.p, t.v) / vv) * t.v;
            worst = std::max(worst, std::abs(bil3(a.cast<cplx>(), foot) -
                                             cplx((r3 * r3 - r1 * r1) / 4)));
            worst = std::max(worst, std::abs(bil3(b.cast<cplx>(), foot) -
                                             cplx((r4 * r4 - r2 * r2) / 4)));
        }
        if (total + res.isotropic_excess != 12) {
            r.note = "affine sum " + std::to_string(total) + " + isotropic excess " +
                     std::to_string(res.isotropic_excess) + " misses 12";
            held_below(r, std::abs(total + res.isotropic_excess - 12), 0, "");
            return;
        }
        held_below(r, worst, 1e-9,
                   "worst closed-form defect of the parallelogram foot coordinates");
    });

    R.run("degenerate-classifier", [&](CheckResult& r) {
        const std::array<spheres::Sphere, 4> cyl = {
            spheres::Sphere{{0, 0, 0}, 1}, spheres::Sphere{{1, 0, 0}, 1},
            spheres::Sphere{{2, 0, 0}, 1}, spheres::Sphere{{3, 0, 0}, 1}};
        const spheres::SolveResult res = spheres::solve(cyl, cfg);
        if (!res.degenerate || res.degenerate->classes.size() != 1 ||
            res.degenerate->classes[0].cls != spheres::DegenerateClass::Cylinder ||
            res.degenerate->sample_tangents.size() < 10) {
            r.note = "equal-radii collinear fixture must classify as a cylinder with samples";
            held_below(r, 1.0, 0, "");
            return;
        }
        double worst = 0;
        for (const linegeom::PVLine& pv : res.degenerate->sample_tangents)
            for (const spheres::Sphere& sp : cyl)
                worst = std::max(worst, std::abs(spheres::point_line_distance(
                                                     sp.center, pv.p.real(), pv.v.real()) -
                                                 sp.radius));
        held_below(r, worst, 1e-8, "worst Euclidean residual of the certified cylinder rulings");
    });

    R.run("similarity-equivariance", [&](CheckResult& r) {
        // regular tetrahedron with radii in the all-real window: 12 real tangents
        const double h = std::sqrt(3.0) / 2.0;
        const std::array<spheres::Sphere, 4> s = {
            spheres::Sphere{{0, 0, 0}, 0.52}, spheres::Sphere{{1, 0, 0}, 0.52},
            spheres::Sphere{{0.5, h, 0}, 0.52},
            spheres::Sphere{{0.5, h / 3, std::sqrt(2.0 / 3.0)}, 0.52}};
        Eigen::Matrix3d rot =
            Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
        const Eigen::Vector3d shift(2.0, -0.5, 1.0);
        const double sigma = 1.7;
        std::array<spheres::Sphere, 4> sm;
        for (int i = 0; i < 4; ++i)
            sm[i] = spheres::Sphere{sigma * (rot * s[i].center) + shift, sigma * s[i].radius};
        const spheres::SolveResult r1 = spheres::solve(s, cfg);
        double worst = 0;
        int nreal = 0;
        for (const spheres::TangentSolution& t : r1.tangents) {
            if (!t.is_real) continue;
            ++nreal;
            const Eigen::Vector3d p = sigma * (rot * t.p.real()) + shift;
            const Eigen::Vector3d v = rot * t.v.real();
            for (const spheres::Sphere& sp : sm)
                worst = std::max(worst,
                                 std::abs(spheres::point_line_distance(sp.center, p, v) - sp.radius));
        }
        if (nreal == 0) worst = 1.0;  // fixture is built to carry real tangents
        held_below(r, worst, 1e-7, "mapped real tangents stay tangent under a similarity map");
    });

    R.run("sphere-basket-conditions", [&](CheckResult& r) {
        const Eigen::Vector3d d(0, 1, 0), t0(0.2, 0.5, -0.7);
        int bad = 0;
        double worst = 0;
        const std::array<spheres::Sphere, 3> tri = {spheres::Sphere{t0 - 1.2 * d, 0.7},
                                                    spheres::Sphere{t0 + 0.4 * d, 0.3},
                                                    spheres::Sphere{t0 + 2.0 * d, 1.1}};
        const spheres::TripleBasketReport tr = spheres::basket_conditions_spheres(tri, cfg);
        if (!tr.holds) ++bad;
        worst = std::max(worst, tr.span_residual);
        std::array<spheres::Sphere, 3> tri2 = tri;
        tri2[2].center += Eigen::Vector3d(1, 0, 0);
        if (spheres::basket_conditions_spheres(tri2, cfg).holds) ++bad;
        const double s2 = std::sqrt(0.5);
        std::array<spheres::Sphere, 4> cone, gen;
        Rng rng(Rng::mix(cfg.seed, 118));
        for (int i = 0; i < 4; ++i) {
            cone[i] = spheres::Sphere{t0 + (1.0 + i) * d, (1.0 + i) * s2};
            gen[i] = spheres::Sphere{Eigen::Vector3d(rng.gauss(), rng.gauss(), rng.gauss()),
                                     0.2 + 0.6 * rng.uniform()};
        }
        const spheres::QuadBasketReport qc = spheres::basket_conditions_spheres(cone, cfg);
        if (!qc.holds) ++bad;
        worst = std::max(worst, qc.identity_residual);
        if (spheres::basket_conditions_spheres(gen, cfg).holds) ++bad;
        if (bad > 0) {
            r.note = std::to_string(bad) + " of the four basket-condition verdicts are wrong";
            held_below(r, bad, 0, "");
            return;
        }
        held_below(r, worst, 1e-9, "worst residual on the holding basket-condition fixtures");
    });

    R.run("isotropic-exclusion", [&](CheckResult& r) {
        held_above(r, spheres::isotropic_exclusion_min(tetra, 32, cfg), 1e-8,
                   "elimination data must stay clear of the isotropic conic (pass above threshold)");
    });

    R.run("serialization-determinism", [&](CheckResult& r) {
        const std::string a = jsonio::solve_result_json(spheres::solve(tetra, cfg));
        const std::string b = jsonio::solve_result_json(spheres::solve(tetra, cfg));
        held_below(r, a == b ? 0.0 : 1.0, 0, "two identical runs serialize byte-identically");
    });

    return R.out;
}

}  // namespace tangentloci::selfcheck
