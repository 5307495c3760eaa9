#include <doctest.h>

#include "tangentloci/baskets.hpp"
#include "tangentloci/complexmat.hpp"
#include "tangentloci/symqr.hpp"
#include "tangentloci/types.hpp"

#include <algorithm>
#include <cmath>

using namespace tangentloci;
using namespace tangentloci::baskets;
using symqr::ProjPoint1;
using symqr::ProjQuadric;

namespace {

Mat4c diag4(double a, double b, double c, double d) {
    Mat4c m = Mat4c::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

}  // namespace

TEST_CASE("mutual tangency along a conic is detected with its witness plane") {
    const Config cfg;
    Rng rng(7);

    const ProjQuadric hyp(diag4(1, 1, -1, -1)), sph(diag4(1, 1, 1, -1));
    const auto w = is_basket_pair(hyp, sph, cfg);
    REQUIRE(w.has_value());
    CHECK(symqr::distance(w->d, ProjQuadric(diag4(0, 0, 1, 0))) < 1e-9);  // x3²
    CHECK(w->residual < 1e-12);
    CHECK(is_basket_pair(sph, hyp, cfg).has_value());  // symmetric

    // concentric spheres of radius 1 and 2 touch along the plane at infinity
    const auto w2 =
        is_basket_pair(ProjQuadric(diag4(1, 1, 1, -1)), ProjQuadric(diag4(1, 1, 1, -4)), cfg);
    REQUIRE(w2.has_value());
    CHECK(symqr::distance(w2->d, ProjQuadric(diag4(0, 0, 0, 1))) < 1e-9);

    for (int k = 0; k < 20; ++k) {
        const ProjQuadric a(symmetrize(rng.cgauss_mat(4, 4)));
        const ProjQuadric b(symmetrize(rng.cgauss_mat(4, 4)));
        CHECK(!is_basket_pair(a, b, cfg));
    }

    CHECK_THROWS_WITH_AS((void)is_basket_pair(ProjQuadric(diag4(1, 1, 0, 0)), sph, cfg),
                         doctest::Contains("rank"), Error);
}

TEST_CASE("common-vertex cones carry three curves of shared basket partners") {
    const Config cfg;
    Rng rng(19);
    const ProjQuadric c1(diag4(1, 1, 1, 0)), c2(diag4(1, 4, 9, 0));
    const BasketCurveSet set = common_basket_curves(c1, c2, cfg);
    REQUIRE(set.curves.size() == 3);
    CHECK(!set.pencil_rank_one);
    for (const BasketCurve& c : set.curves)
        for (const cplx s : {cplx(1.0), cplx(-1.0), cplx(0.4, 0.3)}) {
            const BasketWitness bw = sample_basket(c, s, cfg);
            CHECK(bw.witnesses[0].residual < 1e-9);
            CHECK(bw.witnesses[1].residual < 1e-9);
            CHECK(is_basket_pair(bw.basket, ProjQuadric(c.q1), cfg).has_value());
            CHECK(is_basket_pair(bw.basket, ProjQuadric(c.q2), cfg).has_value());
        }

    // a single rank-two pencil member yields a single curve
    const BasketCurveSet one =
        common_basket_curves(ProjQuadric(diag4(1, 1, 2, 3)), ProjQuadric(diag4(1, 1, 1, 1)), cfg);
    CHECK(one.curves.size() == 1);

    // generic pairs share no basket partners
    const ProjQuadric r1(symmetrize(rng.cgauss_mat(4, 4)));
    const ProjQuadric r2(symmetrize(rng.cgauss_mat(4, 4)));
    const BasketCurveSet none = common_basket_curves(r1, r2, cfg);
    CHECK(none.curves.empty());
    CHECK(!none.pencil_rank_one);

    // the double:double parameter s = 0 is excluded
    bool threw = false;
    try {
        (void)sample_basket(set.curves[0], cplx(0.0), cfg);
    } catch (const Error& e) {
        threw = e.code() == Err::DegenerateParameter;
    }
    CHECK(threw);

    // s and −s sample the two members of a basket pair
    const BasketWitness bp = sample_basket(set.curves[0], cplx(0.7), cfg);
    const BasketWitness bm = sample_basket(set.curves[0], cplx(-0.7), cfg);
    CHECK(symqr::distance(bp.basket, bm.basket) > 1e-3);
}

TEST_CASE("a fixed-vertex rank-two pencil splits into its trio of double planes") {
    const Config cfg;
    Rng rng(23);
    const Mat4c m1 = diag4(1, 1, 0, 0), m2 = diag4(0, 1, 1, 0);
    const auto trio = trio_of_double_planes(symqr::make_pencil(m1, m2, cfg), cfg);
    int matched = 0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            Mat4c ek = Mat4c::Zero();
            ek(k, k) = 1.0;
            if (symqr::distance(trio[i], ProjQuadric(ek)) < 1e-8) ++matched;
        }
    CHECK(matched == 3);

    SUBCASE("the trio is equivariant under congruence") {
        const Mat4c a = rng.cgauss_mat(4, 4);
        const auto trioc = trio_of_double_planes(
            symqr::make_pencil(Mat4c(a.transpose() * m1 * a), Mat4c(a.transpose() * m2 * a), cfg),
            cfg);
        int matchedc = 0;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) {
                Mat4c ek = Mat4c::Zero();
                ek(k, k) = 1.0;
                if (symqr::distance(trioc[i], ProjQuadric(Mat4c(a.transpose() * ek * a))) < 1e-7)
                    ++matchedc;
            }
        CHECK(matchedc == 3);
    }

    SUBCASE("degenerate pencils are rejected with a reason") {
        bool clustered = false;
        try {
            (void)trio_of_double_planes(
                symqr::make_pencil(diag4(1, 1, 0, 0), diag4(1, 1, 1, 0), cfg), cfg);
        } catch (const Error& e) {
            clustered = e.code() == Err::ClusteredRoots;
        }
        CHECK(clustered);
        bool notfixed = false;
        try {
            (void)trio_of_double_planes(
                symqr::make_pencil(diag4(1, 2, 3, 4), diag4(4, 3, 2, 1), cfg), cfg);
        } catch (const Error& e) {
            notfixed = e.code() == Err::NotFixedVertex;
        }
        CHECK(notfixed);
    }
}

TEST_CASE("the three-term cross-ratio sum certifies perspective triangles") {
    const ProjPoint1 p1(0, 1), p2(1, 0), p3(-1, 1);
    const ProjPoint1 q1(-2, 1), q2(-1, 2), q3(1, 1);
    CHECK(check_c1(p1, p2, p3, q1, q2, q3) < 1e-12);
    CHECK(check_c1(p1, p2, p3, ProjPoint1(-1.7, 1), q2, q3) > 1e-3);
}

TEST_CASE("triangles of tangent quadrics in perspective recover the basket") {
    const Config cfg;
    Rng rng(29);
    for (int k = 0; k < 10; ++k) {
        const Mat4c bm = symmetrize(rng.cgauss_mat(4, 4));
        std::array<ProjQuadric, 3> q, d;
        for (int i = 0; i < 3; ++i) {
            const Mat4c qm = symmetrize(rng.cgauss_mat(4, 4));
            q[i] = ProjQuadric(qm);
            d[i] = ProjQuadric(Mat4c(rng.cgauss() * bm + rng.cgauss() * qm));
        }
        const BasketWitness w = desargues_basket(q, d, cfg);
        CHECK(symqr::distance(w.basket, ProjQuadric(bm)) < 1e-9);
        for (int i = 0; i < 3; ++i) CHECK(w.witnesses[i].residual < 1e-9);
    }
    bool threw = false;
    try {
        std::array<ProjQuadric, 3> q, d;
        for (int i = 0; i < 3; ++i) {
            q[i] = ProjQuadric(symmetrize(rng.cgauss_mat(4, 4)));
            d[i] = ProjQuadric(symmetrize(rng.cgauss_mat(4, 4)));
        }
        (void)desargues_basket(q, d, cfg);
    } catch (const Error& e) {
        threw = e.code() == Err::NotInPerspective;
    }
    CHECK(threw);
}

TEST_CASE("triangles inscribed in a conic through three marks") {
    const Config cfg;
    Rng rng(31);
    const Vec4c u = rng.cgauss_vec(4), v = rng.cgauss_vec(4);
    const cplx t1(0.3, 0.1), t2(-1.2, 0.4), t3(2.5, -0.2);
    const auto conic_pt = [](cplx t) { return Vec3c(cplx(1), t, t * t); };
    const auto chord_cov = [](cplx s, cplx t) { return Vec3c(s * t, -(s + t), cplx(1)); };

    SUBCASE("marks on a secant line give two triangles, one of them the generator") {
        const cplx al(0.9, -0.5), be(-0.35, 0.25);
        const Vec3c L0 = conic_pt(al), L1 = conic_pt(be);
        const auto meet = [&](cplx s, cplx t) {
            const Vec3c c = chord_cov(s, t);
            const cplx c0 = (c.transpose() * L0).value(), c1 = (c.transpose() * L1).value();
            return Vec3c(c1 * L0 - c0 * L1);
        };
        const std::array<Vec3c, 3> marks = {meet(t1, t2), meet(t2, t3), meet(t3, t1)};
        const std::vector<InscribedTriangle> tris =
            inscribed_triangles(u, v, chord_cov(al, be), marks, cfg);
        REQUIRE(tris.size() == 2);
        bool found = false;
        for (const InscribedTriangle& tri : tris) {
            CHECK(tri.residual < 1e-9);
            int hit = 0;
            for (const ProjPoint1& tp : tri.t)
                for (const cplx tt : {t1, t2, t3})
                    if (symqr::chordal(tp, ProjPoint1(tt, 1)) < 1e-8) ++hit;
            if (hit == 3) found = true;
        }
        CHECK(found);
    }

    SUBCASE("marks on a tangent line give one double triangle") {
        const cplx tau(0.8, 0.3);
        const Vec3c T0 = conic_pt(tau), T1(cplx(0), cplx(1), 2.0 * tau);
        const auto meet = [&](cplx s, cplx t) {
            const Vec3c c = chord_cov(s, t);
            const cplx c0 = (c.transpose() * T0).value(), c1 = (c.transpose() * T1).value();
            return Vec3c(c1 * T0 - c0 * T1);
        };
        const std::array<Vec3c, 3> marks = {meet(t1, t2), meet(t2, t3), meet(t3, t1)};
        const std::vector<InscribedTriangle> tris =
            inscribed_triangles(u, v, chord_cov(tau, tau), marks, cfg);
        REQUIRE(tris.size() == 1);
        CHECK(tris[0].residual < 1e-9);
        int hit = 0;
        for (const ProjPoint1& tp : tris[0].t)
            for (const cplx tt : {t1, t2, t3})
                if (symqr::chordal(tp, ProjPoint1(tt, 1)) < 1e-8) ++hit;
        CHECK(hit == 3);
    }
}

TEST_CASE("a generic plane section of the coordinate tetrahedron reconstructs it") {
    const Config cfg;
    Rng rng(37);
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
    const CompleteQuadrilateral cq = construct_typical_quadrilateral(d, plane, cfg);
    for (const QuadrilateralVertex& vert : cq.vertices) CHECK(vert.rank.rank == 2);
    const std::array<ProjQuadric, 4> rec = reconstruct_tetrahedron(cq, cfg);
    int matched = 0;
    for (const ProjQuadric& r : rec)
        for (const ProjQuadric& dd : d)
            if (symqr::distance(r, dd) < 1e-8) ++matched;
    CHECK(matched == 4);

    SUBCASE("four double planes through a common point use the conic-space branch") {
        std::array<ProjQuadric, 4> dc;
        for (int i = 0; i < 4; ++i) {
            Vec4c g = Vec4c::Zero();
            g.head(3) = rng.cgauss_vec(3);
            dc[i] = ProjQuadric(Mat4c(g * g.transpose()));
        }
        Eigen::Matrix<cplx, 4, 3> yc;
        for (int a = 0; a < 3; ++a) yc.col(a) = rng.cgauss_vec(4);
        std::array<ProjQuadric, 3> planec;
        for (int a = 0; a < 3; ++a) {
            Mat4c m = Mat4c::Zero();
            for (int j = 0; j < 4; ++j) m += yc(j, a) * dc[j].matrix();
            planec[a] = ProjQuadric(m);
        }
        const CompleteQuadrilateral cqc = construct_typical_quadrilateral(dc, planec, cfg);
        const std::array<ProjQuadric, 4> recc = reconstruct_tetrahedron(cqc, cfg);
        int matchedc = 0;
        for (const ProjQuadric& r : recc)
            for (const ProjQuadric& dd : dc)
                if (symqr::distance(r, dd) < 1e-7) ++matchedc;
        CHECK(matchedc == 4);
    }

    SUBCASE("planes through a tetrahedron vertex are rejected") {
        bool threw = false;
        try {
            const std::array<ProjQuadric, 3> bad = {d[0], plane[0], plane[1]};
            (void)construct_typical_quadrilateral(d, bad, cfg);
        } catch (const Error& e) {
            threw = e.code() == Err::PlaneThroughVertex;
        }
        CHECK(threw);
    }
}

TEST_CASE("cross-ratio relations hold for six marks cut by a line") {
    const cplx params[4] = {cplx(0.4, 0.2), cplx(-1.1, 0.5), cplx(1.9, -0.7), cplx(-0.3, -0.9)};
    const auto conic_pt = [](cplx t) { return Vec3c(cplx(1), t, t * t); };
    const auto chord_cov = [](cplx s, cplx t) { return Vec3c(s * t, -(s + t), cplx(1)); };

    SUBCASE("secant line") {
        const cplx al(0.75, 0.35), be(-0.6, -0.15);
        const Vec3c L0 = conic_pt(al), L1 = conic_pt(be);
        C3Marks marks;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                const Vec3c c = chord_cov(params[i], params[j]);
                const cplx c0 = (c.transpose() * L0).value(), c1 = (c.transpose() * L1).value();
                marks[i][j] = ProjPoint1(c1, -c0);
            }
        CHECK(check_c3_secant(marks, ProjPoint1(1, 0), ProjPoint1(0, 1)) < 1e-9);
        C3Marks bad = marks;
        bad[0][1] = bad[1][0] = ProjPoint1(bad[0][1].lambda + 0.05, bad[0][1].mu);
        CHECK(check_c3_secant(bad, ProjPoint1(1, 0), ProjPoint1(0, 1)) > 1e-4);
    }

    SUBCASE("tangent line") {
        const cplx tau(-0.45, 0.6);
        const Vec3c T0 = conic_pt(tau), T1(cplx(0), cplx(1), 2.0 * tau);
        C3Marks marks;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                const Vec3c c = chord_cov(params[i], params[j]);
                const cplx c0 = (c.transpose() * T0).value(), c1 = (c.transpose() * T1).value();
                marks[i][j] = ProjPoint1(c1, -c0);
            }
        CHECK(check_c3_tangent(marks, ProjPoint1(1, 0)) < 1e-9);
    }
}

TEST_CASE("the double four produces a (12_4, 16_3) incidence configuration") {
    const Config cfg;
    Rng rng(41);
    const ReyeConfiguration r = standard_double_four(cfg);
    const ReyeDegrees deg = reye_incidence(r, cfg);
    CHECK(deg.ok);
    CHECK(r.incidence.sum() == 48);
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 4; ++a) CHECK(is_basket_pair(r.q[i], r.b[a], cfg).has_value());
    for (const ProjQuadric& p : r.points) CHECK(symqr::numeric_rank(p, cfg.tol).rank == 2);
    for (const ReyeLine& l : r.lines) CHECK(symqr::numeric_rank(l.pencil.q1, cfg.tol).rank == 3);

    SUBCASE("the configuration is stable under congruence") {
        const Mat4c a = rng.cgauss_mat(4, 4);
        ReyeConfiguration rc = r;
        const auto conj = [&](const ProjQuadric& q) {
            return ProjQuadric(Mat4c(a.transpose() * q.matrix() * a));
        };
        for (int i = 0; i < 4; ++i) {
            rc.q[i] = conj(r.q[i]);
            rc.b[i] = conj(r.b[i]);
            rc.d[i] = conj(r.d[i]);
        }
        for (int i = 0; i < 12; ++i) rc.points[i] = conj(r.points[i]);
        for (int i = 0; i < 16; ++i)
            rc.lines[i].pencil =
                symqr::make_pencil(Mat4c(a.transpose() * r.lines[i].pencil.m1 * a),
                                   Mat4c(a.transpose() * r.lines[i].pencil.m2 * a), cfg);
        CHECK(reye_incidence(rc, cfg).ok);
    }

    SUBCASE("membership is recomputed, not trusted") {
        ReyeConfiguration rbad = r;
        rbad.points[5] = ProjQuadric(symmetrize(rng.cgauss_mat(4, 4)));
        CHECK(!reye_incidence(rbad, cfg).ok);
    }

    SUBCASE("a plane section of the d tetrad lands on configuration points") {
        const std::array<ProjQuadric, 3> plane = {ProjQuadric(diag4(1, 1, 0, 0)),
                                                  ProjQuadric(diag4(0, 0, 1, 1)),
                                                  ProjQuadric(diag4(1, 0, 0, 1))};
        const CompleteQuadrilateral cq = construct_typical_quadrilateral(r.d, plane, cfg);
        for (const QuadrilateralVertex& vert : cq.vertices) {
            bool hit = false;
            for (const ProjQuadric& p : r.points)
                if (symqr::distance(vert.q, p) < 1e-9) hit = true;
            CHECK(hit);
        }
        const std::array<ProjQuadric, 4> rec = reconstruct_tetrahedron(cq, cfg);
        int matched = 0;
        for (const ProjQuadric& rq : rec)
            for (const ProjQuadric& dd : r.d)
                if (symqr::distance(rq, dd) < 1e-8) ++matched;
        CHECK(matched == 4);
    }
}

TEST_CASE("every cross pencil of the double five meets the rank-one locus") {
    const Config cfg;
    const DoubleFive df = double_five(cfg);
    CHECK(df.pencils_with_rank_one == 25);
    CHECK(df.worst_residual < 1e-9);

    // the property is sensitive: perturbing one conic breaks some pencil
    Mat3c q4p = df.q[4];
    q4p(0, 1) += 1e-3;
    q4p(1, 0) += 1e-3;
    double worstp = 0.0;
    for (int j = 0; j < 5; ++j) {
        const symqr::BinaryForm det = symqr::conic_pencil_det_form(q4p, df.b[j]);
        double best = 1.0;
        for (const symqr::FormRoot& root : symqr::binary_form_roots(det, cfg)) {
            const Mat3c member = root.point.lambda * q4p + root.point.mu * df.b[j];
            const SvdRank sr = numeric_rank_svd(member, cfg.tol);
            best = std::min(best, sr.singular_values(1) / sr.singular_values(0));
        }
        worstp = std::max(worstp, best);
    }
    CHECK(worstp > 1e-7);
}
