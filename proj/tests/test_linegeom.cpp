#include <doctest.h>

#include "tangentloci/complexmat.hpp"
#include "tangentloci/linegeom.hpp"
#include "tangentloci/types.hpp"

#include <algorithm>
#include <cmath>

using namespace tangentloci;
using namespace tangentloci::linegeom;
using symqr::ProjQuadric;

namespace {

Mat4c diag4(cplx a, cplx b, cplx c, cplx d) {
    Mat4c m = Mat4c::Zero();
    m.diagonal() << a, b, c, d;
    return m;
}

ProjQuadric random_smooth_quadric(Rng& rng, const Config& cfg) {
    for (;;) {
        ProjQuadric q(symmetrize(rng.cgauss_mat(4, 4).eval()));
        const symqr::RankProfile rp = numeric_rank(q, cfg.tol);
        if (rp.rank == 4 && rp.singular_values(3) >= 1e-4 * rp.singular_values(0)) return q;
    }
}

}  // namespace

TEST_CASE("foot/direction chart round-trips through line coordinates") {
    PVLine l;
    l.p << cplx(0), cplx(0), cplx(1);
    l.v << cplx(1), cplx(0), cplx(0);
    const PluckerLine pl = pv_to_plucker(l);
    CHECK(pl.g_residual() < 1e-14);
    const PVLine back = plucker_to_pv(pl);
    CHECK((back.p - l.p).norm() < 1e-12);
    // direction recovered up to scale
    CHECK(std::abs(back.v(1)) < 1e-12);
    CHECK(std::abs(back.v(2)) < 1e-12);
    CHECK(std::abs(back.v(0)) > 0.9);

    Rng rng(2);
    for (int k = 0; k < 100; ++k) {
        const PluckerLine x = plucker_from_points(rng.cgauss_vec(4), rng.cgauss_vec(4));
        CHECK(x.g_residual() < 1e-12);
        const PluckerLine rt = pv_to_plucker(plucker_to_pv(x));
        CHECK(proj_distance(rt.x, x.x) < 1e-9);
    }
}

TEST_CASE("the quadratic line map is diagonal on diagonal quadrics") {
    const Mat6c n = nu(diag4(1, 2, 3, 4));
    // pairwise products of the diagonal, in lex order of the index pairs
    const double want[6] = {2, 3, 4, 6, 8, 12};
    std::vector<double> got;
    for (int i = 0; i < 6; ++i) got.push_back(n(i, i).real());
    std::sort(got.begin(), got.end());
    for (int i = 0; i < 6; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    double off = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j) off = std::max(off, std::abs(n(i, j)));
    CHECK(off < 1e-14);
}

TEST_CASE("the dual of a diagonal quadric has reciprocal diagonal") {
    const Config cfg;
    const ProjQuadric pq(diag4(1, 2, 3, 4));
    const Mat4c dm = dual_quadric(pq, cfg).matrix();
    // 1/1 : 1/2 : 1/3 : 1/4 = 24 : 12 : 8 : 6
    CHECK((dm(0, 0) / dm(3, 3)).real() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK((dm(1, 1) / dm(3, 3)).real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK((dm(2, 2) / dm(3, 3)).real() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(duality_identity_residual(pq, cfg) < 1e-14);
}

TEST_CASE("tangent-line duality holds across the smooth stratum") {
    const Config cfg;
    Rng rng(7);
    double worst = 0;
    for (int k = 0; k < 1000; ++k)
        worst = std::max(worst, duality_identity_residual(random_smooth_quadric(rng, cfg), cfg));
    CHECK(worst < 1e-10);
}

TEST_CASE("the orthogonal-line map is an involution sending e12 to e34") {
    Vec4c a = Vec4c::Zero(), b = Vec4c::Zero();
    a(0) = 1;
    b(1) = 1;
    const PluckerLine l = plucker_from_points(a, b);
    const PluckerLine o = plucker_orthogonal(l);
    // e1^e2 has only the (1,2) coordinate; its orthogonal has only (3,4)
    CHECK(std::abs(o.x(5)) > 0.9);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(o.x(i)) < 1e-14);
    CHECK(proj_distance(plucker_orthogonal(o).x, l.x) < 1e-14);

    Rng rng(4);
    for (int k = 0; k < 50; ++k) {
        const PluckerLine x = plucker_from_points(rng.cgauss_vec(4), rng.cgauss_vec(4));
        CHECK(proj_distance(plucker_orthogonal(plucker_orthogonal(x)).x, x.x) < 1e-10);
    }
}

TEST_CASE("ruling families lie on their quadric and are tangent to it") {
    const Config cfg;
    const ProjQuadric pq(diag4(1, 1, 1, -1));
    const auto [fa, fb] = rulings(pq, cfg);
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        const symqr::ProjPoint1 t(rng.cgauss(), rng.cgauss());
        for (const RulingFamily* f : {&fa, &fb}) {
            const PluckerLine l = f->at(t);
            CHECK(l.g_residual() < 1e-10);
            CHECK(is_tangent(l, pq, cfg.tol).residual < 1e-10);
            const auto [u, v] = f->span_at(t);
            CHECK(std::abs(pq.eval(Vec4c(u.normalized()))) < 1e-10);
            CHECK(std::abs(pq.eval(Vec4c(v.normalized()))) < 1e-10);
        }
    }
    // lines of one family are pairwise skew; lines of opposite families meet
    const symqr::ProjPoint1 t0(cplx(1), cplx(0)), t1(cplx(0), cplx(1));
    const Mat6c G = plucker_pairing();
    const cplx pair_same = (fa.at(t0).x.transpose() * G * fa.at(t1).x).value();
    const cplx pair_opp = (fa.at(t0).x.transpose() * G * fb.at(t1).x).value();
    CHECK(std::abs(pair_same) > 1e-3);
    CHECK(std::abs(pair_opp) < 1e-10);
}

TEST_CASE("two smooth quadrics share sixteen ruling tangents") {
    const Config cfg;
    const ProjQuadric q1(diag4(1, 1, 1, -1)), q2(diag4(1, 2, 3, -5));
    const std::vector<PluckerLine> lines = ruling_tangency_points(q1, q2, cfg);
    REQUIRE(lines.size() == 16);
    for (const PluckerLine& l : lines) {
        CHECK(l.g_residual() < 1e-10);
        CHECK(is_tangent(l, q1, cfg.tol).residual < 1e-8);
        CHECK(is_tangent(l, q2, cfg.tol).residual < 1e-8);
    }
    double min_d = 10;
    for (size_t i = 0; i < lines.size(); ++i)
        for (size_t j = i + 1; j < lines.size(); ++j)
            min_d = std::min(min_d, proj_distance(lines[i].x, lines[j].x));
    CHECK(min_d > 1e-3);
}

TEST_CASE("degenerate pairs are rejected by the ruling-tangent construction") {
    const Config cfg;
    const ProjQuadric q1(diag4(1, 1, 1, -1));
    CHECK_THROWS_AS((void)ruling_tangency_points(q1, q1, cfg), Error);
    // this pair produces a perfect-square restriction (clustered roots)
    CHECK_THROWS_AS((void)ruling_tangency_points(q1, ProjQuadric(diag4(1, 2, 3, -1)), cfg),
                    Error);
}

TEST_CASE("intersection-curve tangents are tangent to every pencil member") {
    const Config cfg;
    const Mat4c m1 = diag4(1, 1, 1, -1), m2 = diag4(1, 2, 3, -5);
    const std::vector<PluckerLine> lines =
        intersection_curve_tangents(ProjQuadric(m1), ProjQuadric(m2), 20, cfg);
    REQUIRE(lines.size() == 20);
    Rng rng(11);
    for (const PluckerLine& l : lines)
        for (int k = 0; k < 5; ++k) {
            const Mat4c mem = rng.cgauss() * m1 + rng.cgauss() * m2;
            CHECK(is_tangent(l, ProjQuadric(mem), cfg.tol).residual < 1e-7);
        }
}

TEST_CASE("tangency transfers to the dual quadric through the orthogonal line") {
    const Config cfg;
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
        const ProjQuadric q = random_smooth_quadric(rng, cfg);
        // build a line tangent at a chord endpoint
        PluckerLine l;
        for (;;) {
            const Vec4c a = rng.cgauss_vec(4), b = rng.cgauss_vec(4);
            const cplx qaa = (a.transpose() * q.matrix() * a).value();
            const cplx qab = (a.transpose() * q.matrix() * b).value();
            const cplx qbb = (b.transpose() * q.matrix() * b).value();
            if (std::abs(qbb) < 1e-8) continue;
            const Vec4c x0 = a + ((-qab + std::sqrt(qab * qab - qaa * qbb)) / qbb) * b;
            const Vec4c grad = q.matrix() * x0;
            Vec4c y = rng.cgauss_vec(4);
            const cplx gy = (grad.transpose() * y).value();
            const cplx gB = (grad.transpose() * b).value();
            if (std::abs(gB) < 1e-10) continue;
            y -= (gy / gB) * b;
            try {
                l = plucker_from_points(x0, y);
                break;
            } catch (const Error&) {
            }
        }
        CHECK(is_tangent(l, q, cfg.tol).residual < 1e-8);
        CHECK(is_tangent(plucker_orthogonal(l), dual_quadric(q, cfg), cfg.tol).residual < 1e-8);
    }
}
