#include <doctest.h>

#include "tangentloci/complexmat.hpp"
#include "tangentloci/symqr.hpp"
#include "tangentloci/types.hpp"

#include <algorithm>
#include <cmath>

using namespace tangentloci;
using namespace tangentloci::symqr;

namespace {

Mat4c diag4(cplx a, cplx b, cplx c, cplx d) {
    Mat4c m = Mat4c::Zero();
    m.diagonal() << a, b, c, d;
    return m;
}

ProjPoint1 pt(double x) { return ProjPoint1(cplx(x), cplx(1)); }

}  // namespace

TEST_CASE("determinant form of a diagonal pencil factors over the diagonal") {
    const Config cfg;
    // det(λI + μ diag(1,2,3,4)) = (λ+μ)(λ+2μ)(λ+3μ)(λ+4μ)
    const Pencil p = make_pencil(Mat4c::Identity(), diag4(1, 2, 3, 4), cfg);
    const VecXc& c = p.det_form.coeffs;
    REQUIRE(c.size() == 5);
    const double expected[5] = {1, 10, 35, 50, 24};
    for (int k = 0; k < 5; ++k) CHECK(std::abs(c(k) - cplx(expected[k])) < 1e-12);

    std::vector<FormRoot> roots = binary_form_roots(p.det_form, cfg);
    REQUIRE(roots.size() == 4);
    std::vector<double> affs;
    for (const FormRoot& r : roots) {
        CHECK(r.multiplicity == 1);
        CHECK(std::abs(r.point.affine().imag()) < 1e-9);
        affs.push_back(r.point.affine().real());
    }
    std::sort(affs.begin(), affs.end());
    const double want[4] = {-4, -3, -2, -1};
    for (int k = 0; k < 4; ++k) CHECK(affs[k] == doctest::Approx(want[k]).epsilon(1e-9));
}

TEST_CASE("root clustering recovers a quadruple root") {
    const Config cfg;
    BinaryForm f;
    f.coeffs = VecXc(5);
    f.coeffs << cplx(1), cplx(-4), cplx(6), cplx(-4), cplx(1);  // (λ−μ)⁴
    const std::vector<FormRoot> roots = binary_form_roots(f, cfg);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].multiplicity == 4);
    CHECK(std::abs(roots[0].point.affine() - cplx(1)) < 1e-3);
}

TEST_CASE("singular points of sphere pencils carry rank and multiplicity") {
    const Config cfg;
    // det(λI + μ diag(1,1,1,−1)) = (λ+μ)³(λ−μ)
    std::vector<SingularPoint> sp =
        pencil_singular_points(make_pencil(Mat4c::Identity(), diag4(1, 1, 1, -1), cfg), cfg);
    REQUIRE(sp.size() == 2);
    std::sort(sp.begin(), sp.end(), [](const SingularPoint& x, const SingularPoint& y) {
        return x.multiplicity > y.multiplicity;
    });
    CHECK(sp[0].multiplicity == 3);
    CHECK(sp[0].rank.rank == 1);
    CHECK(std::abs(sp[0].point.affine() - cplx(-1)) < 1e-6);
    CHECK(sp[1].multiplicity == 1);
    CHECK(sp[1].rank.rank == 3);
    CHECK(std::abs(sp[1].point.affine() - cplx(1)) < 1e-6);

    // concentric spheres of radius 1 and 2
    sp = pencil_singular_points(make_pencil(diag4(1, 1, 1, -1), diag4(1, 1, 1, -4), cfg), cfg);
    REQUIRE(sp.size() == 2);
    std::sort(sp.begin(), sp.end(), [](const SingularPoint& x, const SingularPoint& y) {
        return x.multiplicity > y.multiplicity;
    });
    CHECK(sp[0].multiplicity == 3);
    CHECK(sp[0].rank.rank == 1);
    CHECK(std::abs(sp[0].point.affine() - cplx(-1)) < 1e-6);
    CHECK(sp[1].multiplicity == 1);
    CHECK(sp[1].rank.rank == 3);
    CHECK(std::abs(sp[1].point.affine() - cplx(-4)) < 1e-6);
}

TEST_CASE("a ruled quadric and a sphere span a pencil through the rank-one locus") {
    const Config cfg;
    const Pencil p = make_pencil(diag4(1, 1, -1, -1), diag4(1, 1, 1, -1), cfg);
    const auto hit = pencil_meets_rank_one(p, cfg);
    REQUIRE(hit.has_value());
    CHECK(hit->residual < 1e-10);
    CHECK(std::abs(hit->point.affine() - cplx(-1)) < 1e-8);
    // the rank-one member is the double plane x₃²
    const Vec4c u = factor_rank_one(hit->member, cfg);
    CHECK(std::abs(u(0)) < 1e-8);
    CHECK(std::abs(u(1)) < 1e-8);
    CHECK(std::abs(u(3)) < 1e-8);
    CHECK(std::abs(u(2)) > 0.9);
}

TEST_CASE("rank factorizations round-trip") {
    const Config cfg;
    Rng rng(7);
    for (int k = 0; k < 20; ++k) {
        const Vec4c u = rng.cgauss_vec(4), v = rng.cgauss_vec(4);
        const ProjQuadric one{Mat4c(u * u.transpose())};
        const Vec4c fu = factor_rank_one(one, cfg);
        CHECK(distance(ProjQuadric(Mat4c(fu * fu.transpose())), one) < 1e-10);

        const ProjQuadric two{Mat4c(0.5 * (u * v.transpose() + v * u.transpose()))};
        const auto [a, b] = factor_rank_two(two, cfg);
        const Mat4c rec = 0.5 * (a * b.transpose() + b * a.transpose());
        CHECK(distance(ProjQuadric(rec), two) < 1e-9);
    }
    // x₁² − x₂² splits into the two planes x₁ ± x₂
    const auto [f1, f2] = factor_rank_two(ProjQuadric(diag4(1, -1, 0, 0)), cfg);
    for (const Vec4c& f : {f1, f2}) {
        CHECK(std::abs(f(2)) < 1e-9);
        CHECK(std::abs(f(3)) < 1e-9);
        CHECK(std::abs(std::abs(f(0)) - std::abs(f(1))) < 1e-9);
    }
    // wrong rank is rejected
    CHECK_THROWS_AS((void)factor_rank_one(ProjQuadric(diag4(1, -1, 0, 0)), cfg), Error);
}

TEST_CASE("singular pencils classify by their vertex behavior") {
    const Config cfg;
    Rng rng(11);

    SUBCASE("a cone pencil keeps its vertex fixed") {
        const SingularPencilClass c = classify_singular_pencil(
            make_pencil(diag4(1, 1, 1, 0), diag4(1, 2, 3, 0), cfg), cfg);
        CHECK(c.kind == PencilKind::FixedVertex);
        CHECK(c.generic_rank == 3);
        const Vec4c v = c.vertex / c.vertex.norm();
        CHECK(std::abs(v(3)) > 0.99);
        int mult = 0;
        for (const SingularPoint& sp : c.special_points) mult += sp.multiplicity;
        CHECK(mult == 3);
    }

    SUBCASE("a pencil of two double planes has two rank-one members") {
        const SingularPencilClass c = classify_singular_pencil(
            make_pencil(diag4(1, 0, 0, 0), diag4(0, 1, 0, 0), cfg), cfg);
        CHECK(c.kind == PencilKind::InRankTwo);
        CHECK(c.double_plane_count == 2);
    }

    SUBCASE("plane pairs through a common plane have none") {
        const Vec4c u = rng.cgauss_vec(4), w1 = rng.cgauss_vec(4), w2 = rng.cgauss_vec(4);
        const Mat4c m1 = 0.5 * (u * w1.transpose() + w1 * u.transpose());
        const Mat4c m2 = 0.5 * (u * w2.transpose() + w2 * u.transpose());
        const SingularPencilClass c = classify_singular_pencil(make_pencil(m1, m2, cfg), cfg);
        CHECK(c.kind == PencilKind::InRankTwo);
        CHECK(c.double_plane_count == 0);
    }

    SUBCASE("a line tangent to the rank-one locus sees one double plane") {
        const Vec4c u = rng.cgauss_vec(4), v = rng.cgauss_vec(4);
        const Mat4c m1 = u * u.transpose();
        const Mat4c m2 = 0.5 * (u * v.transpose() + v * u.transpose());
        const SingularPencilClass c = classify_singular_pencil(make_pencil(m1, m2, cfg), cfg);
        CHECK(c.kind == PencilKind::InRankTwo);
        CHECK(c.double_plane_count == 1);
    }

    SUBCASE("a smooth pencil is rejected") {
        CHECK_THROWS_AS((void)classify_singular_pencil(
                            make_pencil(Mat4c::Identity(), diag4(1, 2, 3, 4), cfg), cfg),
                        Error);
    }
}

TEST_CASE("cross-ratios take their textbook values") {
    CHECK(cross_ratio(pt(0), pt(1), pt(2), pt(3)).value().real() ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(cross_ratio(pt(0), ProjPoint1::infinity(), pt(1), pt(-1)).value().real() ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(cross_ratio(pt(2), pt(5), pt(2), pt(7)).value()) < 1e-12);
    CHECK(cross_ratio(pt(2), pt(5), pt(7), pt(2)).is_infinite());
}

TEST_CASE("cross-ratios are invariant under Moebius maps") {
    Rng rng(13);
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
        const cplx c0 = cross_ratio(pts[0], pts[1], pts[2], pts[3]).value();
        const cplx c1 = cross_ratio(im[0], im[1], im[2], im[3]).value();
        CHECK(std::abs(c0 - c1) / (1.0 + std::abs(c0)) < 1e-9);
    }
}

TEST_CASE("numeric rank detects each stratum") {
    const Config cfg;
    CHECK(numeric_rank(ProjQuadric(Mat4c::Identity()), cfg.tol).rank == 4);
    CHECK(numeric_rank(ProjQuadric(diag4(1, 1, 1, 0)), cfg.tol).rank == 3);
    CHECK(numeric_rank(ProjQuadric(diag4(1, -1, 0, 0)), cfg.tol).rank == 2);
    CHECK(numeric_rank(ProjQuadric(diag4(1, 0, 0, 0)), cfg.tol).rank == 1);
    Rng rng(3);
    const Vec4c u = rng.cgauss_vec(4);
    CHECK(numeric_rank(ProjQuadric(Mat4c(u * u.transpose())), cfg.tol).rank == 1);
}

TEST_CASE("projective quadric vectorization round-trips") {
    Rng rng(5);
    const Mat4c m = symmetrize(rng.cgauss_mat(4, 4).eval());
    const ProjQuadric q(m);
    const ProjQuadric back = ProjQuadric::from_vec(q.vec());
    CHECK(distance(q, back) < 1e-14);
    // eval is the bilinear form on the Frobenius-normalized representative
    const Vec4c x = rng.cgauss_vec(4);
    CHECK(std::abs(q.eval(x)) ==
          doctest::Approx(std::abs((x.transpose() * m * x).value()) / m.norm()).epsilon(1e-10));
}
