#include "tangentloci/baskets.hpp"

#include "tangentloci/complexmat.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tangentloci::baskets {

namespace {

using symqr::BinaryForm;
using symqr::CrossRatio;
using symqr::FormRoot;
using symqr::SingularPoint;

// Singular members of [q₁,q₂] whether or not the pencil lies inside the
// determinantal hypersurface: a singular pencil gets classified and reports
// its below-generic-rank members instead.
std::vector<SingularPoint> low_rank_members(const Pencil& pen, const Config& cfg) {
    try {
        return symqr::pencil_singular_points(pen, cfg);
    } catch (const Error& e) {
        if (e.code() != Err::PencilInsideDeterminantal) throw;
        return symqr::classify_singular_pencil(pen, cfg).special_points;
    }
}

double rank_one_residual(const Mat4c& m, double tol) {
    symqr::RankProfile rp = symqr::numeric_rank(ProjQuadric(m), tol);
    if (!(rp.singular_values(0) > 0)) return 1.0;
    return rp.singular_values(1) / rp.singular_values(0);
}

// Common point of k ≥ 2 lines in quadric space, each line given as the span
// of two 10-vectors: the kernel of the stacked complement projectors
// Σᵢ (I − PᵢPᵢᴴ). Gate 10³·tol; `who` names the caller's error code.
VecXc meet_of_lines(const std::vector<MatXc>& lines, const Config& cfg, Err who,
                    const char* what) {
    const int n = static_cast<int>(lines.front().rows());
    MatXc stacked(static_cast<int>(lines.size()) * n, n);
    for (size_t i = 0; i < lines.size(); ++i) {
        MatXc on = orthonormal_columns(lines[i], cfg.tol);
        if (on.cols() != 2) fail(who, std::string(what) + ": a line span degenerated");
        stacked.middleRows(static_cast<int>(i) * n, n) =
            MatXc::Identity(n, n) - on * on.adjoint();
    }
    MatXc ker = nullspace(stacked, 1e3 * cfg.tol);
    if (ker.cols() == 0) fail(who, std::string(what) + ": lines are numerically skew");
    if (ker.cols() > 1) fail(who, std::string(what) + ": common point is not unique");
    return ker.col(0);
}

// Locate d inside the pencil [basket, q] and report σ₂/σ₁ of the member
// found there. Used by sample_basket, where d is rank one by construction.
TangencyWitness locate_in_pencil(const Mat4c& basket_m, const Mat4c& q_m, const Mat4c& d_m,
                                 const Config& cfg) {
    MatXc cols(10, 2);
    cols.col(0) = sym_to_vec(basket_m);
    cols.col(1) = sym_to_vec(q_m);
    VecXc rhs = sym_to_vec(d_m);
    Vec2c zeta = cols.colPivHouseholderQr().solve(rhs);
    if (!(zeta.norm() > 1e-14 * rhs.norm()))
        fail(Err::NoIntersection, "tangency plane does not sit in the basket pencil");
    TangencyWitness w;
    w.location = ProjPoint1(zeta(0), zeta(1));
    w.d = ProjQuadric(d_m);
    w.residual = rank_one_residual(zeta(0) * basket_m + zeta(1) * q_m, cfg.tol);
    return w;
}

// Three rank-one factors spanning a nonsingular 3×3 pencil: the det form has
// three roots, their kernels diagonalize the pair simultaneously, and the
// rows of the inverse kernel matrix are the covectors of the double lines.
std::array<Vec3c, 3> trio3(const Mat3c& a, const Mat3c& b, const Config& cfg) {
    BinaryForm det = symqr::conic_pencil_det_form(a, b);
    if (det.identically_zero)
        fail(Err::NotFixedVertex, "restricted pencil is everywhere singular");
    std::vector<FormRoot> roots = symqr::binary_form_roots(det, cfg);
    if (roots.size() != 3)
        fail(Err::ClusteredRoots, "restricted pencil does not have three distinct singular members");
    Mat3c k;
    for (int i = 0; i < 3; ++i) {
        if (roots[i].multiplicity != 1)
            fail(Err::ClusteredRoots, "repeated singular member in the restricted pencil");
        Mat3c member = roots[i].point.lambda * a + roots[i].point.mu * b;
        MatXc ker = nullspace(member, cfg.tol);
        if (ker.cols() != 1)
            fail(Err::ClusteredRoots, "singular member of the restricted pencil is not a two-line");
        k.col(i) = ker.col(0);
    }
    if (std::abs(k.determinant()) < 1e-10)
        fail(Err::ClusteredRoots, "singular-member kernels are nearly dependent");
    Mat3c f = k.inverse();
    std::array<Vec3c, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = canonicalized(Vec3c(f.row(i).transpose()));
    return out;
}

// Extend the covector f on the complement (columns of w) by zero on the
// vertex direction v: solve [w v]ᵀ g = (f; 0).
Vec4c lift_covector(const Vec3c& f, const MatXc& w, const Vec4c& v) {
    Mat4c sys;
    sys.topRows(3) = w.transpose();
    sys.row(3) = v.transpose();
    Vec4c rhs;
    rhs << f(0), f(1), f(2), cplx(0.0);
    return sys.partialPivLu().solve(rhs);
}

template <typename F>
void for_each_permutation4(F&& body) {
    std::array<int, 4> idx = {0, 1, 2, 3};
    do {
        body(idx[0], idx[1], idx[2], idx[3]);
    } while (std::next_permutation(idx.begin(), idx.end()));
}

// |x − y| for two cross-ratios with a shared convention for the point at
// infinity: both infinite counts as a match.
double cross_ratio_gap(const CrossRatio& x, const CrossRatio& y) {
    const bool xi = x.is_infinite(), yi = y.is_infinite();
    if (xi && yi) return 0.0;
    if (xi || yi) return std::numeric_limits<double>::infinity();
    return std::abs(x.value() - y.value());
}

CrossRatio cr_product(const CrossRatio& x, const CrossRatio& y) {
    return CrossRatio{x.num * y.num, x.den * y.den};
}

}  // namespace

// ---- basket predicates -------------------------------------------------

std::optional<TangencyWitness> is_basket_pair(const ProjQuadric& b, const ProjQuadric& q,
                                              const Config& cfg) {
    if (symqr::numeric_rank(b, cfg.tol).rank <= 2)
        fail(Err::RankTooLow, "first quadric has rank <= 2");
    if (symqr::numeric_rank(q, cfg.tol).rank <= 2)
        fail(Err::RankTooLow, "second quadric has rank <= 2");
    Pencil pen = symqr::make_pencil(b, q, cfg);
    for (const SingularPoint& sp : low_rank_members(pen, cfg)) {
        if (sp.rank.rank != 1) continue;
        TangencyWitness w;
        w.location = sp.point;
        w.d = sp.member;
        w.residual = sp.rank.singular_values(1) / sp.rank.singular_values(0);
        return w;
    }
    return std::nullopt;
}

// ---- one-parameter basket families -------------------------------------

BasketCurveSet common_basket_curves(const ProjQuadric& q1, const ProjQuadric& q2,
                                    const Config& cfg) {
    if (symqr::numeric_rank(q1, cfg.tol).rank <= 2)
        fail(Err::RankTooLow, "first quadric has rank <= 2");
    if (symqr::numeric_rank(q2, cfg.tol).rank <= 2)
        fail(Err::RankTooLow, "second quadric has rank <= 2");
    Pencil pen = symqr::make_pencil(q1, q2, cfg);

    BasketCurveSet out;
    for (const SingularPoint& sp : low_rank_members(pen, cfg)) {
        if (sp.rank.rank == 1 && !out.pencil_rank_one) {
            symqr::RankOneHit hit;
            hit.point = sp.point;
            hit.member = sp.member;
            hit.residual = sp.rank.singular_values(1) / sp.rank.singular_values(0);
            out.pencil_rank_one = hit;
            continue;
        }
        if (sp.rank.rank != 2) continue;
        auto uv = symqr::factor_rank_two(sp.member, cfg);
        BasketCurve c;
        c.q1 = pen.m1;
        c.q2 = pen.m2;
        c.anchor_loc = sp.point;
        c.anchor = sp.member;
        c.u = uv.first;
        c.v = uv.second;
        out.curves.push_back(std::move(c));
    }
    return out;
}

BasketWitness sample_basket(const BasketCurve& c, cplx s, const Config& cfg) {
    const double mag = std::abs(s);
    if (!(mag > 1e-12) || !(mag < 1e12) || !std::isfinite(mag))
        fail(Err::DegenerateParameter, "parameter coincides with a tangency value (0 or infinity)");

    Vec4c w1 = c.u + s * c.v;
    Vec4c w2 = c.u - s * c.v;
    Mat4c d1 = w1 * w1.transpose();
    Mat4c d2 = w2 * w2.transpose();

    MatXc line1(10, 2), line2(10, 2);
    line1.col(0) = sym_to_vec(c.q1);
    line1.col(1) = sym_to_vec(d1);
    line2.col(0) = sym_to_vec(c.q2);
    line2.col(1) = sym_to_vec(d2);

    VecXc meet = meet_of_lines({line1, line2}, cfg, Err::NoIntersection, "basket sample");

    BasketWitness out;
    out.basket = ProjQuadric::from_vec(meet);
    out.witnesses.push_back(locate_in_pencil(out.basket.matrix(), c.q1, d1, cfg));
    out.witnesses.push_back(locate_in_pencil(out.basket.matrix(), c.q2, d2, cfg));
    return out;
}

// ---- trios (pencils of cones) -------------------------------------------

std::array<ProjQuadric, 3> trio_of_double_planes(const Pencil& p, const Config& cfg) {
    symqr::SingularPencilClass cls;
    try {
        cls = symqr::classify_singular_pencil(p, cfg);
    } catch (const Error& e) {
        if (e.code() != Err::NotSingularPencil) throw;
        fail(Err::NotFixedVertex, "pencil has nonsingular members, not a cone pencil");
    }
    if (cls.kind != symqr::PencilKind::FixedVertex)
        fail(Err::NotFixedVertex, "pencil members do not share a fixed vertex");

    MatXc w = nullspace(MatXc(cls.vertex.adjoint()), cfg.tol);
    if (w.cols() != 3) fail(Err::NotFixedVertex, "vertex complement is not three-dimensional");
    Mat3c a = w.transpose() * p.m1 * w;
    Mat3c b = w.transpose() * p.m2 * w;

    std::array<Vec3c, 3> f = trio3(a, b, cfg);
    std::array<ProjQuadric, 3> out;
    for (int i = 0; i < 3; ++i) {
        Vec4c g = lift_covector(f[i], w, cls.vertex);
        out[i] = ProjQuadric(g * g.transpose());
    }
    return out;
}

double check_c1(const ProjPoint1& p1, const ProjPoint1& p2, const ProjPoint1& p3,
                const ProjPoint1& q1, const ProjPoint1& q2, const ProjPoint1& q3) {
    cplx sum = symqr::cross_ratio(p1, p2, p3, q1).value() +
               symqr::cross_ratio(p2, p3, p1, q2).value() +
               symqr::cross_ratio(p3, p1, p2, q3).value();
    return std::abs(sum - cplx(1.5));
}

BasketWitness desargues_basket(const std::array<ProjQuadric, 3>& q,
                               const std::array<ProjQuadric, 3>& d, const Config& cfg) {
    std::vector<MatXc> lines;
    for (int i = 0; i < 3; ++i) {
        if (symqr::distance(q[i], d[i]) <= cfg.tol)
            fail(Err::NotInPerspective, "an edge line [q,d] degenerates to a point");
        MatXc line(10, 2);
        line.col(0) = q[i].vec();
        line.col(1) = d[i].vec();
        lines.push_back(std::move(line));
    }
    VecXc meet = meet_of_lines(lines, cfg, Err::NotInPerspective, "perspective point");

    BasketWitness out;
    out.basket = ProjQuadric::from_vec(meet);
    for (int i = 0; i < 3; ++i) {
        MatXc cols(10, 2);
        cols.col(0) = out.basket.vec();
        cols.col(1) = q[i].vec();
        Vec2c zeta = cols.colPivHouseholderQr().solve(VecXc(d[i].vec()));
        TangencyWitness w;
        w.location = ProjPoint1(zeta(0), zeta(1));
        w.d = d[i];
        w.residual = span_residual(cols, d[i].vec());
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

// ---- inscribed triangles on a conic --------------------------------------

std::vector<InscribedTriangle> inscribed_triangles(const Vec4c& u, const Vec4c& v,
                                                   const Vec3c& f,
                                                   const std::array<Vec3c, 3>& marks,
                                                   const Config& cfg) {
    MatXc frame(4, 2);
    frame.col(0) = u;
    frame.col(1) = v;
    if (numeric_rank_svd(frame, cfg.tol).rank != 2)
        fail(Err::InvalidInput, "conic frame vectors are dependent");
    if (!(f.norm() > 0)) fail(Err::InvalidInput, "zero line covector");
    for (int i = 0; i < 3; ++i) {
        if (!(marks[i].norm() > 0)) fail(Err::InvalidInput, "zero mark");
        double on_line = std::abs((f.transpose() * marks[i]).value()) / (f.norm() * marks[i].norm());
        if (on_line > 1e3 * cfg.tol) fail(Err::InvalidInput, "mark does not lie on the line");
        for (int j = 0; j < i; ++j)
            if (proj_distance(marks[i], marks[j]) <= cfg.tol)
                fail(Err::InvalidInput, "coincident marks");
    }

    // Mark (a,b,c) on the chord (s,t) of the conic (1:t:t²) means
    // a·st − b(s+t) + c = 0, a Möbius link t = (bs−c)/(as−b). Chaining the
    // three marks around the triangle closes into a quadratic for t₁.
    const cplx a12 = marks[0](0), b12 = marks[0](1), c12 = marks[0](2);
    const cplx a23 = marks[1](0), b23 = marks[1](1), c23 = marks[1](2);
    const cplx a31 = marks[2](0), b31 = marks[2](1), c31 = marks[2](2);

    auto lin_mul = [](cplx a1, cplx b1, cplx a2, cplx b2) {
        return Vec3c(a1 * a2, a1 * b2 + a2 * b1, b1 * b2);
    };
    Vec3c nn = lin_mul(b12, -c12, b31, -c31);   // N₁₂N₃₁
    Vec3c nd = lin_mul(b12, -c12, a31, -b31);   // N₁₂D₃₁
    Vec3c dn = lin_mul(b31, -c31, a12, -b12);   // N₃₁D₁₂
    Vec3c dd = lin_mul(a12, -b12, a31, -b31);   // D₁₂D₃₁
    Vec3c quad = a23 * nn - b23 * (nd + dn) + c23 * dd;

    const double scale =
        marks[0].cwiseAbs().maxCoeff() * marks[1].cwiseAbs().maxCoeff() * marks[2].cwiseAbs().maxCoeff();
    BinaryForm eliminant;
    eliminant.coeffs = quad;
    if (eliminant.max_abs_coeff() <= 1e-12 * scale)
        fail(Err::NoSolution, "eliminated quadratic degenerates (marks on the conic)");

    std::vector<InscribedTriangle> out;
    for (const FormRoot& root : symqr::binary_form_roots(eliminant, cfg)) {
        const cplx l = root.point.lambda, m = root.point.mu;
        Vec2c t2h(b12 * l - c12 * m, a12 * l - b12 * m);
        Vec2c t3h(b31 * l - c31 * m, a31 * l - b31 * m);
        if (!(t2h.norm() > 1e-10 * marks[0].norm()) || !(t3h.norm() > 1e-10 * marks[2].norm()))
            continue;
        InscribedTriangle tri;
        tri.t = {root.point, ProjPoint1(t2h(0), t2h(1)), ProjPoint1(t3h(0), t3h(1))};
        // coincident vertices are a point, not a triangle (the contact
        // parameter of a tangent line always closes the chain onto itself)
        if (symqr::chordal(tri.t[0], tri.t[1]) <= cfg.tol || symqr::chordal(tri.t[1], tri.t[2]) <= cfg.tol ||
            symqr::chordal(tri.t[2], tri.t[0]) <= cfg.tol)
            continue;
        tri.multiplicity = root.multiplicity;
        for (int i = 0; i < 3; ++i) {
            Vec4c dir = tri.t[i].mu * u + tri.t[i].lambda * v;
            tri.d[i] = ProjQuadric(dir * dir.transpose());
        }
        double worst = 0.0;
        const int edge[3][2] = {{0, 1}, {1, 2}, {2, 0}};
        for (int e = 0; e < 3; ++e) {
            const ProjPoint1& ti = tri.t[edge[e][0]];
            const ProjPoint1& tj = tri.t[edge[e][1]];
            cplx defect = marks[e](0) * ti.lambda * tj.lambda -
                          marks[e](1) * (ti.lambda * tj.mu + tj.lambda * ti.mu) +
                          marks[e](2) * ti.mu * tj.mu;
            worst = std::max(worst, std::abs(defect) / marks[e].norm());
        }
        tri.residual = worst;
        out.push_back(std::move(tri));
    }
    if (out.empty()) fail(Err::NoSolution, "no admissible triangle parameters");
    return out;
}

// ---- complete quadrilaterals ---------------------------------------------

CompleteQuadrilateral construct_typical_quadrilateral(const std::array<ProjQuadric, 4>& d,
                                                      const std::array<ProjQuadric, 3>& plane,
                                                      const Config& cfg) {
    MatXc dcols(10, 4);
    for (int i = 0; i < 4; ++i) dcols.col(i) = d[i].vec();
    if (numeric_rank_svd(dcols, cfg.tol).rank != 4)
        fail(Err::InvalidInput, "the four rank-one quadrics are dependent");

    Eigen::Matrix<cplx, 4, 3> y;
    for (int a = 0; a < 3; ++a) {
        VecXc rhs = plane[a].vec();
        Vec4c ya = dcols.colPivHouseholderQr().solve(rhs);
        if ((dcols * ya - rhs).norm() > 1e3 * cfg.tol * rhs.norm())
            fail(Err::InvalidInput, "plane quadric is not inside the span of the d's");
        y.col(a) = ya;
    }
    if (numeric_rank_svd(y, cfg.tol).rank != 3)
        fail(Err::InvalidInput, "plane quadrics do not span a 2-plane");

    MatXc fk = nullspace(MatXc(y.transpose()), cfg.tol);
    if (fk.cols() != 1) fail(Err::InvalidInput, "plane has no unique coordinate covector");
    Vec4c f = fk.col(0);
    for (int i = 0; i < 4; ++i)
        if (std::abs(f(i)) <= cfg.tol)
            fail(Err::PlaneThroughVertex, "plane passes through one of the rank-one quadrics");

    CompleteQuadrilateral cq;
    cq.plane = plane;
    cq.classification = QuadrilateralClass::Typical;

    for (int i = 0; i < 4; ++i) {
        MatXc rows(2, 4);
        rows.setZero();
        rows(0, i) = cplx(1.0);
        rows.row(1) = f.transpose();
        MatXc n = nullspace(rows, cfg.tol);
        if (n.cols() != 2) fail(Err::InvalidInput, "trace line is not one-dimensional");
        Mat4c m1 = Mat4c::Zero(), m2 = Mat4c::Zero();
        for (int j = 0; j < 4; ++j) {
            m1 += n(j, 0) * d[j].matrix();
            m2 += n(j, 1) * d[j].matrix();
        }
        cq.lines[i] = symqr::make_pencil(m1, m2, cfg);
    }

    int slot = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            int k = -1, l = -1;
            for (int m = 0; m < 4; ++m) {
                if (m == i || m == j) continue;
                (k < 0 ? k : l) = m;
            }
            Mat4c vq = f(l) * d[k].matrix() - f(k) * d[l].matrix();
            QuadrilateralVertex vert;
            vert.q = ProjQuadric(vq);
            vert.rank = symqr::numeric_rank(vert.q, cfg.tol);
            vert.on_line_a = i;
            vert.on_line_b = j;
            cq.vertices[slot++] = std::move(vert);
        }
    }
    return cq;
}

std::array<ProjQuadric, 4> reconstruct_tetrahedron(const CompleteQuadrilateral& cq,
                                                   const Config& cfg) {
    if (cq.classification != QuadrilateralClass::Typical)
        fail(Err::InvalidInput, "reconstruction requires a typical quadrilateral");

    std::array<Vec4c, 4> vertex;
    for (int i = 0; i < 4; ++i) {
        symqr::SingularPencilClass cls;
        try {
            cls = symqr::classify_singular_pencil(cq.lines[i], cfg);
        } catch (const Error& e) {
            if (e.code() != Err::NotSingularPencil) throw;
            fail(Err::NotFixedVertex, "a trace line is not a pencil of cones");
        }
        if (cls.kind != symqr::PencilKind::FixedVertex)
            fail(Err::NotFixedVertex, "a trace line is not a fixed-vertex pencil");
        vertex[i] = cls.vertex;
    }

    const double coincidence = 1e3 * cfg.tol;
    int same = 0, diff = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            (proj_distance(vertex[i], vertex[j]) <= coincidence ? same : diff)++;

    std::array<ProjQuadric, 4> out;
    if (same == 0) {
        Mat4c vm;
        for (int i = 0; i < 4; ++i) vm.col(i) = vertex[i];
        if (numeric_rank_svd(vm, cfg.tol).rank != 4)
            fail(Err::NonGeneric, "pencil vertices are not in general position");
        for (int i = 0; i < 4; ++i) {
            MatXc rows(3, 4);
            int r = 0;
            for (int j = 0; j < 4; ++j)
                if (j != i) rows.row(r++) = vertex[j].transpose();
            MatXc g = nullspace(rows, cfg.tol);
            if (g.cols() != 1) fail(Err::NonGeneric, "vertex triple does not span a plane");
            out[i] = ProjQuadric(Vec4c(g.col(0)) * Vec4c(g.col(0)).transpose());
        }
        return out;
    }
    if (diff != 0)
        fail(Err::NonGeneric, "trace-line vertices partially coincide");

    // All four pencils share one vertex: drop to the conic space of the
    // complement, where two of the trace lines determine double-line trios
    // {d_j : j≠i}; merging the trios on their common pair recovers all four.
    const Vec4c& v = vertex[0];
    MatXc w = nullspace(MatXc(v.adjoint()), cfg.tol);
    if (w.cols() != 3) fail(Err::NonGeneric, "vertex complement is not three-dimensional");

    auto lifted_trio = [&](int line) {
        Mat3c a = w.transpose() * cq.lines[line].m1 * w;
        Mat3c b = w.transpose() * cq.lines[line].m2 * w;
        std::array<Vec3c, 3> f = trio3(a, b, cfg);
        std::array<ProjQuadric, 3> t;
        for (int i = 0; i < 3; ++i) {
            Vec4c g = lift_covector(f[i], w, v);
            t[i] = ProjQuadric(g * g.transpose());
        }
        return t;
    };
    std::array<ProjQuadric, 3> t1 = lifted_trio(3);  // {d₀,d₁,d₂}
    std::array<ProjQuadric, 3> t2 = lifted_trio(2);  // {d₀,d₁,d₃}

    std::array<int, 3> match1 = {-1, -1, -1}, match2 = {-1, -1, -1};
    int matches = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (symqr::distance(t1[i], t2[j]) <= coincidence) {
                match1[i] = j;
                match2[j] = i;
                ++matches;
            }
        }
    }
    if (matches != 2) fail(Err::NonGeneric, "double-line trios do not share exactly one pair");
    int slot = 0;
    for (int i = 0; i < 3; ++i)
        if (match1[i] >= 0) out[slot++] = t1[i];
    for (int i = 0; i < 3; ++i)
        if (match1[i] < 0) out[slot++] = t1[i];
    for (int j = 0; j < 3; ++j)
        if (match2[j] < 0) out[slot++] = t2[j];
    return out;
}

// ---- cross-ratio relations on a marked line -------------------------------

double check_c3_secant(const C3Marks& p, const ProjPoint1& A, const ProjPoint1& B) {
    double worst = 0.0;
    for_each_permutation4([&](int i, int j, int k, int l) {
        CrossRatio lhs = symqr::cross_ratio(A, B, p[j][k], p[j][l]);
        CrossRatio rhs = symqr::cross_ratio(A, B, p[i][k], p[i][l]);
        worst = std::max(worst, cross_ratio_gap(lhs, rhs));
    });
    return worst;
}

double check_c3_tangent(const C3Marks& p, const ProjPoint1& T) {
    double worst = 0.0;
    for_each_permutation4([&](int i, int j, int k, int l) {
        CrossRatio lhs = cr_product(symqr::cross_ratio(T, p[k][l], p[l][j], p[j][k]),
                                    symqr::cross_ratio(p[k][l], T, p[l][i], p[i][k]));
        CrossRatio rhs = cr_product(symqr::cross_ratio(T, p[i][j], p[j][l], p[l][i]),
                                    symqr::cross_ratio(p[i][j], T, p[j][k], p[k][i]));
        worst = std::max(worst, cross_ratio_gap(lhs, rhs));
    });
    return worst;
}

// ---- the double four and its Reye configuration ---------------------------

ReyeConfiguration standard_double_four(const Config& cfg) {
    ReyeConfiguration r;
    // Diagonal 4-vectors: q_i = 1−2e_i; the b-tetrad pairs index 0 with each
    // other index (complementary pairs give the same quadric up to sign).
    Eigen::Matrix<double, 4, 4> qv, bv;
    qv.setOnes();
    bv.setOnes();
    for (int i = 0; i < 4; ++i) qv(i, i) = -1.0;
    for (int beta = 1; beta < 4; ++beta) {
        bv(beta, 0) = -1.0;
        bv(beta, beta) = -1.0;
    }
    auto diag_quadric = [](const Eigen::Vector4d& w) {
        Mat4c m = Mat4c::Zero();
        for (int i = 0; i < 4; ++i) m(i, i) = w(i);
        return ProjQuadric(m);
    };
    for (int i = 0; i < 4; ++i) {
        r.q[i] = diag_quadric(qv.row(i).transpose());
        r.b[i] = diag_quadric(bv.row(i).transpose());
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e(i) = 1.0;
        r.d[i] = diag_quadric(e);
    }

    Eigen::Matrix<double, 12, 4> pv;
    int slot = 0;
    for (int k = 0; k < 4; ++k) {
        for (int l = k + 1; l < 4; ++l) {
            for (int sign = 0; sign < 2; ++sign) {
                Eigen::Vector4d e = Eigen::Vector4d::Zero();
                e(k) = 1.0;
                e(l) = (sign == 0) ? 1.0 : -1.0;
                pv.row(slot) = e.transpose();
                r.points[slot] = diag_quadric(e);
                ++slot;
            }
        }
    }

    for (int i = 0; i < 4; ++i) {
        for (int alpha = 0; alpha < 4; ++alpha) {
            Eigen::Matrix<double, 2, 4> rows;
            rows.row(0) = qv.row(i);
            rows.row(1) = bv.row(alpha);
            MatXc n = nullspace(rows.cast<cplx>(), cfg.tol);
            if (n.cols() != 2) fail(Err::NonGeneric, "face pair does not meet in a line");
            Mat4c m1 = Mat4c::Zero(), m2 = Mat4c::Zero();
            for (int j = 0; j < 4; ++j) {
                m1(j, j) = n(j, 0);
                m2(j, j) = n(j, 1);
            }
            ReyeLine& line = r.lines[4 * i + alpha];
            line.pencil = symqr::make_pencil(m1, m2, cfg);
            line.q_face = i;
            line.b_face = alpha;
            for (int pt = 0; pt < 12; ++pt) {
                const double dq = qv.row(i).dot(pv.row(pt));
                const double db = bv.row(alpha).dot(pv.row(pt));
                r.incidence(pt, 4 * i + alpha) = (dq == 0.0 && db == 0.0) ? 1 : 0;
            }
        }
    }
    return r;
}

ReyeDegrees reye_incidence(const ReyeConfiguration& r, const Config& cfg) {
    ReyeDegrees deg;
    deg.point_degrees.fill(0);
    deg.line_degrees.fill(0);
    for (int li = 0; li < 16; ++li) {
        MatXc cols(10, 2);
        cols.col(0) = sym_to_vec(r.lines[li].pencil.m1);
        cols.col(1) = sym_to_vec(r.lines[li].pencil.m2);
        for (int pt = 0; pt < 12; ++pt) {
            if (span_residual(cols, r.points[pt].vec()) <= cfg.tol) {
                ++deg.point_degrees[pt];
                ++deg.line_degrees[li];
            }
        }
    }
    deg.ok = true;
    for (int pt = 0; pt < 12; ++pt)
        if (deg.point_degrees[pt] != 4) deg.ok = false;
    for (int li = 0; li < 16; ++li)
        if (deg.line_degrees[li] != 3) deg.ok = false;
    return deg;
}

// ---- the double five (conics) ---------------------------------------------

DoubleFive double_five(const Config& cfg) {
    auto chart_point = [](cplx c, double z) {
        Mat3c s = Mat3c::Zero();
        s(0, 0) = 1.0 + c.real();
        s(1, 1) = 1.0 - c.real();
        s(0, 1) = s(1, 0) = c.imag();
        s(2, 2) = z;
        return s;
    };

    DoubleFive out;
    out.q[0] = chart_point(cplx(0.0), -1.0);
    out.b[0] = chart_point(cplx(0.0), 1.0);
    for (int k = 1; k <= 3; ++k) {
        const cplx omega = std::polar(1.0, 2.0 * M_PI * k / 3.0);
        out.q[k] = chart_point(-2.0 * omega, -1.0);
        out.b[k] = chart_point(-2.0 * omega, 1.0);
    }
    out.q[4] = chart_point(cplx(0.0), 1.0 / 3.0);
    out.b[4] = chart_point(cplx(0.0), -1.0 / 3.0);

    out.pencils_with_rank_one = 0;
    out.worst_residual = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            BinaryForm det = symqr::conic_pencil_det_form(out.q[i], out.b[j]);
            double best = 1.0;
            for (const FormRoot& root : symqr::binary_form_roots(det, cfg)) {
                Mat3c member = root.point.lambda * out.q[i] + root.point.mu * out.b[j];
                SvdRank sr = numeric_rank_svd(member, cfg.tol);
                if (!(sr.singular_values(0) > 0)) continue;
                best = std::min(best, sr.singular_values(1) / sr.singular_values(0));
            }
            out.worst_residual = std::max(out.worst_residual, best);
            if (best <= cfg.tol) ++out.pencils_with_rank_one;
        }
    }
    return out;
}

}  // namespace tangentloci::baskets
