#pragma once

#include "tangentloci/symqr.hpp"

#include <array>
#include <optional>
#include <vector>

namespace tangentloci::baskets {

using symqr::Pencil;
using symqr::ProjPoint1;
using symqr::ProjQuadric;

// ---- basket predicates -------------------------------------------------
//
// A quadric b is a basket for q when b is tangent to q along a conic, which
// happens exactly when the pencil [b,q] contains a double plane (a rank-one
// member). All predicates below reduce to that pencil test.

// One tangency certificate: the double plane d sits in the pencil [basket,q]
// at `location` (coordinates relative to the stored representatives), and
// `residual` is σ₂/σ₁ of the pencil member there.
struct TangencyWitness {
    ProjPoint1 location;
    ProjQuadric d;
    double residual = 0.0;
};

// A basket together with one tangency certificate per partner quadric.
struct BasketWitness {
    ProjQuadric basket;
    std::vector<TangencyWitness> witnesses;
};

// Present iff the pencil [b,q] has a rank-one member. Both inputs must have
// numeric rank ≥ 3 (RankTooLow otherwise); InvalidInput when b ≃ q.
std::optional<TangencyWitness> is_basket_pair(const ProjQuadric& b, const ProjQuadric& q,
                                              const Config& cfg = {});

// ---- one-parameter basket families -------------------------------------

// Rational curve of baskets attached to a rank-two member of [q₁,q₂]: with
// the anchor factored as ½(uvᵀ+vuᵀ), the double planes d₁(s)=(u+sv)² and
// d₂(s)=(u−sv)² are tangency certificates against q₁ resp. q₂, and the
// basket is the intersection of the lines [q₁,d₁(s)] and [q₂,d₂(s)] in
// quadric space (coplanar through the anchor, since d₁−d₂ ∝ anchor).
struct BasketCurve {
    Mat4c q1 = Mat4c::Zero(), q2 = Mat4c::Zero();  // pencil representatives
    ProjPoint1 anchor_loc;  // pencil coordinate of the anchor
    ProjQuadric anchor;     // the rank-two member itself
    Vec4c u = Vec4c::Zero(), v = Vec4c::Zero();  // its plane pair
};

struct BasketCurveSet {
    // One curve per exact-rank-two singular member of the pencil.
    std::vector<BasketCurve> curves;
    // Set when the pencil itself meets rank one (then every member of the
    // pencil is already a basket partner of every other).
    std::optional<symqr::RankOneHit> pencil_rank_one;
};

// Requires both inputs of rank ≥ 3 (RankTooLow) and projectively independent
// (InvalidInput). Singular pencils (e.g. two cones with a common vertex) are
// classified and their below-generic-rank members used as anchors.
BasketCurveSet common_basket_curves(const ProjQuadric& q1, const ProjQuadric& q2,
                                    const Config& cfg = {});

// Evaluate a basket curve at parameter s (DegenerateParameter at the two
// tangency values s=0 and s=∞). The line-line intersection is computed as
// the nullspace of stacked projector constraints with gate 10³·tol;
// NoIntersection when the lines are numerically skew (a misfactored anchor).
BasketWitness sample_basket(const BasketCurve& c, cplx s, const Config& cfg = {});

// ---- trios (pencils of cones) -------------------------------------------

// For a fixed-vertex pencil of cones with three distinct rank-two members:
// the unique (up to permutation and scale) trio of double planes d₁,d₂,d₃
// whose span contains the pencil. Computed by restricting to a complement of
// the vertex and simultaneously diagonalizing the resulting 3×3 pair.
// NotFixedVertex when the pencil is not a fixed-vertex cone pencil;
// ClusteredRoots when the rank-two members are not three and distinct.
std::array<ProjQuadric, 3> trio_of_double_planes(const Pencil& p, const Config& cfg = {});

// |(p₁,p₂;p₃,q₁) + (p₂,p₃;p₁,q₂) + (p₃,p₁;p₂,q₃) − 3/2| for six points on a
// common pencil. The three-term cross-ratio identity holds exactly when the
// configuration arises from a Desargues perspective of double planes.
double check_c1(const ProjPoint1& p1, const ProjPoint1& p2, const ProjPoint1& p3,
                const ProjPoint1& q1, const ProjPoint1& q2, const ProjPoint1& q3);

// Perspective point of two perspective triangles in quadric space: the common
// point of the three lines [qᵢ,dᵢ] (NotInPerspective when they are not
// concurrent within 10³·tol, or when some qᵢ ≃ dᵢ so its line degenerates).
// Witness i locates dᵢ in the pencil [b,qᵢ]; its residual is the distance of
// dᵢ from that pencil, not a rank-one residual (the dᵢ need not be planes).
BasketWitness desargues_basket(const std::array<ProjQuadric, 3>& q,
                               const std::array<ProjQuadric, 3>& d, const Config& cfg = {});

// ---- inscribed triangles on a conic --------------------------------------

// Work in the net of quadrics spanned by e₀=uuᵀ, e₁=uvᵀ+vuᵀ, e₂=vvᵀ; the
// squares (u+tv)² trace the conic (1:t:t²) in these coordinates. A triangle
// inscribed in the conic with edges through three marks is determined by a
// single quadratic: generic marks give two triangles, marks on a tangent
// line of the conic give one (a double root).
struct InscribedTriangle {
    std::array<ProjPoint1, 3> t;   // vertex parameters on the conic
    std::array<ProjQuadric, 3> d;  // the vertices as rank-one quadrics
    int multiplicity = 1;
    double residual = 0.0;  // worst normalized edge/mark incidence defect
};

// marks = {p₁₂, p₂₃, p₃₁} in (e₀,e₁,e₂) coordinates, all on the line
// {x : fᵀx = 0}; edge (tᵢ,tⱼ) of every returned triangle passes through
// p_{ij}. NoSolution when the eliminated quadratic degenerates (marks on the
// conic); InvalidInput on violated preconditions.
std::vector<InscribedTriangle> inscribed_triangles(const Vec4c& u, const Vec4c& v,
                                                   const Vec3c& f,
                                                   const std::array<Vec3c, 3>& marks,
                                                   const Config& cfg = {});

// ---- complete quadrilaterals ---------------------------------------------

enum class QuadrilateralClass { Typical, Special, Solvable, Other };

struct QuadrilateralVertex {
    ProjQuadric q;
    symqr::RankProfile rank;
    int on_line_a = 0, on_line_b = 0;  // the two trace lines through it
};

struct CompleteQuadrilateral {
    std::array<ProjQuadric, 3> plane;        // spanning quadrics of the 2-plane
    std::array<Pencil, 4> lines;             // trace lines ℓᵢ as pencils
    std::array<QuadrilateralVertex, 6> vertices;  // p_{ij}, pairs in lex order
    QuadrilateralClass classification = QuadrilateralClass::Typical;
};

// Cut the coordinate tetrahedron of four independent rank-one quadrics with a
// 2-plane inside their span: ℓᵢ = plane ∩ span{dⱼ : j≠i}, six vertices
// p_{ij} = ℓᵢ∩ℓⱼ of rank two. PlaneThroughVertex when the plane passes
// through one of the dᵢ (some trace line would degenerate).
CompleteQuadrilateral construct_typical_quadrilateral(const std::array<ProjQuadric, 4>& d,
                                                      const std::array<ProjQuadric, 3>& plane,
                                                      const Config& cfg = {});

// Recover the four rank-one quadrics from a typical quadrilateral: each trace
// line is a fixed-vertex pencil of cones; the four vertices vᵢ determine
// dᵢ = (linear form vanishing on the other three)². When all four vertices
// coincide the reconstruction routes to the conic-space analogue (restrict to
// a complement of the common vertex, extract the double-line trios of two of
// the pencils, and merge them on their common pair). The result matches the
// generating quadruple up to permutation and scale.
std::array<ProjQuadric, 4> reconstruct_tetrahedron(const CompleteQuadrilateral& cq,
                                                   const Config& cfg = {});

// ---- cross-ratio relations on a marked line -------------------------------

// Marks p_{ij} = p_{ji} for 1≤i<j≤4 on a projective line, entered as a
// symmetric 4×4 array of line parameters (diagonal unused).
using C3Marks = std::array<std::array<ProjPoint1, 4>, 4>;

// Secant variant: the line meets the conic at A,B; returns the maximum over
// index permutations (i,j,k,l) of |(A,B;p_{jk},p_{jl}) − (A,B;p_{ik},p_{il})|.
double check_c3_secant(const C3Marks& p, const ProjPoint1& A, const ProjPoint1& B);

// Tangent variant: the line touches the conic at T; returns the maximum
// defect of the product relation
//   (T,p_{kl};p_{lj},p_{jk})·(p_{kl},T;p_{li},p_{ik})
//     = (T,p_{ij};p_{jl},p_{li})·(p_{ij},T;p_{jk},p_{ki})
// over index permutations. Indeterminate cross-ratio products propagate.
double check_c3_tangent(const C3Marks& p, const ProjPoint1& T);

// ---- the double four and its Reye configuration ---------------------------

struct ReyeLine {
    Pencil pencil;
    int q_face = 0, b_face = 0;  // ℓᵢ^α = face_i(q-tetrad) ∩ face_α(b-tetrad)
};

struct ReyeConfiguration {
    std::array<ProjQuadric, 4> q, b, d;
    std::array<ProjQuadric, 12> points;  // rank-two x_k²±x_l²; pair-lex, + then −
    std::array<ReyeLine, 16> lines;      // index 4·i + α
    Eigen::Matrix<int, 12, 16> incidence = Eigen::Matrix<int, 12, 16>::Zero();
};

// The diagonal double four: qᵢ = Σxⱼ²−2xᵢ², the b-tetrad completing it, and
// dᵢ = xᵢ². Every pair (qᵢ,b^α) is a basket pair, and the twelve rank-two
// quadrics x_k²±x_l² together with the sixteen face-pair intersection lines
// form a (12₄,16₃) configuration.
ReyeConfiguration standard_double_four(const Config& cfg = {});

struct ReyeDegrees {
    std::array<int, 12> point_degrees{};
    std::array<int, 16> line_degrees{};
    bool ok = false;  // degrees exactly (4,…,4) and (3,…,3)
};

// Recomputes point/line membership from the quadrics (span residual at tol),
// so the check is invariant under simultaneous conjugation q ↦ AᵀqA.
ReyeDegrees reye_incidence(const ReyeConfiguration& r, const Config& cfg = {});

// ---- the double five (conics) ---------------------------------------------

struct DoubleFive {
    std::array<Mat3c, 5> q, b;
    int pencils_with_rank_one = 0;  // out of 25
    double worst_residual = 0.0;    // max over pencils of best σ₂/σ₁ at a root
};

// Two quintets of conics with every cross pencil [qᵢ,bⱼ] meeting the rank-one
// locus. Built in the chart x=(s₁₁−s₂₂)/√2, y=s₁₂, z=s₃₃ on the affine slice
// (s₁₁+s₂₂)/2=1, where the rank-one locus is the unit circle {x²/2+y²=1,z=0}
// plus the s₃₃ direction: five z-mirrored pairs hang at positions 0 and −2ω
// for the three cube roots of unity ω, plus a central pair at heights ∓⅓.
DoubleFive double_five(const Config& cfg = {});

}  // namespace tangentloci::baskets
