#pragma once

#include "tangentloci/binaryform.hpp"
#include "tangentloci/complexmat.hpp"
#include "tangentloci/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace tangentloci::symqr {

// ---- rank profiles --------------------------------------------------------

struct RankProfile {
    int rank = 0;
    Eigen::Vector4d singular_values = Eigen::Vector4d::Zero();  // descending
    double tol_used = 0.0;
};

// ---- projective quadrics --------------------------------------------------

// A quadric surface in P³: 4×4 complex symmetric matrix up to scale. The
// stored representative is symmetrized, Frobenius-normalized, and phase-fixed
// (see canonicalize), so equality up to scale reduces to proj_distance ~ 0.
class ProjQuadric {
public:
    ProjQuadric();  // x₁², a convenient nonzero default
    explicit ProjQuadric(const Mat4c& m);

    const Mat4c& matrix() const { return m_; }
    // Isometric 10-vector of the upper triangle (off-diagonals ×√2).
    Vec10c vec() const;
    static ProjQuadric from_vec(const Vec10c& v);

    cplx eval(const Vec4c& x) const { return x.transpose() * m_ * x; }

private:
    Mat4c m_;
};

double distance(const ProjQuadric& a, const ProjQuadric& b);

RankProfile numeric_rank(const ProjQuadric& q, double tol);

// ---- pencils ---------------------------------------------------------------

// The (λ:μ) coordinates of a pencil are only meaningful relative to chosen
// representative matrices, so the pencil keeps the caller's representatives
// (symmetrized, scales preserved) alongside the canonical quadric views.
struct Pencil {
    Mat4c m1 = Mat4c::Zero(), m2 = Mat4c::Zero();  // fix the (λ:μ) coordinates
    ProjQuadric q1, q2;                            // canonical views
    BinaryForm det_form;  // det(λ m₁ + μ m₂), degree 4, or identically-zero flag
};

// Requires the two quadrics projectively distinct (InvalidInput otherwise).
// The matrix overload keeps the given scales; the ProjQuadric overload uses
// the canonical representatives.
Pencil make_pencil(const Mat4c& m1, const Mat4c& m2, const Config& cfg = {});
Pencil make_pencil(const ProjQuadric& q1, const ProjQuadric& q2, const Config& cfg = {});

// Raw member λm₁+μm₂ of the pencil (not renormalized; nonzero for every
// (λ:μ) because make_pencil excludes dependent pairs).
Mat4c pencil_at(const Pencil& p, const ProjPoint1& t);

// Coefficients of det(λm₁+μm₂) recovered from determinant samples at five
// phase-rotated fifth roots of unity (a 5-point DFT, exact for degree ≤ 4).
// identically_zero is set when every sample is below 1e−12·‖member‖⁴.
BinaryForm pencil_det_form(const Mat4c& m1, const Mat4c& m2);

// Degree-3 analogue for 3×3 conic matrices (plane sections).
BinaryForm conic_pencil_det_form(const Mat3c& m1, const Mat3c& m2);

struct SingularPoint {
    ProjPoint1 point;
    ProjQuadric member;
    RankProfile rank;
    int multiplicity = 1;
};

// Singular members of the pencil: one entry per clustered root of det_form,
// multiplicities summing to 4. PencilInsideDeterminantal when det_form is
// identically zero (every member singular); callers then sample ranks along
// the pencil instead (classify_singular_pencil).
std::vector<SingularPoint> pencil_singular_points(const Pencil& p, const Config& cfg = {});

struct RankOneHit {
    ProjPoint1 point;
    ProjQuadric member;  // the double plane, rank one
    double residual = 0.0;  // σ₂/σ₁ at the member
};

// First singular member of numeric rank one, if any. This is the machine
// test for "b is a basket for q": the pencil [b,q] contains a double plane.
std::optional<RankOneHit> pencil_meets_rank_one(const Pencil& p, const Config& cfg = {});

// ---- rank-one / rank-two factorization -------------------------------------

// q ≃ uuᵀ (projectively); u canonicalized. RankMismatch unless rank 1.
Vec4c factor_rank_one(const ProjQuadric& q, const Config& cfg = {});
// q ≃ ½(uvᵀ+vuᵀ); the unordered pair of planes through the rank-2 quadric,
// each canonicalized. RankMismatch unless rank 2.
std::pair<Vec4c, Vec4c> factor_rank_two(const ProjQuadric& q, const Config& cfg = {});

// Same factorizations for 3×3 conic matrices (used wherever a problem has
// been restricted to a plane section).
Vec3c factor_rank_one_3(const Mat3c& c, const Config& cfg = {});
std::pair<Vec3c, Vec3c> factor_rank_two_3(const Mat3c& c, const Config& cfg = {});

// ---- classification of singular pencils ------------------------------------

enum class PencilKind {
    FixedVertex,   // generic rank 3, all members share a vertex (cone pencil)
    MovingVertex,  // generic rank 3, vertex moves along a line
    InRankTwo,     // generic rank ≤ 2 (pairs of planes through a common line)
};

struct SingularPencilClass {
    PencilKind kind = PencilKind::InRankTwo;
    int generic_rank = 0;
    Vec4c vertex = Vec4c::Zero();  // FixedVertex: the shared kernel direction
    std::pair<Vec4c, Vec4c> axis = {Vec4c::Zero(), Vec4c::Zero()};  // MovingVertex
    // Members of rank below the generic rank, with root multiplicity from the
    // minor form. Generic rank 3: the two-plane (rank ≤ 2) members. Generic
    // rank 2: the double-plane (rank 1) members.
    std::vector<SingularPoint> special_points;
    // InRankTwo only: count of distinct double planes (0, 1, or 2), which
    // separates the three strata of rank-two pencils. -1 otherwise.
    int double_plane_count = -1;
};

// Requires det_form identically zero (NotSingularPencil otherwise).
SingularPencilClass classify_singular_pencil(const Pencil& p, const Config& cfg = {});

// ---- cross-ratio ------------------------------------------------------------

// (a,b;u,v) as the determinant ratio [a,u][b,v] / ([a,v][b,u]) with
// [x,y] = λ_x μ_y − λ_y μ_x. Kept as a numerator/denominator pair so a value
// of ∞ stays representable.
struct CrossRatio {
    cplx num{0.0};
    cplx den{0.0};

    bool is_infinite(double tol = 1e-12) const {
        return std::abs(den) <= tol && std::abs(num) > tol;
    }
    bool is_indeterminate(double tol = 1e-12) const {
        return std::abs(den) <= tol && std::abs(num) <= tol;
    }
    // Finite value; Indeterminate when 0/0 (a coincident pair on each side).
    cplx value() const;
};

CrossRatio cross_ratio(const ProjPoint1& a, const ProjPoint1& b, const ProjPoint1& u,
                       const ProjPoint1& v);

}  // namespace tangentloci::symqr
