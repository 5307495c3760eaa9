#pragma once

#include "tangentloci/symqr.hpp"
#include "tangentloci/types.hpp"

#include <utility>
#include <vector>

namespace tangentloci::linegeom {

// Basis of ∧²C⁴ fixed once for the whole module, in this order:
//   (e₁₂, e₁₃, e₁₄, e₂₃, e₂₄, e₃₄)
// Every formula below (wedge, g, G, ν, orthogonal) is written in this basis.

// ---- lines -------------------------------------------------------------------

// A line of P³ in Plücker coordinates, stored canonicalized. Valid lines lie
// on the Grassmannian quadric g = 2(x₁₂x₃₄ − x₁₃x₂₄ + x₁₄x₂₃) = 0.
struct PluckerLine {
    Vec6c x = Vec6c::Zero();

    PluckerLine() { x(0) = cplx(1.0); }
    explicit PluckerLine(const Vec6c& raw);  // canonicalizes; InvalidInput on ~0

    double g_residual() const;
};

cplx g_form(const Vec6c& x);

// The Grassmann pairing matrix G (x ↦ coefficients of the polar of g):
// antidiagonal, pairing 12↔34 and 14↔23 with +1, 13↔24 with −1; G² = I₆.
Mat6c plucker_pairing();

Vec6c wedge(const Vec4c& a, const Vec4c& b);

PluckerLine plucker_from_points(const Vec4c& a, const Vec4c& b);  // CoincidentPoints

// Two points spanning the line, recovered from the rank-2 skew matrix with
// entries x_{ij}.
std::pair<Vec4c, Vec4c> spanning_points(const PluckerLine& l);

// Affine foot-point/direction chart: the line {p + s·v} with ⟨p,v⟩ = 0,
// embedded in P³ through x₄ = 1.
struct PVLine {
    Vec3c p = Vec3c::Zero();
    Vec3c v = Vec3c::Zero();
};

PluckerLine pv_to_plucker(const PVLine& l);
// AtInfinity when the line lies in {x₄=0}; NullDirection when ⟨v,v⟩ = 0
// (the two loci where the chart degenerates).
PVLine plucker_to_pv(const PluckerLine& l);

// ---- tangency quadric ν and duality -------------------------------------------

// Second compound matrix: ν(Q)_{(ij),(kl)} = Q_{ik}Q_{jl} − Q_{il}Q_{jk},
// which satisfies ⟨x₁∧x₂, ν(Q)(x₁∧x₂)⟩ = det(⟨xᵢ,Qxⱼ⟩). A line is tangent
// to Q exactly when its Plücker point lies on ν(Q).
Mat6c nu(const Mat4c& q);
Mat6c nu(const symqr::ProjQuadric& q);

struct TangencyCheck {
    bool tangent = false;
    double residual = 0.0;  // |xᵀ ν(q) x| at unit x and unit-Frobenius ν(q)
};

TangencyCheck is_tangent(const PluckerLine& l, const symqr::ProjQuadric& q, double tol);

// ℓ^⊥ = {w : ⟨w,u⟩ = ⟨w,v⟩ = 0} for u,v spanning ℓ (plain bilinear form);
// an involution on lines.
PluckerLine plucker_orthogonal(const PluckerLine& l);

// Adjugate quadric (projectively the inverse; no division). Singular on
// rank ≤ 3.
symqr::ProjQuadric dual_quadric(const symqr::ProjQuadric& q, const Config& cfg = {});

// Projective distance between ν(dual(q)) and G·ν(q)·G — zero in exact
// arithmetic for every smooth quadric.
double duality_identity_residual(const symqr::ProjQuadric& q, const Config& cfg = {});

// ---- rulings -------------------------------------------------------------------

// Complex congruence T with Tᵀ Q T = I₄, via an LLᵀ factorization of Q in a
// (possibly randomly rotated) unitary frame. NonGeneric when every attempt
// is ill-conditioned (κ(T) > 1e8); Singular when rank < 4.
Mat4c symmetric_factor(const Mat4c& q, const Config& cfg = {});

// One ruling of a smooth quadric: lines ℓ(t₀:t₁) with Plücker coordinates
// quadratic in t, spanned by two points linear in t.
struct RulingFamily {
    Vec6c A = Vec6c::Zero(), B = Vec6c::Zero(), C = Vec6c::Zero();  // x(t) = At₀² + Bt₀t₁ + Ct₁²
    Vec4c p0 = Vec4c::Zero(), p1 = Vec4c::Zero();  // first spanning point p(t) = p0·t₀ + p1·t₁
    Vec4c q0 = Vec4c::Zero(), q1 = Vec4c::Zero();  // second spanning point

    PluckerLine at(const symqr::ProjPoint1& t) const;
    std::pair<Vec4c, Vec4c> span_at(const symqr::ProjPoint1& t) const;
};

std::pair<RulingFamily, RulingFamily> rulings(const symqr::ProjQuadric& q, const Config& cfg = {});

// The sixteen ruling lines of either quadric tangent to the other: per
// ruling family of q₁ the degree-4 equation ⟨ℓ(t), ν(q₂) ℓ(t)⟩ = 0 has four
// roots, and symmetrically. NonGenericPair when a quartic degenerates or
// roots cluster.
std::vector<PluckerLine> ruling_tangency_points(const symqr::ProjQuadric& q1,
                                                const symqr::ProjQuadric& q2,
                                                const Config& cfg = {});

// n tangent lines of the intersection curve q₁ ∩ q₂, sampled through seeded
// random plane slices (conic ∩ conic per slice). Each returned line is
// tangent to every member of the pencil [q₁,q₂]. SingularIntersection when
// slices persistently degenerate.
std::vector<PluckerLine> intersection_curve_tangents(const symqr::ProjQuadric& q1,
                                                     const symqr::ProjQuadric& q2, int n,
                                                     const Config& cfg = {});

}  // namespace tangentloci::linegeom
