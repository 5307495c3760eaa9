#pragma once

#include "tangentloci/complexmat.hpp"
#include "tangentloci/types.hpp"

#include <vector>

namespace tangentloci::symqr {

// Point of P¹, stored unit-norm with the larger-modulus entry rotated to the
// positive real axis (first entry breaks ties). Normalization is idempotent.
struct ProjPoint1 {
    cplx lambda{1.0, 0.0};
    cplx mu{0.0, 0.0};

    ProjPoint1() = default;
    ProjPoint1(cplx l, cplx m);

    static ProjPoint1 infinity() { return ProjPoint1(cplx(1), cplx(0)); }
    bool is_infinite(double tol = 1e-12) const { return std::abs(mu) <= tol; }
    // Affine value λ/μ read in the chart μ=1... note the pencil convention
    // λq₁+μq₂ uses (λ:μ); affine() returns λ/μ.
    cplx affine() const { return lambda / mu; }
};

// Chordal distance |λ₁μ₂ − λ₂μ₁| for unit-norm representatives.
double chordal(const ProjPoint1& a, const ProjPoint1& b);

// Homogeneous binary form of degree d: coeffs[k] multiplies λ^(d−k) μ^k.
struct BinaryForm {
    VecXc coeffs;
    bool identically_zero = false;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    cplx eval(const cplx& lambda, const cplx& mu) const;
    cplx eval(const ProjPoint1& p) const { return eval(p.lambda, p.mu); }
    double max_abs_coeff() const;
};

struct FormRoot {
    ProjPoint1 point;
    int multiplicity = 1;
    double spread = 0.0;  // cluster diameter, diagnostic only
};

// All projective roots with multiplicities summing to the degree. Companion
// eigenvalues after a seeded random SU(2) frame rotation (so a vanishing
// leading coefficient — a root at infinity — never degrades conditioning),
// clustered at radius tol_cluster.
std::vector<FormRoot> binary_form_roots(const BinaryForm& f, const Config& cfg = {});

// Roots of Σ c_k t^k (ascending coefficients) via a balanced companion
// matrix; trailing/leading near-zero coefficients handled by the caller.
std::vector<cplx> poly_roots_ascending(const VecXc& coeffs);

// Interpolation of a degree-d form from values at d+1 unit-circle nodes
// (form_sample_node(d,k) : 1), k = 0..d; the fixed phase offset keeps the
// nodes away from axis-aligned special points of the inputs we sample.
cplx form_sample_node(int d, int k);
BinaryForm form_from_samples(const VecXc& samples);  // degree = samples.size()-1

}  // namespace tangentloci::symqr
