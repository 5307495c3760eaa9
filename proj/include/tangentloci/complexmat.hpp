#pragma once

#include "tangentloci/types.hpp"

#include <utility>
#include <vector>

namespace tangentloci {

// ---- canonical projective normalization --------------------------------
//
// Canonical form: unit Frobenius/Euclidean norm, with the first entry of
// largest modulus (row-major scan) rotated onto the positive real axis.
// Idempotent; removes branch-cut ambiguity from factorizations downstream.

void canonicalize(Eigen::Ref<MatXc> m);

template <typename Derived>
typename Derived::PlainObject canonicalized(const Eigen::MatrixBase<Derived>& m) {
    typename Derived::PlainObject out = m;
    MatXc tmp = out;
    canonicalize(tmp);
    out = tmp;
    return out;
}

// Phase-invariant distance min over θ of ||a − e^{iθ}b|| for unit-norm inputs.
// Equal to sqrt(2 − 2|<a,b>|), but evaluated as an aligned residual norm so
// nearby inputs resolve distances down to machine epsilon rather than √ε.
double proj_distance(const MatXc& a, const MatXc& b);

// ---- numeric rank -------------------------------------------------------

struct SvdRank {
    int rank = 0;
    Eigen::VectorXd singular_values;
};

SvdRank numeric_rank_svd(const MatXc& m, double tol);

// Columns spanning {x : A x = 0}, taken as the right singular vectors whose
// singular values fall below tol·σ₁ (or all below abs_floor when σ₁ ~ 0).
MatXc nullspace(const MatXc& a, double tol);

// ---- subspace calculus (columns span the subspace) ----------------------

MatXc orthonormal_columns(const MatXc& a, double tol);

// Relative residual of x against span(cols): ||x - P x|| / ||x||.
double span_residual(const MatXc& cols, const VecXc& x);

// Vectors spanning span(A) ∩ span(B) via principal angles; keeps directions
// whose cosine exceeds 1 - gap. Returns an empty matrix for trivial meets.
MatXc span_intersection(const MatXc& a, const MatXc& b, double gap);

// ---- small helpers -------------------------------------------------------

template <typename Derived>
typename Derived::PlainObject symmetrize(const Eigen::MatrixBase<Derived>& m) {
    return 0.5 * (m + m.transpose());
}

// Isometric vectorization of a complex symmetric matrix: diagonal entries as
// is, off-diagonal entries (i<j) scaled by √2, so the Euclidean norm equals
// the Frobenius norm and span computations inherit the matrix metric.
VecXc sym_to_vec(const MatXc& m);
MatXc vec_to_sym(const VecXc& v, int n);

cplx det2(const cplx& a, const cplx& b, const cplx& c, const cplx& d);

}  // namespace tangentloci
