#pragma once

#include "tangentloci/binaryform.hpp"
#include "tangentloci/types.hpp"

#include <vector>

namespace tangentloci::trivariate {

// Dense homogeneous polynomial in (v₁,v₂,v₃). Coefficient of v₁ⁱv₂ʲv₃^{d−i−j}
// lives at index(i,j); storage is row-major over i, then j.
struct TriPoly {
    int deg = 0;
    VecXc c;  // size (deg+1)(deg+2)/2

    TriPoly() : c(VecXc::Zero(1)) {}
    explicit TriPoly(int d) : deg(d), c(VecXc::Zero(size(d))) {}

    static int size(int d) { return (d + 1) * (d + 2) / 2; }
    int index(int i, int j) const;
    cplx& at(int i, int j) { return c(index(i, j)); }
    cplx at(int i, int j) const { return c(index(i, j)); }

    cplx eval(const Vec3c& v) const;
    double max_abs() const;
};

TriPoly tri_constant(cplx a);
TriPoly tri_linear(const Vec3c& a);  // ⟨a,v⟩ (plain bilinear)
TriPoly tri_add(const TriPoly& a, const TriPoly& b);
TriPoly tri_scale(const TriPoly& a, cplx s);
TriPoly tri_mul(const TriPoly& a, const TriPoly& b);
TriPoly tri_diff(const TriPoly& p, int axis);
TriPoly tri_linear_change(const TriPoly& p, const Mat3c& m);  // v ↦ p(m·v)

// p restricted to the line s·a + t·b, as a degree-deg binary form in (s,t).
symqr::BinaryForm restrict_to_line(const TriPoly& p, const Vec3c& a, const Vec3c& b);

struct PlanePoint {
    Vec3c v = Vec3c::Zero();
    int multiplicity = 1;
    double residual = 0.0;  // max normalized |f(v)|, |g(v)|
};

// All intersection points of the plane curves {f=0}, {g=0} in P₂, counted
// with multiplicity (deg f · deg g in total for curves without a common
// component). Elimination by a Sylvester resultant evaluated on sample
// nodes, in a seeded random unitary frame; roots clustered, back-substituted,
// and Newton-polished when simple. IdenticallyZero when the curves share a
// component; NonGeneric when no frame separates the roots.
std::vector<PlanePoint> intersect_plane_curves(const TriPoly& f, const TriPoly& g,
                                               const Config& cfg = {});

}  // namespace tangentloci::trivariate
