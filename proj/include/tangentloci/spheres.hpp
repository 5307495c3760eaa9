#pragma once

#include "tangentloci/linegeom.hpp"
#include "tangentloci/symqr.hpp"
#include "tangentloci/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tangentloci::spheres {

// A sphere ‖x − c‖ = r in R³.
struct Sphere {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 1.0;
};

// Coordinates a = (a₀:a₁:a₂:a₃:a₄) of a quadric in the sphere family:
// a₀ fills the 3×3 diagonal, (a₁,a₂,a₃) the border row/column, a₄ the
// corner. A genuine sphere has a₀ = 1, (a₁,a₂,a₃) = −c, a₄ = ⟨c,c⟩ − r².
struct SphereCoords {
    Eigen::Matrix<double, 5, 1> a = Eigen::Matrix<double, 5, 1>::Zero();

    Eigen::Matrix4d matrix() const;
};

// |det Q + a₀²(a₁²+a₂²+a₃²−a₀a₄)| / ‖a‖⁴ — zero in exact arithmetic for
// every coordinate vector, not only for genuine spheres.
double det_identity_residual(const SphereCoords& sc);

std::pair<SphereCoords, symqr::ProjQuadric> sphere_to_quadric(const Sphere& s);

enum class CenterGeometry { Generic, Coplanar, Collinear };

struct CenterReport {
    CenterGeometry geometry = CenterGeometry::Generic;
    bool three_collinear = false;  // some triple of centers collinear (Coplanar only)
    bool borderline = false;       // a deciding ratio fell inside the hysteresis band
    double planarity = 0.0;        // σ₃/σ₁ of the centered 4×3 difference matrix
    double collinearity = 0.0;     // σ₂/σ₁
};

// DuplicateCenters when two centers coincide within tol.
CenterReport center_geometry(const std::array<Sphere, 4>& s, const Config& cfg = {});

// One common tangent line {p + t·v} with ⟨p,v⟩ = 0 (plain bilinear form;
// p is the foot of the line for real data).
struct TangentSolution {
    Vec3c p = Vec3c::Zero();
    Vec3c v = Vec3c::Zero();  // projective direction, largest component fixed to 1
    int multiplicity = 1;
    bool is_real = false;
    std::array<double, 4> residuals{};  // per-sphere tangency residuals on the Grassmannian
};

// Affinely independent centers: cubic ∩ quartic in the direction plane,
// twelve solutions counting multiplicity. NonGeneric when the centers are
// not affinely independent; DefectiveCount when refinement cannot account
// for all twelve.
std::vector<TangentSolution> common_tangents_generic(const std::array<Sphere, 4>& s,
                                                     const Config& cfg = {});

// Coplanar centers, no three collinear: conic ∩ sextic, twelve intersection
// points counting multiplicity. When one pair of opposite sides of the
// center quadrilateral is parallel (a trapeze), two of the twelve land on
// the isotropic conic ⟨v,v⟩ = 0 and correspond to no affine line; a
// parallelogram sheds four. Those are certified and excluded — the returned
// tangents are the affine ones (optionally reported via isotropic_excess).
// ThreeCollinear when a center triple is collinear (solve() handles that
// case with the same elimination, which stays valid, and tags the result).
std::vector<TangentSolution> common_tangents_coplanar(const std::array<Sphere, 4>& s,
                                                      const Config& cfg = {},
                                                      int* isotropic_excess = nullptr);

enum class DegenerateClass { CommonCircle, CommonPoint, Cylinder, Cone, Hyperboloid, ComplexOnly, None };

const char* degenerate_class_name(DegenerateClass c);

// One detected class, in the axis frame of the report: positions are
// x ↦ axis_point + x·axis_dir and the meridian profile is y² = Ax² + Bx + C
// with y the distance from the axis.
struct DegenerateEntry {
    DegenerateClass cls = DegenerateClass::None;
    double axis_x = 0.0;         // CommonCircle / CommonPoint abscissa
    double circle_radius = 0.0;  // CommonCircle
    double A = 0.0, B = 0.0, C = 0.0;  // meridian coefficients when the linear system is consistent
};

struct DegenerateReport {
    Eigen::Vector3d axis_point = Eigen::Vector3d::Zero();
    Eigen::Vector3d axis_dir = Eigen::Vector3d::UnitX();
    std::array<double, 4> abscissae{};
    std::vector<DegenerateEntry> classes;
    std::vector<linegeom::PVLine> sample_tangents;  // real ruling witnesses (world frame)
    double meridian_residual = 0.0;  // relative inconsistency of the tangency system
};

// Collinear centers: common circle / common point by radical abscissae,
// ruled revolution baskets by the linear meridian system; ruled classes
// certified with sampled rulings.
DegenerateReport classify_collinear(const std::array<Sphere, 4>& s, const Config& cfg = {});

struct SolveResult {
    CenterGeometry regime = CenterGeometry::Generic;
    bool borderline = false;
    int complex_count = 0;    // multiplicity sum of affine tangents; −1 for an infinite family
    int isotropic_excess = 0;  // elimination points shed onto ⟨v,v⟩ = 0 (trapeze centers)
    std::vector<TangentSolution> tangents;
    std::optional<DegenerateReport> degenerate;
    std::string note;
};

SolveResult solve(const std::array<Sphere, 4>& s, const Config& cfg = {});

struct TripleBasketReport {
    double span_residual = 0.0;          // distance of T = (0:0:0:0:1) from span{q₁,q₂,q₃}
    double collinearity_residual = 0.0;  // normalized cross-product defect of the centers
    bool holds = false;
};

struct QuadBasketReport {
    double identity_residual = 0.0;  // |α₀(1/α₁+1/α₂) − β₀(1/β₁+1/β₂)|, normalized
    bool holds = false;
};

// Necessary conditions for a common basket inside the sphere family.
// The quadruple test expands two of the quadrics over a reference triangle
// (T, qᵢ, qⱼ) with unit a₀ representatives; FrameDegenerate when no sphere
// pair gives an independent frame (all pairs concentric).
TripleBasketReport basket_conditions_spheres(const std::array<Sphere, 3>& s, const Config& cfg = {});
QuadBasketReport basket_conditions_spheres(const std::array<Sphere, 4>& s, const Config& cfg = {});

// Minimum over a grid on the isotropic conic ⟨v,v⟩ = 0 of the normalized
// residual of the remaining generic-regime equations ⟨w,v⟩ = 0, ‖w‖² = 0;
// bounded away from zero exactly when the elimination curves avoid the
// isotropic conic.
double isotropic_exclusion_min(const std::array<Sphere, 4>& s, int grid, const Config& cfg = {});

// Euclidean oracle for real lines.
double point_line_distance(const Eigen::Vector3d& x, const Eigen::Vector3d& p,
                           const Eigen::Vector3d& v);

}  // namespace tangentloci::spheres
