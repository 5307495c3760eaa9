#pragma once
// JSON / CSV / OBJ serialization for solver inputs, results, and geometric
// interchange objects. Every floating-point value funnels through a single
// 17-significant-digit formatter; nonfinite values are rejected rather than
// serialized, so emitted documents always parse back to the same numbers.

#include "tangentloci/linegeom.hpp"
#include "tangentloci/spheres.hpp"
#include "tangentloci/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tangentloci::jsonio {

// "%.17g"; integral magnitudes keep an explicit ".0" so the token stays a
// floating-point literal. Throws InvalidInput on NaN or infinity.
std::string fmt17(double x);

// Incremental JSON emitter with insertion-ordered keys, two-space indent,
// and RFC 8259 string escaping. The document is complete once every
// begin_* has been matched; str() returns the buffer as written so far.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);
    JsonWriter& number(double x);
    JsonWriter& integer(long long x);
    JsonWriter& boolean(bool b);
    JsonWriter& string(std::string_view s);
    JsonWriter& null();
    JsonWriter& complex(const cplx& z);                   // [re, im]
    JsonWriter& complex_vector(const Vec3c& v);           // [[re,im] x3]
    JsonWriter& real_vector(const Eigen::Vector3d& v);    // [x, y, z]
    const std::string& str() const { return out_; }

private:
    void prefix();
    std::string out_;
    struct Level {
        char kind;         // '{' or '['
        int count = 0;
        bool key_open = false;
    };
    std::vector<Level> stack_;
};

// One solve instance from the input schema
// {"spheres":[{"center":[x,y,z],"radius":r} x4], "seed": int?, "tol": real?};
// the top level may also be a list of such objects (a batch).
struct SolveInstance {
    std::array<spheres::Sphere, 4> spheres;
    std::optional<unsigned long long> seed;
    std::optional<double> tol;
};

struct SolveInput {
    std::vector<SolveInstance> instances;
    bool batch = false;  // top level was a list
};

// Throws ParseError with a position-bearing diagnostic on malformed JSON or
// a schema violation (wrong arity, nonfinite numbers, radius <= 0).
SolveInput parse_solve_input(const std::string& text);

// Result object: {"regime","borderline","complex_count","isotropic_excess",
// "tangents":[{"p","v","real","multiplicity","residual"}],...}; "degenerate"
// and "note" appear only when present. p and v serialize as [re,im] pairs;
// "residual" is the worst per-sphere tangency residual of that line.
void write_solve_result(JsonWriter& w, const spheres::SolveResult& res);
std::string solve_result_json(const spheres::SolveResult& res);

// CSV flattening of the result object: fixed header, one row per tangent,
// or a single row with empty tangent columns when there are none.
std::string solve_csv_header();
void append_solve_csv(std::string& out, int instance, const spheres::SolveResult& res);
void append_error_csv(std::string& out, int instance, std::string_view message);

// Quadric interchange: the ten upper-triangle entries in row-major order
// (m11,m12,m13,m14,m22,m23,m24,m33,m34,m44), each as an [re,im] pair.
void write_quadric(JsonWriter& w, const Mat4c& m);
Mat4c parse_quadric(const std::string& text);  // throws ParseError

// Line interchange: {"plucker":[[re,im] x6]} or {"pv":{"p":[3],"v":[3]}}
// (the pv form is for real lines and drops imaginary parts).
void write_plucker_line(JsonWriter& w, const linegeom::PluckerLine& l);
void write_pv_line(JsonWriter& w, const linegeom::PVLine& l);

// Wavefront OBJ accumulator: icosphere meshes and polyline segments share
// one 1-based vertex table.
class ObjWriter {
public:
    void add_icosphere(const Eigen::Vector3d& center, double radius, int subdivisions = 2);
    void add_segment(const Eigen::Vector3d& a, const Eigen::Vector3d& b);
    std::string str() const;

private:
    int add_vertex(const Eigen::Vector3d& v);
    std::vector<Eigen::Vector3d> vertices_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<std::array<int, 2>> segments_;
};

// Scene for one solved instance: the four spheres as icosphere meshes plus
// every real tangent clipped to an axis-aligned box spanning three times the
// configuration radius around the centers' midpoint.
std::string tangents_obj(const std::array<spheres::Sphere, 4>& s,
                         const std::vector<spheres::TangentSolution>& tangents);

}  // namespace tangentloci::jsonio
