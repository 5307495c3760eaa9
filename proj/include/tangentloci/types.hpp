#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace tangentloci {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat3c = Eigen::Matrix3cd;
using Mat4c = Eigen::Matrix4cd;
using Mat6c = Eigen::Matrix<cplx, 6, 6>;
using MatXc = Eigen::MatrixXcd;
using Vec2c = Eigen::Vector2cd;
using Vec3c = Eigen::Vector3cd;
using Vec4c = Eigen::Vector4cd;
using Vec6c = Eigen::Matrix<cplx, 6, 1>;
using Vec10c = Eigen::Matrix<cplx, 10, 1>;
using VecXc = Eigen::VectorXcd;
using Vec3d = Eigen::Vector3d;

// Shared knobs: tol drives rank/membership decisions, tol_cluster drives root
// clustering (root perturbation scales like the multiplicity-th root of
// coefficient error, hence the separate knob), seed drives every randomized
// frame choice.
struct Config {
    double tol = 1e-8;
    double tol_cluster = 1e-6;
    std::uint64_t seed = 0;
};

enum class Err {
    RankMismatch,
    RankTooLow,
    NotSingularPencil,
    PencilInsideDeterminantal,
    Indeterminate,
    IdenticallyZero,
    NotFixedVertex,
    ClusteredRoots,
    NotInPerspective,
    NoSolution,
    PlaneThroughVertex,
    NoIntersection,
    DegenerateParameter,
    CoincidentPoints,
    AtInfinity,
    NullDirection,
    Singular,
    NonGeneric,
    NonGenericPair,
    SingularIntersection,
    DuplicateCenters,
    ThreeCollinear,
    FrameDegenerate,
    DefectiveCount,
    InvalidInput,
    ParseError,
};

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Err code() const { return code_; }

  private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

const char* err_name(Err code);

// Deterministic generator with cheap decorrelated substreams, so parallel
// batch items and retry attempts stay reproducible for a fixed top seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed ^ 0x9e3779b97f4a7c15ull) {}

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag);

    double uniform() { return uni_(gen_); }
    double gauss() { return normal_(gen_); }
    cplx cgauss() { return cplx(normal_(gen_), normal_(gen_)) / std::sqrt(2.0); }

    VecXc cgauss_vec(int n);
    MatXc cgauss_mat(int rows, int cols);
    // Haar-ish unitary: QR of a complex Gaussian matrix with the R diagonal
    // phases absorbed into Q.
    MatXc unitary(int n);

  private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

}  // namespace tangentloci
