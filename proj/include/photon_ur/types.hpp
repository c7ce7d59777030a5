#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

// Units throughout: hbar = c = 1. Lengths are measured in whatever unit the
// scale parameter `a` of a wave-packet family carries; momenta in its inverse.
namespace photon_ur {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Distinguished axis of a polarization frame (position of the Dirac string).
enum class Axis { x, y, z };

/// Photon helicity. The integer value is the charge in the covariant derivative.
enum class Helicity : int { minus = -1, plus = 1 };

inline int sign(Helicity h) { return static_cast<int>(h); }

const char *to_string(Axis axis);
Axis parse_axis(const std::string &name);

/// Categories used by the CLI to pick an exit code.
enum class ErrorKind {
  invalid_argument,
  string_singularity,
  evaluation,
  undefined_mean,
  convergence,
  cutoff,
  numeric,
  truncation,
  syntax,
  unknown_identifier,
  config,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace photon_ur
