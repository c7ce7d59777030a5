#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "photon_ur/momentum_space.hpp"

namespace photon_ur {

/// A scalar phase function phi(k) used for gauge transformations. The gradient
/// is optional; central differences are used when it is absent.
struct PhaseFunction {
  std::function<double(const Vec3 &)> value;
  std::function<Vec3(const Vec3 &)> gradient;

  Vec3 grad(const Vec3 &k) const;
};

/// Polarization frame: one of the three cyclic axis choices, optionally
/// composed with a gauge phase. e(k) -> exp(-i phi) e(k), alpha -> alpha + grad
/// phi.
struct PolarizationFrame {
  Axis axis = Axis::z;
  std::vector<PhaseFunction> gauge; // applied in order

  CVec3 e(const Vec3 &k) const;
  Vec3 alpha(const Vec3 &k) const;
};

/// Normalized transverse polarization vector for the given axis. Throws a
/// string-singularity error when k is on the axis.
CVec3 polarization_vector(Axis axis, const Vec3 &k);

/// Monopole connection alpha(k) = i e^* . grad e for the given axis.
Vec3 connection_alpha(Axis axis, const Vec3 &k);

/// Cartesian momentum gradient of a function from its spherical partials.
CVec3 cartesian_gradient(const SphericalPoint &p, const SphericalPartials &d);

/// D_lambda f_lambda = grad f - i lambda alpha f at every grid node.
struct CovariantDerivativeField {
  Helicity helicity;
  std::vector<CVec3> values;
};

/// Returns the fields for (+, -) in that order. A zero component yields a
/// field of zeros.
std::pair<CovariantDerivativeField, CovariantDerivativeField>
covariant_derivative(const HelicityAmplitudes &amps, const MomentumGrid &grid,
                     const PolarizationFrame &frame,
                     Exec exec = Exec::parallel);

/// Pointwise D_lambda f_lambda.
CVec3 covariant_derivative_at(const HelicityComponent &f, Helicity h,
                              const SphericalPoint &p,
                              const PolarizationFrame &frame);

/// f_lambda -> exp(i lambda phi) f_lambda together with the compensating
/// frame change.
std::pair<HelicityAmplitudes, PolarizationFrame>
gauge_transform(const HelicityAmplitudes &amps, const PolarizationFrame &frame,
                const PhaseFunction &phase);

/// (curl alpha)(k) + k/|k|^3 by five-point differences with a step of
/// 1e-3 times the distance from the string.
Vec3 verify_connection_curl(Axis axis, const Vec3 &k);

/// Finite-difference residuals of the polarization-vector identities at k,
/// same stencil as `verify_connection_curl`.
struct PolarizationIdentityResiduals {
  double alpha;             // max_i |i e^*.d_i e - alpha_i|
  double e_dot_de;          // max_i |e . d_i e|
  double de_star_dot_de;    // |sum_i d_i e^* . d_i e - 1/k_perp^2|
  double de_dot_de;         // |sum_i d_i e . d_i e|
  double norm;              // ||e|^2 - 1|
  double transversality;    // |k . e|
  double null;              // |e . e|

  double max() const;
};

PolarizationIdentityResiduals polarization_identities(Axis axis,
                                                      const Vec3 &k);

} // namespace photon_ur
