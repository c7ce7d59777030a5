#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "photon_ur/lightcone_connection.hpp"

namespace photon_ur {

/// Closed-form momentum amplitudes of the minimal-uncertainty family, all
/// expressed in the z-axis gauge. f_- is zero; analytic partials included.
HelicityAmplitudes saturating_amplitude(Axis axis, double a);

/// Spatial sample points, optionally with cubature weights.
struct SpatialGrid {
  std::vector<Vec3> points;
  std::vector<double> weights; // empty when the grid is only for sampling
  std::string layout;
  double extent = 0.0; // truncation radius of the sampled region

  bool has_weights() const { return !weights.empty(); }
};

/// n^3 points on [-side/2, side/2]^3 (endpoints included); no weights.
SpatialGrid uniform_box(double side, int n);

/// Ball of radius `radius`: Gauss-Legendre in r and cos(theta), trapezoid in
/// phi. Weights include r^2.
SpatialGrid spherical_cubature(double radius, int n_r, int n_theta, int n_phi);

/// Riemann-Silberstein vector samples F(r, t) with hbar = c = 1.
struct RSField {
  SpatialGrid grid;
  double t = 0.0;
  std::vector<CVec3> values;
  std::vector<std::string> warnings;
};

/// Momentum-space quadrature of
///   F(r,t) = (2 pi)^(-3/2) int d^3k e(k) [f_+ e^{i(k.r - k t)} + f_-^* e^{-i(k.r - k t)}].
/// Points with (|r| + |t|) k_scale beyond n_k/2 raise a warning; beyond n_k
/// an error. The truncated radial rule with n_theta, n_phi near 96 is needed
/// for 1e-6 accuracy at |r| ~ 4/k_scale; the rational rule is much coarser.
RSField synthesize_field(const HelicityAmplitudes &amps,
                         const MomentumGrid &grid,
                         const PolarizationFrame &frame,
                         const SpatialGrid &points, double t,
                         Exec exec = Exec::parallel);

/// Largest |r| + |t| for which synthesis is considered resolved.
double trusted_radius(const MomentumGrid &grid);

/// Phi(r, tau) = 1/(r^2 - (tau - i a)^2) with all first and second
/// partials; index 0..2 are x, y, z and 3 is tau.
struct PotentialDerivatives {
  cplx value;
  std::array<cplx, 4> first;
  std::array<std::array<cplx, 4>, 4> second;
};

PotentialDerivatives whittaker_potential(double a, const Vec3 &r, double tau);

/// Closed-form field of the minimal-uncertainty state for the given axis,
/// normalized consistently with `synthesize_field` of `saturating_amplitude`.
CVec3 whittaker_field(Axis axis, double a, const Vec3 &r, double t);

RSField whittaker_field(Axis axis, double a, const SpatialGrid &points,
                        double t, Exec exec = Exec::parallel);

/// F at t = 0 for the z-axis state: a real (purely electric) field
///   (4 a^2/pi) (2zx - 2ay, 2yz + 2ax, a^2 - r^2 + 2z^2) / (a^2 + r^2)^3.
Vec3 electric_field_t0(double a, const Vec3 &r);

/// Pointwise F^* . F.
std::vector<double> energy_density(const RSField &field);

/// 16 a^4 / (pi^2 (a^2 + r^2)^4).
double closed_form_energy(double a, double r);

/// Cubature of the energy density over the field's grid (no tail estimate).
double total_energy(const RSField &field);

/// Estimated fraction of the second moment lying outside the grid radius,
/// assuming an r^-8 density tail fitted to the outermost samples.
double moment_tail_fraction(const RSField &field);

/// (1/||f||^2) int d^3r r^2 F^* . F over the grid. Throws a truncation error
/// (with a suggested radius) when the tail fraction exceeds `max_tail`.
double real_space_delta_r(const RSField &field, double norm_sq,
                          double max_tail = 1e-3);

} // namespace photon_ur
