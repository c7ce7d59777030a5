#pragma once

#include <array>

#include "photon_ur/lightcone_connection.hpp"

namespace photon_ur {

enum class SpreadForm { cartesian_covariant, spherical };

struct Resolution {
  int n_k = 0;
  int n_theta = 0;
  int n_phi = 0;
};

Resolution resolution_of(const MomentumGrid &grid);

struct SpreadResult {
  double value = 0.0;
  SpreadForm form = SpreadForm::cartesian_covariant;
  Resolution resolution;
};

/// Position spread, momentum spread and their product for one state.
struct UncertaintyReport {
  double norm_sq = 0.0;
  Vec3 mean_k = Vec3::Zero();
  double delta_r = 0.0;
  double delta_p = 0.0;
  double gamma = 0.0;
  Resolution resolution;
};

// The position spread assumes <r> = 0: states are expected to be centred at
// the origin. No recentring is attempted.

/// Delta r from |D_lambda f|^2 + |f|^2/k^2 with the frame's connection.
SpreadResult delta_r_cartesian(const HelicityAmplitudes &amps,
                               const MomentumGrid &grid,
                               const PolarizationFrame &frame,
                               Exec exec = Exec::parallel);

/// Delta r from the spherical-coordinate integrand (z-axis frame).
SpreadResult delta_r_spherical(const HelicityAmplitudes &amps,
                               const MomentumGrid &grid,
                               Exec exec = Exec::parallel);

/// Delta p = < |k - <k>| > with the relativistic measure.
double delta_p(const HelicityAmplitudes &amps, const MomentumGrid &grid,
               Exec exec = Exec::parallel);

UncertaintyReport gamma(const HelicityAmplitudes &amps,
                        const MomentumGrid &grid,
                        const PolarizationFrame &frame,
                        Exec exec = Exec::parallel);

} // namespace photon_ur
