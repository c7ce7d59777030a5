#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "photon_ur/momentum_space.hpp"

namespace photon_ur {

struct QuantumNumbers {
  int n_r = 0;
  int j = 0;
  int m = 0;
  int lambda = 1;
};

enum class EigenKind { radial, angular, oscillator };

/// An eigenvalue with its sampled eigenfunction. Samples are normalized with
/// kappa^2 dkappa (radial), sin(theta) dtheta (angular) or r^2 dr (oscillator).
struct EigenSolution {
  double eigenvalue = 0.0;
  std::vector<std::pair<double, double>> samples;
  QuantumNumbers quantum_numbers;
  EigenKind kind = EigenKind::radial;
};

/// Lowest `n_eigen` eigenvalues of the monopole-harmonic operator
///   -1/sin d/dtheta sin d/dtheta + (m^2 + lambda^2 - 2 lambda m cos)/sin^2.
std::vector<EigenSolution> solve_angular(int lambda, int m, int n_eigen);

struct RadialOptions {
  std::optional<double> kappa_max; // default from the expected decay length
  int steps = 16000;
  double max_tail = 1e-10;
};

/// Bound state (n_r, j) of the Coulomb-like radial equation
///   [-k^-2 d/dk k^2 d/dk + j(j+1)/k^2 - 2Z/k] K = E K.
EigenSolution solve_radial_coulomb(double z, int j, int n_r,
                                   const RadialOptions &options = {});

/// Self-consistent gamma with E(gamma; n_r, j) = -gamma.
double solve_gamma(int n_r, int j);

/// Norm of the variational-equation residual for helicity `lambda`, in the
/// dimensionless momentum kappa = k / Delta p, after normalizing f to unit
/// norm in kappa.
double pde_residual(const HelicityAmplitudes &amps, double gamma, int lambda,
                    const MomentumGrid &grid, Exec exec = Exec::parallel);

/// Self-consistent harmonic-oscillator product for level n: returns n + 3/2.
double ho_baseline(int n);

struct OscillatorSpreads {
  double sigma_r;
  double sigma_p;
};

/// Position and momentum spreads of the oscillator ground state whose
/// Gaussian width is `a`.
OscillatorSpreads ho_ground_spreads(double a);

/// Eigenfunction of the oscillator level solved by `ho_baseline`.
EigenSolution ho_state(int n);

} // namespace photon_ur
