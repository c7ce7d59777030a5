#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "photon_ur/parallel.hpp"
#include "photon_ur/types.hpp"

namespace photon_ur {

/// A point on the light cone in spherical momentum coordinates.
struct SphericalPoint {
  double k;
  double theta;
  double phi;

  Vec3 cartesian() const;
};

SphericalPoint to_spherical(const Vec3 &k);

/// First partial derivatives of a helicity component in (k, theta, phi).
struct SphericalPartials {
  cplx dk;
  cplx dtheta;
  cplx dphi;
};

using AmplitudeFn = std::function<cplx(const SphericalPoint &)>;
using PartialsFn = std::function<SphericalPartials(const SphericalPoint &)>;

/// One helicity component f_lambda. An empty `value` means identically zero.
struct HelicityComponent {
  AmplitudeFn value;
  PartialsFn partials; // optional; central differences are used when empty

  bool is_zero() const { return !value; }
  cplx operator()(const SphericalPoint &p) const {
    return value ? value(p) : cplx{};
  }
  /// Analytic partials when available, otherwise central differences with
  /// step 1e-5 * max(coordinate scale, 1).
  SphericalPartials derivatives(const SphericalPoint &p) const;
};

struct AmplitudeDescriptor {
  std::string family;
  std::map<std::string, double> parameters;

  std::optional<double> parameter(const std::string &name) const;
};

/// The pair (f_+, f_-) of momentum-space photon wave functions.
struct HelicityAmplitudes {
  HelicityComponent plus;
  HelicityComponent minus;
  AmplitudeDescriptor descriptor;

  const HelicityComponent &component(Helicity h) const {
    return h == Helicity::plus ? plus : minus;
  }
  HelicityComponent &component(Helicity h) {
    return h == Helicity::plus ? plus : minus;
  }

  /// Multiplies both components (and their partials) by `c`.
  HelicityAmplitudes scaled(cplx c) const;
};

/// Radial quadrature family.
///  - rational: Gauss-Legendre in x on (0,1) with k = k_scale x/(1-x); covers
///    the whole half line and suits smooth, non-oscillatory integrands.
///  - truncated: Gauss-Legendre on (0, 40 k_scale); resolves the oscillating
///    phase exp(i k.r) far better and is used for field synthesis. Amplitudes
///    must be negligible beyond the cutoff.
enum class RadialRule { rational, truncated };

/// Tensor-product quadrature on (k, theta, phi) for integrals over momentum
/// space. Theta weights are taken with respect to cos(theta), so
/// sum over nodes of  w * g  approximates  integral dk dcos(theta) dphi  g.
/// No theta node lies on the poles, which keeps every node off the string.
struct MomentumGrid {
  std::vector<double> k_nodes;
  std::vector<double> k_weights;
  std::vector<double> theta_nodes;
  std::vector<double> theta_weights;
  std::vector<double> phi_nodes;
  std::vector<double> phi_weights;
  double k_scale = 1.0;
  RadialRule radial_rule = RadialRule::rational;

  std::size_t size() const {
    return k_nodes.size() * theta_nodes.size() * phi_nodes.size();
  }

  struct Node {
    SphericalPoint point;
    double weight; // dk dcos(theta) dphi
  };

  /// Flattened node with phi fastest, then theta, then k.
  Node node(std::size_t index) const;
};

/// Cutoff of the truncated radial rule in units of k_scale.
inline constexpr double kTruncatedCutoff = 40.0;

/// Radial nodes per `rule`, Gauss-Legendre in cos(theta), trapezoid in phi.
MomentumGrid build_grid(int n_k, int n_theta, int n_phi, double k_scale,
                        RadialRule rule = RadialRule::rational);

/// Gauss-Legendre nodes and weights on [lo, hi].
void gauss_legendre(int n, double lo, double hi, std::vector<double> &nodes,
                    std::vector<double> &weights);

/// Sum over helicities of  integral d^3k/k |f_lambda|^2.
double norm_squared(const HelicityAmplitudes &amps, const MomentumGrid &grid,
                    Exec exec = Exec::parallel);

/// <k> with the relativistic measure d^3k/k.
Vec3 mean_momentum(const HelicityAmplitudes &amps, const MomentumGrid &grid,
                   Exec exec = Exec::parallel);

/// Throws an evaluation error naming the node if `value` is not finite.
void require_finite(cplx value, const SphericalPoint &p, const char *what);

} // namespace photon_ur
