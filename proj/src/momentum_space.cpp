#include "photon_ur/momentum_space.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <gsl/gsl_integration.h>

namespace photon_ur {

Vec3 SphericalPoint::cartesian() const {
  const double s = std::sin(theta);
  return {k * s * std::cos(phi), k * s * std::sin(phi), k * std::cos(theta)};
}

SphericalPoint to_spherical(const Vec3 &k) {
  const double norm = k.norm();
  const double rho = std::hypot(k.x(), k.y());
  return {norm, std::atan2(rho, k.z()), std::atan2(k.y(), k.x())};
}

SphericalPartials HelicityComponent::derivatives(const SphericalPoint &p) const {
  if (!value)
    return {};
  if (partials)
    return partials(p);
  const double hk = 1e-5 * std::max(p.k, 1.0);
  const double ht = 1e-5;
  const double hp = 1e-5;
  auto at = [&](double k, double t, double f) { return value({k, t, f}); };
  return {
      (at(p.k + hk, p.theta, p.phi) - at(p.k - hk, p.theta, p.phi)) / (2 * hk),
      (at(p.k, p.theta + ht, p.phi) - at(p.k, p.theta - ht, p.phi)) / (2 * ht),
      (at(p.k, p.theta, p.phi + hp) - at(p.k, p.theta, p.phi - hp)) / (2 * hp),
  };
}

std::optional<double>
AmplitudeDescriptor::parameter(const std::string &name) const {
  if (auto it = parameters.find(name); it != parameters.end())
    return it->second;
  return std::nullopt;
}

namespace {

HelicityComponent scale_component(const HelicityComponent &c, cplx factor) {
  if (c.is_zero())
    return {};
  HelicityComponent out;
  out.value = [v = c.value, factor](const SphericalPoint &p) {
    return factor * v(p);
  };
  if (c.partials) {
    out.partials = [d = c.partials, factor](const SphericalPoint &p) {
      const auto s = d(p);
      return SphericalPartials{factor * s.dk, factor * s.dtheta,
                               factor * s.dphi};
    };
  }
  return out;
}

} // namespace

HelicityAmplitudes HelicityAmplitudes::scaled(cplx c) const {
  HelicityAmplitudes out;
  out.plus = scale_component(plus, c);
  out.minus = scale_component(minus, c);
  out.descriptor = descriptor;
  return out;
}

void gauss_legendre(int n, double lo, double hi, std::vector<double> &nodes,
                    std::vector<double> &weights) {
  std::unique_ptr<gsl_integration_glfixed_table,
                  decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
            &gsl_integration_glfixed_table_free);
  if (!table)
    throw Error(ErrorKind::invalid_argument, "cannot build Gauss-Legendre rule");
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(lo, hi, static_cast<std::size_t>(i),
                                  &nodes[static_cast<std::size_t>(i)],
                                  &weights[static_cast<std::size_t>(i)],
                                  table.get());
  }
  // GSL orders nodes symmetrically about the midpoint; sort ascending so the
  // flattened node order is monotone in each coordinate.
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  std::vector<double> n2(nodes.size()), w2(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    n2[i] = nodes[order[i]];
    w2[i] = weights[order[i]];
  }
  nodes = std::move(n2);
  weights = std::move(w2);
}

MomentumGrid build_grid(int n_k, int n_theta, int n_phi, double k_scale,
                        RadialRule rule) {
  if (n_k < 4 || n_theta < 4 || n_phi < 4) {
    throw Error(ErrorKind::invalid_argument,
                "grid resolutions must all be >= 4");
  }
  if (!(k_scale > 0.0) || !std::isfinite(k_scale))
    throw Error(ErrorKind::invalid_argument, "k_scale must be positive");

  MomentumGrid grid;
  grid.k_scale = k_scale;
  grid.radial_rule = rule;

  if (rule == RadialRule::truncated) {
    gauss_legendre(n_k, 0.0, kTruncatedCutoff * k_scale, grid.k_nodes,
                   grid.k_weights);
  } else {
    std::vector<double> x, wx;
    gauss_legendre(n_k, 0.0, 1.0, x, wx);
    grid.k_nodes.resize(x.size());
    grid.k_weights.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double one_minus = 1.0 - x[i];
      grid.k_nodes[i] = k_scale * x[i] / one_minus;
      grid.k_weights[i] = wx[i] * k_scale / (one_minus * one_minus);
    }
  }

  std::vector<double> c, wc;
  gauss_legendre(n_theta, -1.0, 1.0, c, wc);
  // Ascending theta means descending cos(theta).
  grid.theta_nodes.resize(c.size());
  grid.theta_weights.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t j = c.size() - 1 - i;
    grid.theta_nodes[i] = std::acos(c[j]);
    grid.theta_weights[i] = wc[j];
  }

  grid.phi_nodes.resize(static_cast<std::size_t>(n_phi));
  grid.phi_weights.assign(static_cast<std::size_t>(n_phi), 2.0 * kPi / n_phi);
  for (int i = 0; i < n_phi; ++i)
    grid.phi_nodes[static_cast<std::size_t>(i)] = 2.0 * kPi * i / n_phi;
  return grid;
}

MomentumGrid::Node MomentumGrid::node(std::size_t index) const {
  const std::size_t np = phi_nodes.size();
  const std::size_t nt = theta_nodes.size();
  const std::size_t ip = index % np;
  const std::size_t it = (index / np) % nt;
  const std::size_t ik = index / (np * nt);
  return {{k_nodes[ik], theta_nodes[it], phi_nodes[ip]},
          k_weights[ik] * theta_weights[it] * phi_weights[ip]};
}

void require_finite(cplx value, const SphericalPoint &p, const char *what) {
  if (std::isfinite(value.real()) && std::isfinite(value.imag()))
    return;
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " is not finite at node (k=" << p.k << ", theta=" << p.theta
      << ", phi=" << p.phi << ")";
  throw Error(ErrorKind::evaluation, msg.str());
}

namespace {

// |f_+|^2 + |f_-|^2 at a node, with the finite-value check.
double density(const HelicityAmplitudes &amps, const SphericalPoint &p) {
  double sum = 0.0;
  for (Helicity h : {Helicity::plus, Helicity::minus}) {
    const auto &c = amps.component(h);
    if (c.is_zero())
      continue;
    const cplx f = c(p);
    require_finite(f, p, h == Helicity::plus ? "f_+" : "f_-");
    sum += std::norm(f);
  }
  return sum;
}

} // namespace

double norm_squared(const HelicityAmplitudes &amps, const MomentumGrid &grid,
                    Exec exec) {
  return reduce_sum(exec, grid.size(), [&](std::size_t i) {
    const auto n = grid.node(i);
    return n.weight * n.point.k * density(amps, n.point);
  });
}

Vec3 mean_momentum(const HelicityAmplitudes &amps, const MomentumGrid &grid,
                   Exec exec) {
  const std::size_t n = grid.size();
  std::vector<double> rho(n);
  for_each_index(exec, n, [&](std::size_t i) {
    const auto node = grid.node(i);
    rho[i] = node.weight * node.point.k * density(amps, node.point);
  });
  const double norm = pairwise_sum(rho);
  if (!(norm > 0.0)) {
    throw Error(ErrorKind::undefined_mean,
                "mean momentum is undefined for a zero-norm state");
  }
  Vec3 mean;
  std::vector<double> term(n);
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < n; ++i)
      term[i] = rho[i] * grid.node(i).point.cartesian()[axis];
    mean[axis] = pairwise_sum(term) / norm;
  }
  return mean;
}

} // namespace photon_ur
