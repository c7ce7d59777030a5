#include "photon_ur/functionals.hpp"

#include <cmath>

namespace photon_ur {

Resolution resolution_of(const MomentumGrid &grid) {
  return {static_cast<int>(grid.k_nodes.size()),
          static_cast<int>(grid.theta_nodes.size()),
          static_cast<int>(grid.phi_nodes.size())};
}

namespace {

double require_positive_norm(const HelicityAmplitudes &amps,
                             const MomentumGrid &grid, Exec exec) {
  const double norm = norm_squared(amps, grid, exec);
  if (!(norm > 0.0))
    throw Error(ErrorKind::undefined_mean, "state has zero norm");
  return norm;
}

double checked(double integral, const char *what) {
  if (!std::isfinite(integral)) {
    throw Error(ErrorKind::evaluation,
                std::string(what) + " integrand is not finite");
  }
  return integral;
}

constexpr Helicity kBoth[] = {Helicity::plus, Helicity::minus};

} // namespace

SpreadResult delta_r_cartesian(const HelicityAmplitudes &amps,
                               const MomentumGrid &grid,
                               const PolarizationFrame &frame, Exec exec) {
  const double norm = require_positive_norm(amps, grid, exec);
  const double integral = reduce_sum(exec, grid.size(), [&](std::size_t i) {
    const auto node = grid.node(i);
    const auto &p = node.point;
    double sum = 0.0;
    for (Helicity h : kBoth) {
      const auto &f = amps.component(h);
      if (f.is_zero())
        continue;
      const CVec3 d = covariant_derivative_at(f, h, p, frame);
      sum += d.squaredNorm() + std::norm(f(p)) / (p.k * p.k);
    }
    return node.weight * p.k * p.k * sum;
  });
  return {checked(integral, "delta_r") / norm, SpreadForm::cartesian_covariant,
          resolution_of(grid)};
}

SpreadResult delta_r_spherical(const HelicityAmplitudes &amps,
                               const MomentumGrid &grid, Exec exec) {
  const double norm = require_positive_norm(amps, grid, exec);
  const double integral = reduce_sum(exec, grid.size(), [&](std::size_t i) {
    const auto node = grid.node(i);
    const auto &p = node.point;
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    double sum = 0.0;
    for (Helicity h : kBoth) {
      const auto &f = amps.component(h);
      if (f.is_zero())
        continue;
      const cplx v = f(p);
      require_finite(v, p, "amplitude");
      const auto d = f.derivatives(p);
      // i lambda cos(theta) (f^* d_phi f - f d_phi f^*)
      const double cross = -2.0 * sign(h) * ct * std::imag(std::conj(v) * d.dphi);
      sum += std::norm(d.dk) + std::norm(d.dtheta) / (p.k * p.k) +
             (std::norm(d.dphi) + std::norm(v) + cross) /
                 (p.k * p.k * st * st);
    }
    return node.weight * p.k * p.k * sum;
  });
  return {checked(integral, "delta_r") / norm, SpreadForm::spherical,
          resolution_of(grid)};
}

double delta_p(const HelicityAmplitudes &amps, const MomentumGrid &grid,
               Exec exec) {
  const double norm = require_positive_norm(amps, grid, exec);
  const Vec3 mean = mean_momentum(amps, grid, exec);
  const double integral = reduce_sum(exec, grid.size(), [&](std::size_t i) {
    const auto node = grid.node(i);
    const auto &p = node.point;
    double rho = 0.0;
    for (Helicity h : kBoth)
      rho += std::norm(amps.component(h)(p));
    return node.weight * p.k * (p.cartesian() - mean).norm() * rho;
  });
  return checked(integral, "delta_p") / norm;
}

UncertaintyReport gamma(const HelicityAmplitudes &amps,
                        const MomentumGrid &grid,
                        const PolarizationFrame &frame, Exec exec) {
  UncertaintyReport report;
  report.norm_sq = require_positive_norm(amps, grid, exec);
  report.mean_k = mean_momentum(amps, grid, exec);
  report.delta_r = delta_r_cartesian(amps, grid, frame, exec).value;
  report.delta_p = delta_p(amps, grid, exec);
  report.gamma = report.delta_r * report.delta_p;
  report.resolution = resolution_of(grid);
  return report;
}

} // namespace photon_ur
