#include "photon_ur/field_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace photon_ur {

HelicityAmplitudes saturating_amplitude(Axis axis, double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::invalid_argument, "scale a must be positive");
  const double c = a * a / std::sqrt(kPi);
  HelicityAmplitudes amps;
  amps.descriptor.family = std::string("sat-") + to_string(axis);
  amps.descriptor.parameters["a"] = a;

  // f = c k A(theta, phi) exp(-k a); only the angular factor differs.
  struct Angular {
    cplx value, dtheta, dphi;
  };
  std::function<Angular(double, double)> angular;
  switch (axis) {
  case Axis::z:
    angular = [](double t, double) {
      return Angular{std::sin(t), std::cos(t), 0.0};
    };
    break;
  case Axis::x:
    angular = [](double t, double p) {
      const double st = std::sin(t), ct = std::cos(t);
      const double sp = std::sin(p), cp = std::cos(p);
      return Angular{cplx(-ct * cp, -sp), st * cp, cplx(ct * sp, -cp)};
    };
    break;
  case Axis::y:
    angular = [](double t, double p) {
      const double st = std::sin(t), ct = std::cos(t);
      const double sp = std::sin(p), cp = std::cos(p);
      return Angular{cplx(-ct * sp, cp), st * sp, cplx(-ct * cp, -sp)};
    };
    break;
  }

  amps.plus.value = [c, a, angular](const SphericalPoint &p) {
    return c * p.k * std::exp(-p.k * a) * angular(p.theta, p.phi).value;
  };
  amps.plus.partials = [c, a, angular](const SphericalPoint &p) {
    const Angular ang = angular(p.theta, p.phi);
    const double radial = c * std::exp(-p.k * a);
    return SphericalPartials{radial * (1.0 - p.k * a) * ang.value,
                             radial * p.k * ang.dtheta,
                             radial * p.k * ang.dphi};
  };
  return amps;
}

SpatialGrid uniform_box(double side, int n) {
  if (!(side > 0.0) || n < 2)
    throw Error(ErrorKind::invalid_argument, "box needs side > 0 and n >= 2");
  SpatialGrid grid;
  grid.layout = "uniform_box";
  grid.extent = 0.5 * side * std::sqrt(3.0);
  const double step = side / (n - 1);
  grid.points.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        grid.points.emplace_back(-0.5 * side + i * step,
                                 -0.5 * side + j * step,
                                 -0.5 * side + l * step);
  return grid;
}

SpatialGrid spherical_cubature(double radius, int n_r, int n_theta,
                               int n_phi) {
  if (!(radius > 0.0) || n_r < 2 || n_theta < 2 || n_phi < 2) {
    throw Error(ErrorKind::invalid_argument,
                "spherical cubature needs radius > 0 and counts >= 2");
  }
  std::vector<double> r, wr, c, wc;
  gauss_legendre(n_r, 0.0, radius, r, wr);
  gauss_legendre(n_theta, -1.0, 1.0, c, wc);
  SpatialGrid grid;
  grid.layout = "spherical_cubature";
  grid.extent = radius;
  const double wphi = 2.0 * kPi / n_phi;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double s = std::sqrt(1.0 - c[j] * c[j]);
      for (int l = 0; l < n_phi; ++l) {
        const double phi = (l + 0.5) * wphi;
        grid.points.emplace_back(r[i] * s * std::cos(phi),
                                 r[i] * s * std::sin(phi), r[i] * c[j]);
        grid.weights.push_back(r[i] * r[i] * wr[i] * wc[j] * wphi);
      }
    }
  }
  return grid;
}

double trusted_radius(const MomentumGrid &grid) {
  return 0.5 * static_cast<double>(grid.k_nodes.size()) / grid.k_scale;
}

RSField synthesize_field(const HelicityAmplitudes &amps,
                         const MomentumGrid &grid,
                         const PolarizationFrame &frame,
                         const SpatialGrid &points, double t, Exec exec) {
  RSField field;
  field.grid = points;
  field.t = t;

  const double trusted = trusted_radius(grid);
  // The phase k.r - k t spans |r| + |t| per unit k.
  double worst = 0.0;
  for (const auto &r : points.points)
    worst = std::max(worst, r.norm() + std::abs(t));
  if (worst > 2.0 * trusted) {
    std::ostringstream msg;
    msg << "point at |r| = " << worst
        << " is beyond twice the resolved radius " << trusted
        << "; increase n_k or decrease k_scale";
    throw Error(ErrorKind::numeric, msg.str());
  }
  if (worst > trusted) {
    std::ostringstream msg;
    msg << "points beyond the resolved radius " << trusted
        << " (max |r| = " << worst << ")";
    field.warnings.push_back(msg.str());
  }

  // Per-node coefficients (2 pi)^(-3/2) w k^2 e(k) f.
  const std::size_t n = grid.size();
  std::vector<Vec3> kvec(n);
  std::vector<double> kmag(n);
  std::vector<CVec3> plus(n), minus(n);
  const double norm = std::pow(2.0 * kPi, -1.5);
  const bool has_plus = !amps.plus.is_zero();
  const bool has_minus = !amps.minus.is_zero();
  for_each_index(exec, n, [&](std::size_t i) {
    const auto node = grid.node(i);
    const auto &p = node.point;
    kvec[i] = p.cartesian();
    kmag[i] = p.k;
    const CVec3 e = frame.e(kvec[i]);
    const double w = norm * node.weight * p.k * p.k;
    plus[i] = CVec3::Zero();
    minus[i] = CVec3::Zero();
    if (has_plus) {
      const cplx f = amps.plus(p);
      require_finite(f, p, "f_+");
      plus[i] = e * (w * f);
    }
    if (has_minus) {
      const cplx f = amps.minus(p);
      require_finite(f, p, "f_-");
      minus[i] = e * (w * std::conj(f));
    }
  });

  field.values.resize(points.points.size());
  for_each_index(exec, points.points.size(), [&](std::size_t j) {
    const Vec3 &r = points.points[j];
    CVec3 sum = CVec3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = kvec[i].dot(r) - kmag[i] * t;
      const cplx u{std::cos(phase), std::sin(phase)};
      if (has_plus)
        sum += plus[i] * u;
      if (has_minus)
        sum += minus[i] * std::conj(u);
    }
    field.values[j] = sum;
  });
  return field;
}

PotentialDerivatives whittaker_potential(double a, const Vec3 &r, double tau) {
  const cplx s{tau, -a}; // tau - i a
  const cplx d = r.squaredNorm() - s * s;
  const cplx d2 = d * d;
  const cplx d3 = d2 * d;
  PotentialDerivatives out;
  out.value = 1.0 / d;
  const std::array<cplx, 4> x{r.x(), r.y(), r.z(), 0.0};
  for (int i = 0; i < 3; ++i)
    out.first[i] = -2.0 * x[i] / d2;
  out.first[3] = 2.0 * s / d2;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      out.second[i][j] = (i == j ? -2.0 / d2 : cplx{}) + 8.0 * x[i] * x[j] / d3;
    out.second[i][3] = out.second[3][i] = -8.0 * x[i] * s / d3;
  }
  out.second[3][3] = 2.0 / d2 + 8.0 * s * s / d3;
  return out;
}

CVec3 whittaker_field(Axis axis, double a, const Vec3 &r, double t) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::invalid_argument, "scale a must be positive");
  const auto phi = whittaker_potential(a, r, t);
  const auto &d = phi.second;
  // Local axes: the distinguished axis plays the role of z.
  int ix = 0, iy = 1, iz = 2;
  if (axis == Axis::x) {
    ix = 1, iy = 2, iz = 0;
  } else if (axis == Axis::y) {
    ix = 2, iy = 0, iz = 1;
  }
  const int it = 3;
  const double prefactor = a * a / kPi;
  CVec3 out;
  out[ix] = prefactor * (d[ix][iz] + kI * d[iy][it]);
  out[iy] = prefactor * (d[iy][iz] - kI * d[ix][it]);
  out[iz] = prefactor * (-d[ix][ix] - d[iy][iy]);
  return out;
}

RSField whittaker_field(Axis axis, double a, const SpatialGrid &points,
                        double t, Exec exec) {
  RSField field;
  field.grid = points;
  field.t = t;
  field.values.resize(points.points.size());
  for_each_index(exec, points.points.size(), [&](std::size_t j) {
    field.values[j] = whittaker_field(axis, a, points.points[j], t);
  });
  return field;
}

Vec3 electric_field_t0(double a, const Vec3 &r) {
  const double d = a * a + r.squaredNorm();
  const double x = r.x(), y = r.y(), z = r.z();
  return 4.0 * a * a / kPi *
         Vec3{2 * z * x - 2 * a * y, 2 * y * z + 2 * a * x,
              a * a - r.squaredNorm() + 2 * z * z} /
         (d * d * d);
}

std::vector<double> energy_density(const RSField &field) {
  std::vector<double> out(field.values.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = field.values[i].squaredNorm();
  return out;
}

double closed_form_energy(double a, double r) {
  const double d = a * a + r * r;
  return 16.0 * std::pow(a, 4) / (kPi * kPi * d * d * d * d);
}

namespace {

void require_weights(const RSField &field) {
  if (!field.grid.has_weights()) {
    throw Error(ErrorKind::invalid_argument,
                "spatial grid has no cubature weights");
  }
}

} // namespace

double total_energy(const RSField &field) {
  require_weights(field);
  const auto rho = energy_density(field);
  std::vector<double> terms(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i)
    terms[i] = field.grid.weights[i] * rho[i];
  return pairwise_sum(terms);
}

namespace {

double second_moment(const RSField &field) {
  const auto rho = energy_density(field);
  std::vector<double> terms(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i)
    terms[i] = field.grid.weights[i] * field.grid.points[i].squaredNorm() *
               rho[i];
  return pairwise_sum(terms);
}

} // namespace

double moment_tail_fraction(const RSField &field) {
  require_weights(field);
  const auto rho = energy_density(field);
  double r_out = 0.0;
  for (const auto &p : field.grid.points)
    r_out = std::max(r_out, p.norm());
  // Fit C in rho ~ C r^-8 on the outermost shell of samples.
  std::vector<double> fits;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = field.grid.points[i].norm();
    if (r >= 0.999 * r_out)
      fits.push_back(rho[i] * std::pow(r, 8));
  }
  const double c = pairwise_sum(fits) / static_cast<double>(fits.size());
  const double radius = std::max(field.grid.extent, r_out);
  // int_R^inf r^2 * C r^-8 * 4 pi r^2 dr
  const double tail = 4.0 * kPi * c / (3.0 * std::pow(radius, 3));
  const double inside = second_moment(field);
  return tail / (inside + tail);
}

double real_space_delta_r(const RSField &field, double norm_sq,
                          double max_tail) {
  require_weights(field);
  if (!(norm_sq > 0.0))
    throw Error(ErrorKind::invalid_argument, "norm must be positive");
  const double tail = moment_tail_fraction(field);
  if (tail > max_tail) {
    const double suggested =
        field.grid.extent * std::cbrt(tail / max_tail) * 1.1;
    std::ostringstream msg;
    msg << "estimated moment tail fraction " << tail << " exceeds " << max_tail
        << "; use a truncation radius of at least " << suggested;
    throw Error(ErrorKind::truncation, msg.str());
  }
  return second_moment(field) / norm_sq;
}

} // namespace photon_ur
