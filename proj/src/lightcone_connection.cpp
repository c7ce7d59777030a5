#include "photon_ur/lightcone_connection.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace photon_ur {

namespace {

// Cartesian index playing the role of (x, y, z) in the z-axis formulas. The
// x and y frames follow from the cyclic relabelling k_z -> k_x -> k_y -> k_z.
std::array<int, 3> local_axes(Axis axis) {
  switch (axis) {
  case Axis::x:
    return {1, 2, 0};
  case Axis::y:
    return {2, 0, 1};
  case Axis::z:
    break;
  }
  return {0, 1, 2};
}

Vec3 to_local(Axis axis, const Vec3 &k) {
  const auto ix = local_axes(axis);
  return {k[ix[0]], k[ix[1]], k[ix[2]]};
}

template <class V> V from_local(Axis axis, const V &local) {
  const auto ix = local_axes(axis);
  V out;
  for (int i = 0; i < 3; ++i)
    out[ix[i]] = local[i];
  return out;
}

double perp_squared(const Vec3 &local) {
  return local.x() * local.x() + local.y() * local.y();
}

void check_off_string(Axis axis, const Vec3 &local) {
  if (!(perp_squared(local) > 0.0)) {
    throw Error(ErrorKind::string_singularity,
                std::string("k lies on the Dirac string along the ") +
                    to_string(axis) + " axis");
  }
}

double fd_step(const Vec3 &k) { return 1e-4 * std::max(1.0, k.norm()); }

// Unconjugated a . b
cplx bilinear(const CVec3 &a, const CVec3 &b) {
  return (a.array() * b.array()).sum();
}

} // namespace

CVec3 polarization_vector(Axis axis, const Vec3 &k) {
  const Vec3 q = to_local(axis, k);
  check_off_string(axis, q);
  const double kk = q.norm();
  const double perp2 = perp_squared(q);
  const double scale = 1.0 / (std::sqrt(2.0) * kk * std::sqrt(perp2));
  const CVec3 local{cplx(-q.x() * q.z(), kk * q.y()) * scale,
                    cplx(-q.y() * q.z(), -kk * q.x()) * scale,
                    cplx(perp2 * scale, 0.0)};
  return from_local(axis, local);
}

Vec3 connection_alpha(Axis axis, const Vec3 &k) {
  const Vec3 q = to_local(axis, k);
  check_off_string(axis, q);
  const double prefactor = q.z() / (q.norm() * perp_squared(q));
  const Vec3 local{-q.y() * prefactor, q.x() * prefactor, 0.0};
  return from_local(axis, local);
}

Vec3 PhaseFunction::grad(const Vec3 &k) const {
  if (gradient)
    return gradient(k);
  const double h = fd_step(k);
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 plus = k, minus = k;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (value(plus) - value(minus)) / (2 * h);
  }
  return g;
}

CVec3 PolarizationFrame::e(const Vec3 &k) const {
  CVec3 out = polarization_vector(axis, k);
  for (const auto &phase : gauge)
    out *= std::exp(-kI * phase.value(k));
  return out;
}

Vec3 PolarizationFrame::alpha(const Vec3 &k) const {
  Vec3 out = connection_alpha(axis, k);
  for (const auto &phase : gauge)
    out += phase.grad(k);
  return out;
}

CVec3 cartesian_gradient(const SphericalPoint &p, const SphericalPartials &d) {
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  const Vec3 r_hat{st * cp, st * sp, ct};
  const Vec3 theta_hat{ct * cp, ct * sp, -st};
  const Vec3 phi_hat{-sp, cp, 0.0};
  return r_hat.cast<cplx>() * d.dk +
         theta_hat.cast<cplx>() * (d.dtheta / p.k) +
         phi_hat.cast<cplx>() * (d.dphi / (p.k * st));
}

CVec3 covariant_derivative_at(const HelicityComponent &f, Helicity h,
                              const SphericalPoint &p,
                              const PolarizationFrame &frame) {
  if (f.is_zero())
    return CVec3::Zero();
  const cplx value = f(p);
  require_finite(value, p, "amplitude");
  const auto d = f.derivatives(p);
  require_finite(d.dk, p, "d/dk amplitude");
  require_finite(d.dtheta, p, "d/dtheta amplitude");
  require_finite(d.dphi, p, "d/dphi amplitude");
  const Vec3 alpha = frame.alpha(p.cartesian());
  return cartesian_gradient(p, d) -
         kI * static_cast<double>(sign(h)) * alpha.cast<cplx>() * value;
}

std::pair<CovariantDerivativeField, CovariantDerivativeField>
covariant_derivative(const HelicityAmplitudes &amps, const MomentumGrid &grid,
                     const PolarizationFrame &frame, Exec exec) {
  CovariantDerivativeField plus{Helicity::plus,
                                std::vector<CVec3>(grid.size())};
  CovariantDerivativeField minus{Helicity::minus,
                                 std::vector<CVec3>(grid.size())};
  for_each_index(exec, grid.size(), [&](std::size_t i) {
    const auto node = grid.node(i);
    plus.values[i] =
        covariant_derivative_at(amps.plus, Helicity::plus, node.point, frame);
    minus.values[i] = covariant_derivative_at(amps.minus, Helicity::minus,
                                              node.point, frame);
  });
  return {std::move(plus), std::move(minus)};
}

namespace {

HelicityComponent rephase(const HelicityComponent &f, Helicity h,
                          const PhaseFunction &phase) {
  if (f.is_zero())
    return {};
  const double lambda = sign(h);
  HelicityComponent out;
  out.value = [v = f.value, phase, lambda](const SphericalPoint &p) {
    return std::exp(kI * lambda * phase.value(p.cartesian())) * v(p);
  };
  if (f.partials) {
    out.partials = [f, phase, lambda](const SphericalPoint &p) {
      const Vec3 k = p.cartesian();
      const Vec3 g = phase.grad(k);
      const double st = std::sin(p.theta), ct = std::cos(p.theta);
      const double sp = std::sin(p.phi), cp = std::cos(p.phi);
      const double dk = g.dot(Vec3{st * cp, st * sp, ct});
      const double dtheta = p.k * g.dot(Vec3{ct * cp, ct * sp, -st});
      const double dphi = p.k * st * g.dot(Vec3{-sp, cp, 0.0});
      const cplx u = std::exp(kI * lambda * phase.value(k));
      const cplx v = f(p);
      const auto d = f.partials(p);
      return SphericalPartials{u * (d.dk + kI * lambda * dk * v),
                               u * (d.dtheta + kI * lambda * dtheta * v),
                               u * (d.dphi + kI * lambda * dphi * v)};
    };
  }
  return out;
}

} // namespace

std::pair<HelicityAmplitudes, PolarizationFrame>
gauge_transform(const HelicityAmplitudes &amps, const PolarizationFrame &frame,
                const PhaseFunction &phase) {
  HelicityAmplitudes out;
  out.plus = rephase(amps.plus, Helicity::plus, phase);
  out.minus = rephase(amps.minus, Helicity::minus, phase);
  out.descriptor = amps.descriptor;
  PolarizationFrame next = frame;
  next.gauge.push_back(phase);
  return {std::move(out), std::move(next)};
}

namespace {

// Five-point central difference of f along coordinate i.
template <class F> auto stencil5(F f, const Vec3 &k, int i, double h) {
  auto at = [&](double s) {
    Vec3 q = k;
    q[i] += s * h;
    return f(q);
  };
  return ((at(-2) - at(2)) + 8.0 * (at(1) - at(-1))) / (12.0 * h);
}

// Step scaled to the distance from the string, where e and alpha vary
// fastest.
double identity_step(Axis axis, const Vec3 &k) {
  return 1e-3 * std::sqrt(perp_squared(to_local(axis, k)));
}

} // namespace

Vec3 verify_connection_curl(Axis axis, const Vec3 &k) {
  check_off_string(axis, to_local(axis, k));
  const double h = identity_step(axis, k);
  auto alpha = [axis](const Vec3 &q) -> Vec3 {
    return connection_alpha(axis, q);
  };
  // d[i][j] = d alpha_j / d k_i
  double d[3][3];
  for (int i = 0; i < 3; ++i) {
    const Vec3 diff = stencil5(alpha, k, i, h);
    for (int j = 0; j < 3; ++j)
      d[i][j] = diff[j];
  }
  const Vec3 curl{d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]};
  const double kn = k.norm();
  return curl + k / (kn * kn * kn);
}

double PolarizationIdentityResiduals::max() const {
  return std::max({alpha, e_dot_de, de_star_dot_de, de_dot_de, norm,
                   transversality, null});
}

PolarizationIdentityResiduals polarization_identities(Axis axis,
                                                      const Vec3 &k) {
  const CVec3 e = polarization_vector(axis, k);
  const Vec3 alpha = connection_alpha(axis, k);
  const double h = identity_step(axis, k);
  auto pol = [axis](const Vec3 &q) -> CVec3 {
    return polarization_vector(axis, q);
  };
  PolarizationIdentityResiduals r{};
  cplx star_sum{}, plain_sum{};
  for (int i = 0; i < 3; ++i) {
    const CVec3 de = stencil5(pol, k, i, h);
    // Eigen's dot() conjugates its left operand.
    const cplx ie_star_de = kI * e.dot(de);
    r.alpha = std::max(r.alpha, std::abs(ie_star_de - alpha[i]));
    r.e_dot_de = std::max(r.e_dot_de, std::abs(bilinear(e, de)));
    star_sum += de.dot(de);
    plain_sum += bilinear(de, de);
  }
  const Vec3 q = to_local(axis, k);
  r.de_star_dot_de = std::abs(star_sum - 1.0 / perp_squared(q));
  r.de_dot_de = std::abs(plain_sum);
  r.norm = std::abs(e.squaredNorm() - 1.0);
  r.transversality = std::abs(bilinear(k.cast<cplx>(), e));
  r.null = std::abs(bilinear(e, e));
  return r;
}

} // namespace photon_ur
