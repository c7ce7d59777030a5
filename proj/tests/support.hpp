#pragma once

// Shared test fixtures: random smooth amplitudes and independent oracles.
// The oracles use Boost quadrature and their own formulas for e(k); they do
// not call the library's grid, connection or spread code.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "photon_ur/momentum_space.hpp"

namespace testing {

using photon_ur::cplx;
using photon_ur::CVec3;
using photon_ur::HelicityAmplitudes;
using photon_ur::HelicityComponent;
using photon_ur::SphericalPartials;
using photon_ur::SphericalPoint;
using photon_ur::Vec3;

/// f = k sin(theta) (1 + b k a) exp(-k a) P(cos theta, cos phi, sin phi),
///   P = c0 + c1 ct + c2 cp + c3 sp + c4 ct cp + c5 ct^2,
/// with analytic partials. Vanishing like sin(theta) keeps e f continuous at
/// the string.
struct SmoothTerm {
  double a = 1.0;
  double b = 0.0;
  std::array<cplx, 6> c{};

  cplx poly(double ct, double cp, double sp) const {
    return c[0] + c[1] * ct + c[2] * cp + c[3] * sp + c[4] * ct * cp +
           c[5] * ct * ct;
  }
  double radial(double k) const {
    return k * (1.0 + b * k * a) * std::exp(-k * a);
  }
  double radial_dk(double k) const {
    return std::exp(-k * a) *
           ((1.0 + 2.0 * b * k * a) - k * a * (1.0 + b * k * a));
  }

  HelicityComponent component() const {
    HelicityComponent out;
    const SmoothTerm self = *this;
    out.value = [self](const SphericalPoint &p) {
      return self.radial(p.k) * std::sin(p.theta) *
             self.poly(std::cos(p.theta), std::cos(p.phi), std::sin(p.phi));
    };
    out.partials = [self](const SphericalPoint &p) {
      const double st = std::sin(p.theta), ct = std::cos(p.theta);
      const double sp = std::sin(p.phi), cp = std::cos(p.phi);
      const cplx P = self.poly(ct, cp, sp);
      const cplx dP_dt = -st * (self.c[1] + self.c[4] * cp + 2.0 * self.c[5] * ct);
      const cplx dP_dp = -self.c[2] * sp + self.c[3] * cp - self.c[4] * ct * sp;
      const double R = self.radial(p.k);
      return SphericalPartials{self.radial_dk(p.k) * st * P,
                               R * (ct * P + st * dP_dt), R * st * dP_dp};
    };
    return out;
  }
};

inline SmoothTerm random_term(std::mt19937_64 &rng, double a) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SmoothTerm t;
  t.a = a;
  t.b = 0.25 * (u(rng) + 1.0);
  for (auto &c : t.c)
    c = {u(rng), u(rng)};
  t.c[0] += 1.5; // keep the state away from zero norm
  return t;
}

/// Random state; f_- is present in roughly half of the draws.
inline HelicityAmplitudes random_amplitudes(std::mt19937_64 &rng,
                                            double a = 1.0) {
  HelicityAmplitudes amps;
  amps.descriptor.family = "random";
  amps.plus = random_term(rng, a).component();
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
    amps.minus = random_term(rng, a).component();
  return amps;
}

// ---- oracles ---------------------------------------------------------------

/// Helicity-lambda polarization vector in the z frame, written out from the
/// closed form e = (-kx kz + i k ky, -ky kz - i k kx, kperp^2)/(sqrt2 k kperp);
/// lambda = -1 is its complex conjugate.
inline CVec3 oracle_e(const Vec3 &k, int lambda) {
  const double kk = k.norm();
  const double kp = std::hypot(k.x(), k.y());
  const double s = 1.0 / (std::sqrt(2.0) * kk * kp);
  CVec3 e{cplx(-k.x() * k.z(), kk * k.y()) * s,
          cplx(-k.y() * k.z(), -kk * k.x()) * s, cplx(kp * kp * s, 0.0)};
  return lambda > 0 ? e : CVec3(e.conjugate());
}

inline cplx eval_at(const HelicityComponent &f, const Vec3 &k) {
  const double kk = k.norm();
  const double c = std::clamp(k.z() / kk, -1.0, 1.0);
  return f.value({kk, std::acos(c), std::atan2(k.y(), k.x())});
}

/// Integral over all momentum space in spherical coordinates: exp-sinh in
/// k, 40-point Gauss in cos(theta) and a 48-point trapezoid in phi.
template <class F> double oracle_integral(F integrand) {
  boost::math::quadrature::exp_sinh<double> radial;
  const auto &x = boost::math::quadrature::gauss<double, 40>::abscissa();
  const auto &w = boost::math::quadrature::gauss<double, 40>::weights();
  constexpr int n_phi = 48;
  double total = 0.0;
  auto angular = [&](double c, double wc) {
    const double s = std::sqrt(1.0 - c * c);
    for (int l = 0; l < n_phi; ++l) {
      const double phi = 2.0 * M_PI * (l + 0.5) / n_phi;
      const Vec3 dir{s * std::cos(phi), s * std::sin(phi), c};
      total += wc * (2.0 * M_PI / n_phi) *
               radial.integrate([&](double k) { return integrand(k * dir); });
    }
  };
  // Boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      angular(0.0, w[i]);
    } else {
      angular(x[i], w[i]);
      angular(-x[i], w[i]);
    }
  }
  return total;
}

/// Sum over helicities of  int d^3k/k |f|^2.
inline double oracle_norm(const HelicityAmplitudes &amps) {
  return oracle_integral([&](const Vec3 &k) {
    return (std::norm(eval_at(amps.plus, k)) +
            (amps.minus.is_zero() ? 0.0 : std::norm(eval_at(amps.minus, k)))) *
           k.norm();
  });
}

/// Delta r as  int d^3k sum_i |d_i (e_lambda f_lambda)|^2 / norm, with
/// Cartesian central differences of the vector wave function.
inline double oracle_delta_r(const HelicityAmplitudes &amps) {
  auto psi_grad_sq = [&](const HelicityComponent &f, int lambda,
                         const Vec3 &k) {
    const double h = 1e-5 * std::max(1.0, k.norm());
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      Vec3 p = k, m = k;
      p[i] += h;
      m[i] -= h;
      const CVec3 d =
          (oracle_e(p, lambda) * eval_at(f, p) -
           oracle_e(m, lambda) * eval_at(f, m)) /
          (2.0 * h);
      sum += d.squaredNorm();
    }
    return sum;
  };
  const double num = oracle_integral([&](const Vec3 &k) {
    double s = psi_grad_sq(amps.plus, 1, k);
    if (!amps.minus.is_zero())
      s += psi_grad_sq(amps.minus, -1, k);
    return s * k.squaredNorm();
  });
  return num / oracle_norm(amps);
}

/// <|k - <k>|> with the d^3k/k measure.
inline double oracle_delta_p(const HelicityAmplitudes &amps) {
  auto dens = [&](const Vec3 &k) {
    return (std::norm(eval_at(amps.plus, k)) +
            (amps.minus.is_zero() ? 0.0 : std::norm(eval_at(amps.minus, k)))) *
           k.norm();
  };
  const double norm = oracle_integral(dens);
  Vec3 mean;
  for (int i = 0; i < 3; ++i)
    mean[i] = oracle_integral([&](const Vec3 &k) { return dens(k) * k[i]; }) /
              norm;
  return oracle_integral(
             [&](const Vec3 &k) { return dens(k) * (k - mean).norm(); }) /
         norm;
}

/// Lowest eigenvalues of -d/dx (1-x^2) d/dx + (m^2 + l^2 - 2 l m x)/(1-x^2)
/// by a cell-centred flux-form finite-difference scheme on x in (-1, 1).
inline Eigen::VectorXd oracle_angular(int lambda, int m, int cells) {
  const double h = 2.0 / cells;
  Eigen::VectorXd diag(cells), sub(cells - 1);
  for (int i = 0; i < cells; ++i) {
    const double x = -1.0 + (i + 0.5) * h;
    const double left = -1.0 + i * h, right = left + h;
    const double pl = 1.0 - left * left, pr = 1.0 - right * right;
    diag[i] = (pl + pr) / (h * h) +
              (m * m + lambda * lambda - 2.0 * lambda * m * x) / (1.0 - x * x);
    if (i + 1 < cells)
      sub[i] = -pr / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

} // namespace testing
