#include "photon_ur/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "photon_ur/functionals.hpp"

namespace photon_ur {

// ---------------------------------------------------------------------------
// Angular problem

namespace {

struct AngularBasis {
  int alpha; // |m - lambda|, exponent at cos(theta) = 1
  int beta;  // |m + lambda|, exponent at cos(theta) = -1
  int size;
};

// Legendre P_0..P_{n-1} and derivatives at x.
void legendre_with_derivs(int n, double x, std::vector<double> &p,
                          std::vector<double> &dp) {
  p.assign(static_cast<std::size_t>(n), 0.0);
  dp.assign(static_cast<std::size_t>(n), 0.0);
  p[0] = 1.0;
  if (n > 1) {
    p[1] = x;
    dp[1] = 1.0;
  }
  for (int l = 2; l < n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    p[i] = ((2 * l - 1) * x * p[i - 1] - (l - 1) * p[i - 2]) / l;
    dp[i] = dp[i - 2] + (2 * l - 1) * p[i - 1];
  }
}

struct AngularSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Rayleigh-Ritz in the basis (1-x)^(alpha/2) (1+x)^(beta/2) P_k(x). Every
// matrix element is a polynomial integral, so the quadrature is exact.
AngularSpectrum angular_spectrum(int lambda, int m, const AngularBasis &basis) {
  const int n = basis.size;
  std::vector<double> x, wx;
  gauss_legendre(2 * n + basis.alpha + basis.beta + 8, -1.0, 1.0, x, wx);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> p, dp;
  const double mm = m, ll = lambda;
  for (std::size_t q = 0; q < x.size(); ++q) {
    const double xi = x[q];
    const double w = std::pow(1.0 - xi, 0.5 * basis.alpha) *
                     std::pow(1.0 + xi, 0.5 * basis.beta);
    const double s =
        -0.5 * basis.alpha / (1.0 - xi) + 0.5 * basis.beta / (1.0 + xi);
    const double one_minus_x2 = 1.0 - xi * xi;
    const double potential = (mm * mm + ll * ll - 2.0 * ll * mm * xi) /
                             one_minus_x2;
    legendre_with_derivs(n, xi, p, dp);
    Eigen::VectorXd g(n), dg(n);
    for (int k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      g[k] = w * p[i];
      dg[k] = w * (dp[i] + s * p[i]);
    }
    a += wx[q] * (one_minus_x2 * dg * dg.transpose() +
                  potential * g * g.transpose());
    b += wx[q] * g * g.transpose();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::convergence, "angular eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double angular_eigenfunction(const AngularBasis &basis,
                             const Eigen::VectorXd &coeffs, double x) {
  std::vector<double> p, dp;
  legendre_with_derivs(basis.size, x, p, dp);
  double sum = 0.0;
  for (int k = 0; k < basis.size; ++k)
    sum += coeffs[k] * p[static_cast<std::size_t>(k)];
  return std::pow(1.0 - x, 0.5 * basis.alpha) *
         std::pow(1.0 + x, 0.5 * basis.beta) * sum;
}

} // namespace

std::vector<EigenSolution> solve_angular(int lambda, int m, int n_eigen) {
  if (n_eigen < 1)
    throw Error(ErrorKind::invalid_argument, "n_eigen must be >= 1");
  const int alpha = std::abs(m - lambda);
  const int beta = std::abs(m + lambda);
  const AngularBasis coarse{alpha, beta, n_eigen + 4};
  const AngularBasis fine{alpha, beta, n_eigen + 8};
  const auto low = angular_spectrum(lambda, m, coarse);
  const auto high = angular_spectrum(lambda, m, fine);
  for (int i = 0; i < n_eigen; ++i) {
    const double diff = std::abs(low.values[i] - high.values[i]);
    if (diff > 1e-9 * std::max(1.0, std::abs(high.values[i]))) {
      std::ostringstream msg;
      msg << "angular eigenvalue " << i << " not converged (change " << diff
          << ")";
      throw Error(ErrorKind::convergence, msg.str());
    }
  }

  constexpr int kSamples = 181;
  std::vector<EigenSolution> out;
  for (int i = 0; i < n_eigen; ++i) {
    EigenSolution sol;
    sol.kind = EigenKind::angular;
    sol.eigenvalue = high.values[i];
    const int j = static_cast<int>(
        std::lround(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * sol.eigenvalue))));
    sol.quantum_numbers = {0, j, m, lambda};
    Eigen::VectorXd coeffs = high.vectors.col(i);
    // Fix the sign so the largest-magnitude sample is positive.
    double peak = 0.0;
    for (int s = 0; s < kSamples; ++s) {
      const double theta = kPi * s / (kSamples - 1);
      const double v = angular_eigenfunction(fine, coeffs, std::cos(theta));
      if (std::abs(v) > std::abs(peak))
        peak = v;
    }
    if (peak < 0.0)
      coeffs = -coeffs;
    for (int s = 0; s < kSamples; ++s) {
      const double theta = kPi * s / (kSamples - 1);
      sol.samples.emplace_back(
          theta, angular_eigenfunction(fine, coeffs, std::cos(theta)));
    }
    out.push_back(std::move(sol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Radial problems: -u'' + [l(l+1)/x^2 - 2Z/x + w2 x^2] u = E u, u(0) = 0.

namespace {

struct RadialProblem {
  int l;
  double z;  // Coulomb strength
  double w2; // oscillator strength
  double x_max;
  int steps;
};

double potential(const RadialProblem &pr, double x) {
  return pr.l * (pr.l + 1) / (x * x) - 2.0 * pr.z / x + pr.w2 * x * x;
}

// Power series u = x^(l+1) (1 + b1 x + b2 x^2 + b3 x^3 + b4 x^4) near 0.
double series_start(const RadialProblem &pr, double energy, double x) {
  double b[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
  for (int n = 1; n <= 4; ++n) {
    double rhs = -2.0 * pr.z * b[n - 1];
    if (n >= 2)
      rhs -= energy * b[n - 2];
    if (n >= 4)
      rhs += pr.w2 * b[n - 4];
    b[n] = rhs / (n * (n + 2 * pr.l + 1));
  }
  double poly = 0.0;
  for (int n = 4; n >= 0; --n)
    poly = poly * x + b[n];
  return std::pow(x, pr.l + 1) * poly;
}

// Numerov integration from the origin. Returns the number of sign changes;
// fills `u` when requested. Values are rescaled to stay finite, so `u` is
// only meaningful up to an overall constant.
int integrate_outward(const RadialProblem &pr, double energy,
                      std::vector<double> *u_out) {
  const double h = pr.x_max / pr.steps;
  const double h12 = h * h / 12.0;
  std::vector<double> u(static_cast<std::size_t>(pr.steps) + 1, 0.0);
  u[1] = series_start(pr, energy, h);
  u[2] = series_start(pr, energy, 2 * h);
  auto q = [&](int i) { return potential(pr, i * h) - energy; };
  int nodes = 0;
  double q_prev = q(1), q_cur = q(2);
  for (int i = 2; i < pr.steps; ++i) {
    const double q_next = q(i + 1);
    const auto ui = static_cast<std::size_t>(i);
    u[ui + 1] = (2.0 * u[ui] * (1.0 + 5.0 * h12 * q_cur) -
                 u[ui - 1] * (1.0 - h12 * q_prev)) /
                (1.0 - h12 * q_next);
    if ((u[ui + 1] < 0.0) != (u[ui] < 0.0) && u[ui + 1] != 0.0)
      ++nodes;
    if (std::abs(u[ui + 1]) > 1e150) {
      for (std::size_t k = 0; k <= ui + 1; ++k)
        u[k] *= 1e-150;
    }
    q_prev = q_cur;
    q_cur = q_next;
  }
  if (u_out)
    *u_out = std::move(u);
  return nodes;
}

struct RadialResult {
  double energy;
  std::vector<double> u; // normalized: int u^2 dx = 1
  double h;
  double tail;
};

// Outward solution up to the outer classical turning point, inward solution
// (started from zero at x_max) beyond it, joined continuously.
std::vector<double> match_eigenfunction(const RadialProblem &pr,
                                        double energy) {
  const double h = pr.x_max / pr.steps;
  const double h12 = h * h / 12.0;
  auto q = [&](int i) { return potential(pr, i * h) - energy; };
  int turn = pr.steps / 2;
  for (int i = pr.steps - 1; i > 1; --i) {
    if (q(i) <= 0.0) {
      turn = i;
      break;
    }
  }
  turn = std::clamp(turn, pr.steps / 10, (9 * pr.steps) / 10);

  std::vector<double> u;
  integrate_outward(pr, energy, &u);

  std::vector<double> in(u.size(), 0.0);
  const auto n = static_cast<std::size_t>(pr.steps);
  in[n] = 0.0;
  in[n - 1] = 1e-200;
  for (std::size_t i = n - 1; i > static_cast<std::size_t>(turn); --i) {
    in[i - 1] = (2.0 * in[i] * (1.0 + 5.0 * h12 * q(static_cast<int>(i))) -
                 in[i + 1] * (1.0 - h12 * q(static_cast<int>(i + 1)))) /
                (1.0 - h12 * q(static_cast<int>(i - 1)));
    if (std::abs(in[i - 1]) > 1e100) {
      for (std::size_t k = i - 1; k <= n; ++k)
        in[k] *= 1e-100;
    }
  }
  const auto m = static_cast<std::size_t>(turn);
  const double ratio = u[m] / in[m];
  for (std::size_t i = m + 1; i <= n; ++i)
    u[i] = in[i] * ratio;
  return u;
}

RadialResult solve_radial(const RadialProblem &pr, int n_r, double e_lo,
                          double e_hi) {
  if (integrate_outward(pr, e_hi, nullptr) <= n_r) {
    // Too few nodes even at the top of the bracket: the domain is too short.
    std::ostringstream msg;
    msg << "domain [0, " << pr.x_max << "] cannot hold radial state n_r="
        << n_r << "; increase the cutoff";
    throw Error(ErrorKind::cutoff, msg.str());
  }
  if (integrate_outward(pr, e_lo, nullptr) > n_r) {
    std::ostringstream msg;
    msg << "energy bracket [" << e_lo << ", " << e_hi
        << "] does not isolate radial state n_r=" << n_r;
    throw Error(ErrorKind::convergence, msg.str());
  }
  for (int it = 0; it < 200 && e_hi - e_lo > 1e-15 * std::abs(e_lo); ++it) {
    const double mid = 0.5 * (e_lo + e_hi);
    if (integrate_outward(pr, mid, nullptr) > n_r)
      e_hi = mid;
    else
      e_lo = mid;
  }
  RadialResult res;
  res.energy = 0.5 * (e_lo + e_hi);
  res.h = pr.x_max / pr.steps;
  res.u = match_eigenfunction(pr, res.energy);

  double norm = 0.0;
  for (double v : res.u)
    norm += v * v;
  norm = std::sqrt(norm * res.h);
  double peak = 0.0;
  for (auto &v : res.u) {
    v /= norm;
    if (std::abs(v) > std::abs(peak))
      peak = v;
  }
  if (peak < 0.0)
    for (auto &v : res.u)
      v = -v;

  // Largest |u| over the last tenth of the domain, relative to the peak.
  double tail = 0.0;
  for (auto i = static_cast<std::size_t>(0.9 * pr.steps); i < res.u.size();
       ++i)
    tail = std::max(tail, std::abs(res.u[i]));
  res.tail = tail / std::abs(peak);
  return res;
}

std::vector<std::pair<double, double>> sample_k(const RadialResult &res,
                                                int l) {
  // K = u / x, thinned to at most ~2000 samples.
  std::vector<std::pair<double, double>> out;
  const std::size_t stride = std::max<std::size_t>(1, res.u.size() / 2000);
  for (std::size_t i = 0; i < res.u.size(); i += stride) {
    const double x = i * res.h;
    out.emplace_back(x, i == 0 ? (l == 0 ? res.u[1] / res.h : 0.0)
                               : res.u[i] / x);
  }
  return out;
}

} // namespace

EigenSolution solve_radial_coulomb(double z, int j, int n_r,
                                   const RadialOptions &options) {
  if (j < 1)
    throw Error(ErrorKind::invalid_argument, "j must be >= 1");
  if (n_r < 0)
    throw Error(ErrorKind::invalid_argument, "n_r must be >= 0");
  if (!(z > 0.0))
    throw Error(ErrorKind::invalid_argument, "Z must be positive");
  const int n = n_r + j + 1;
  // Decay rate of the bound state is Z/n.
  const double decay = z / n;
  RadialProblem pr{j, z, 0.0,
                   options.kappa_max.value_or((40.0 + 4.0 * n) / decay),
                   options.steps};
  // The effective potential is bounded below by -Z^2/(j(j+1)).
  const double e_lo = -z * z / (j * (j + 1.0)) - 1.0;
  const auto res = solve_radial(pr, n_r, e_lo, 0.0);
  if (res.tail > options.max_tail) {
    std::ostringstream msg;
    msg << "kappa_max = " << pr.x_max << " too small: eigenfunction tail "
        << res.tail << " exceeds " << options.max_tail;
    throw Error(ErrorKind::cutoff, msg.str());
  }
  EigenSolution sol;
  sol.kind = EigenKind::radial;
  sol.eigenvalue = res.energy;
  sol.quantum_numbers = {n_r, j, 0, 1};
  sol.samples = sample_k(res, j);
  return sol;
}

double solve_gamma(int n_r, int j) {
  if (j < 1 || n_r < 0)
    throw Error(ErrorKind::invalid_argument, "need j >= 1 and n_r >= 0");
  auto g = [&](double gamma) {
    return solve_radial_coulomb(gamma, j, n_r).eigenvalue + gamma;
  };
  const double lo = 1.0;
  const double hi = 2.0 * (n_r + j + 2) * (n_r + j + 2);
  const double g_lo = g(lo), g_hi = g(hi);
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    std::ostringstream msg;
    msg << "gamma bracket [" << lo << ", " << hi
        << "] has no sign change: g = (" << g_lo << ", " << g_hi << ")";
    throw Error(ErrorKind::numeric, msg.str());
  }
  std::uintmax_t iterations = 100;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(48),
      iterations);
  return 0.5 * (root.first + root.second);
}

namespace {

struct OscillatorSolve {
  double varpi;
  RadialResult state;
  int l;
};

// 1/2 [-Laplacian + varpi^2 r^2] psi = varpi^2 psi with sigma_r = 1.
OscillatorSolve solve_oscillator(int n) {
  if (n < 0)
    throw Error(ErrorKind::invalid_argument, "n must be >= 0");
  const int l = n % 2;
  const int n_r = n / 2;
  auto level = [&](double varpi) {
    RadialProblem pr{l, 0.0, varpi * varpi,
                     std::sqrt(2.0 * (45.0 + 2.0 * n) / varpi), 16000};
    // -u'' + V u = E u with E = 2 * (operator eigenvalue).
    return solve_radial(pr, n_r, 0.0, 2.0 * varpi * (2.0 * n + 4.0) + 10.0);
  };
  auto g = [&](double varpi) {
    return 0.5 * level(varpi).energy - varpi * varpi;
  };
  const double lo = 0.25, hi = 2.0 * (n + 2);
  const double g_lo = g(lo), g_hi = g(hi);
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    std::ostringstream msg;
    msg << "oscillator bracket [" << lo << ", " << hi << "] has no sign change";
    throw Error(ErrorKind::numeric, msg.str());
  }
  std::uintmax_t iterations = 100;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(48),
      iterations);
  const double varpi = 0.5 * (root.first + root.second);
  auto state = level(varpi);
  if (state.tail > 1e-10)
    throw Error(ErrorKind::cutoff, "oscillator domain too small");
  return {varpi, std::move(state), l};
}

} // namespace

double ho_baseline(int n) { return solve_oscillator(n).varpi; }

EigenSolution ho_state(int n) {
  auto solved = solve_oscillator(n);
  EigenSolution sol;
  sol.kind = EigenKind::oscillator;
  sol.eigenvalue = solved.varpi;
  sol.quantum_numbers = {n / 2, solved.l, 0, 0};
  sol.samples = sample_k(solved.state, solved.l);
  return sol;
}

OscillatorSpreads ho_ground_spreads(double a) {
  if (!(a > 0.0))
    throw Error(ErrorKind::invalid_argument, "a must be positive");
  const auto solved = solve_oscillator(0);
  const auto &u = solved.state.u;
  const double h = solved.state.h;
  // Trapezoid sums; u(0) = 0 and u'(0) from a one-sided difference.
  const double du0 = (4.0 * u[1] - u[2]) / (2 * h);
  double r2 = 0.0, grad2 = 0.5 * du0 * du0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double x = i * h;
    r2 += x * x * u[i] * u[i];
    const double du = (u[i + 1] - u[i - 1]) / (2 * h);
    grad2 += du * du;
  }
  r2 *= h;
  grad2 *= h;
  // The Gaussian width of the solved state is b = 1/sqrt(varpi); rescale to a.
  const double b = 1.0 / std::sqrt(solved.varpi);
  return {std::sqrt(r2) * a / b, std::sqrt(grad2) * b / a};
}

// ---------------------------------------------------------------------------
// Residual of the full variational equation

double pde_residual(const HelicityAmplitudes &amps, double gamma_value,
                    int lambda, const MomentumGrid &grid, Exec exec) {
  if (lambda != 1 && lambda != -1)
    throw Error(ErrorKind::invalid_argument, "lambda must be +1 or -1");
  const Helicity h = lambda > 0 ? Helicity::plus : Helicity::minus;
  const auto &f = amps.component(h);
  if (f.is_zero())
    return 0.0;
  const double norm = norm_squared(amps, grid, exec);
  const double dp = delta_p(amps, grid, exec);
  // Unit norm in kappa: int d^3kappa/kappa |g|^2 = norm / dp^2.
  const double scale = dp / std::sqrt(norm);

  auto first = [&](const SphericalPoint &p) { return f.derivatives(p); };

  const double integral = reduce_sum(exec, grid.size(), [&](std::size_t i) {
    const auto node = grid.node(i);
    const auto &p = node.point;
    const double kappa = p.k / dp;
    const double st = std::sin(p.theta), ct = std::cos(p.theta);

    const cplx g = scale * f(p);
    const auto d = first(p);
    const double hk = std::min(1e-4 * std::max(p.k, 1.0), 0.5 * p.k);
    const double ha = 1e-4;
    const auto kp = first({p.k + hk, p.theta, p.phi});
    const auto km = first({p.k - hk, p.theta, p.phi});
    const auto tp = first({p.k, p.theta + ha, p.phi});
    const auto tm = first({p.k, p.theta - ha, p.phi});
    const auto pp = first({p.k, p.theta, p.phi + ha});
    const auto pm = first({p.k, p.theta, p.phi - ha});

    // d/dkappa = dp d/dk
    const cplx g_k = scale * dp * d.dk;
    const cplx g_kk = scale * dp * dp * (kp.dk - km.dk) / (2 * hk);
    const cplx g_t = scale * d.dtheta;
    const cplx g_tt = scale * (tp.dtheta - tm.dtheta) / (2 * ha);
    const cplx g_p = scale * d.dphi;
    const cplx g_pp = scale * (pp.dphi - pm.dphi) / (2 * ha);

    const double k2 = kappa * kappa;
    const cplx residual =
        -g_kk - 2.0 / kappa * g_k - (g_tt + ct / st * g_t) / k2 +
        (-g_pp + g + 2.0 * kI * static_cast<double>(lambda) * ct * g_p) /
            (k2 * st * st) -
        2.0 * gamma_value / kappa * g + gamma_value * g;
    require_finite(residual, p, "variational residual");
    // kappa^2 dkappa = k^2 dk / dp^3
    return node.weight * p.k * p.k / (dp * dp * dp) * std::norm(residual);
  });
  return std::sqrt(integral);
}

} // namespace photon_ur
