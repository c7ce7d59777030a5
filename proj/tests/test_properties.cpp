#include "catch_amalgamated.hpp"

#include <cstdlib>
#include <cstring>
#include <random>

#include "photon_ur/field_synthesis.hpp"
#include "photon_ur/functionals.hpp"
#include "photon_ur/variational.hpp"
#include "support.hpp"

using namespace photon_ur;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

HelicityComponent conjugated(const HelicityComponent &f) {
  HelicityComponent out;
  out.value = [v = f.value](const SphericalPoint &p) { return std::conj(v(p)); };
  out.partials = [d = f.partials](const SphericalPoint &p) {
    const auto s = d(p);
    return SphericalPartials{std::conj(s.dk), std::conj(s.dtheta),
                             std::conj(s.dphi)};
  };
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("uncertainty product never falls below 4", "[property]") {
  std::mt19937_64 rng(21);
  const auto grid = build_grid(64, 48, 32, 1.0);
  for (int i = 0; i < 10; ++i) {
    const auto amps = testing::random_amplitudes(rng);
    CHECK(gamma(amps, grid, PolarizationFrame{}).gamma >= 4.0 - 1e-4);
  }
}

TEST_CASE("position spread is gauge invariant", "[property]") {
  std::mt19937_64 rng(22);
  const auto grid = build_grid(64, 48, 32, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    const auto amps = testing::random_amplitudes(rng);
    const double c1 = u(rng), c2 = u(rng);
    PhaseFunction phase;
    phase.value = [c1, c2](const Vec3 &k) {
      return c1 * k.z() / k.norm() + c2 * std::sin(k.x());
    };
    phase.gradient = [c1, c2](const Vec3 &k) {
      const double n = k.norm();
      Vec3 g = -c1 * k.z() / (n * n * n) * k;
      g.z() += c1 / n;
      g.x() += c2 * std::cos(k.x());
      return g;
    };
    const auto base = delta_r_cartesian(amps, grid, PolarizationFrame{});
    const auto [g_amps, g_frame] =
        gauge_transform(amps, PolarizationFrame{}, phase);
    CHECK_THAT(delta_r_cartesian(g_amps, grid, g_frame).value,
               WithinRel(base.value, 1e-10));
    CHECK_THAT(delta_p(g_amps, grid), WithinRel(delta_p(amps, grid), 1e-12));
  }
}

TEST_CASE("helicity mirror f_- = conj f_+ preserves the spreads",
          "[property]") {
  std::mt19937_64 rng(23);
  const auto grid = build_grid(64, 48, 32, 1.0);
  for (int i = 0; i < 3; ++i) {
    HelicityAmplitudes plus_only;
    plus_only.plus = testing::random_term(rng, 1.0).component();
    HelicityAmplitudes minus_only;
    minus_only.minus = conjugated(plus_only.plus);
    const auto a = gamma(plus_only, grid, PolarizationFrame{});
    const auto b = gamma(minus_only, grid, PolarizationFrame{});
    CHECK_THAT(b.delta_r, WithinRel(a.delta_r, 1e-12));
    CHECK_THAT(b.delta_p, WithinRel(a.delta_p, 1e-12));
    CHECK_THAT(delta_r_spherical(minus_only, grid).value,
               WithinRel(a.delta_r, 1e-8));
  }
}

TEST_CASE("spreads scale with the state size", "[property]") {
  std::mt19937_64 rng(24);
  const auto term = testing::random_term(rng, 1.0);
  for (double a : {0.25, 3.0}) {
    auto scaled_term = term;
    scaled_term.a = a;
    HelicityAmplitudes base, scaled;
    base.plus = term.component();
    scaled.plus = scaled_term.component();
    const auto r1 = gamma(base, build_grid(64, 48, 32, 1.0), PolarizationFrame{});
    const auto ra =
        gamma(scaled, build_grid(64, 48, 32, 1.0 / a), PolarizationFrame{});
    CHECK_THAT(ra.delta_r, WithinRel(a * r1.delta_r, 1e-10));
    CHECK_THAT(ra.delta_p, WithinRel(r1.delta_p / a, 1e-10));
    CHECK_THAT(ra.gamma, WithinRel(r1.gamma, 1e-10));
  }
}

TEST_CASE("serial and parallel kernels agree bit for bit", "[property]") {
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
#endif
  std::mt19937_64 rng(25);
  const auto amps = testing::random_amplitudes(rng);
  const auto grid = build_grid(24, 16, 12, 1.0);
  const PolarizationFrame frame;
  CHECK(same_bits(norm_squared(amps, grid, Exec::serial),
                  norm_squared(amps, grid, Exec::parallel)));
  const Vec3 ms = mean_momentum(amps, grid, Exec::serial);
  const Vec3 mp = mean_momentum(amps, grid, Exec::parallel);
  for (int i = 0; i < 3; ++i)
    CHECK(same_bits(ms[i], mp[i]));
  CHECK(same_bits(delta_r_cartesian(amps, grid, frame, Exec::serial).value,
                  delta_r_cartesian(amps, grid, frame, Exec::parallel).value));
  CHECK(same_bits(delta_r_spherical(amps, grid, Exec::serial).value,
                  delta_r_spherical(amps, grid, Exec::parallel).value));
  CHECK(same_bits(delta_p(amps, grid, Exec::serial),
                  delta_p(amps, grid, Exec::parallel)));
  CHECK(same_bits(pde_residual(amps, 4.0, 1, grid, Exec::serial),
                  pde_residual(amps, 4.0, 1, grid, Exec::parallel)));
  const auto box = uniform_box(2.0, 3);
  const auto fs = synthesize_field(amps, grid, frame, box, 0.3, Exec::serial);
  const auto fp = synthesize_field(amps, grid, frame, box, 0.3, Exec::parallel);
  for (std::size_t i = 0; i < fs.values.size(); ++i)
    for (int c = 0; c < 3; ++c) {
      CHECK(same_bits(fs.values[i][c].real(), fp.values[i][c].real()));
      CHECK(same_bits(fs.values[i][c].imag(), fp.values[i][c].imag()));
    }
#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif
}

TEST_CASE("thread cap honours PHOTON_UR_THREADS", "[property]") {
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  ::setenv("PHOTON_UR_THREADS", "2", 1);
  CHECK(max_threads() == 2);
  ::setenv("PHOTON_UR_THREADS", "16", 1);
  CHECK(max_threads() == 4);
  ::setenv("PHOTON_UR_THREADS", "zero", 1);
  CHECK(max_threads() == 4);
  ::unsetenv("PHOTON_UR_THREADS");
  omp_set_num_threads(saved);
#else
  CHECK(max_threads() == 1);
#endif
}

TEST_CASE("pairwise sum is exact on representable data", "[property]") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("errors inside parallel kernels reach the caller", "[property]") {
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
#endif
  HelicityAmplitudes amps;
  amps.plus.value = [](const SphericalPoint &p) {
    return p.k > 1.0 ? cplx(std::nan("")) : cplx(1.0);
  };
  const auto grid = build_grid(16, 8, 8, 1.0);
  std::string serial, parallel;
  try {
    norm_squared(amps, grid, Exec::serial);
  } catch (const Error &e) {
    serial = e.what();
  }
  try {
    norm_squared(amps, grid, Exec::parallel);
  } catch (const Error &e) {
    parallel = e.what();
  }
  CHECK_FALSE(serial.empty());
  CHECK(serial == parallel);
#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif
}

TEST_CASE("field energy is conserved in time", "[property][field]") {
  for (double a : {0.5, 1.0}) {
    const auto ball = spherical_cubature(40.0 * a, 200, 8, 8);
    const double e0 = total_energy(whittaker_field(Axis::z, a, ball, 0.0));
    for (double t : {0.5 * a, a})
      CHECK_THAT(total_energy(whittaker_field(Axis::z, a, ball, t)),
                 WithinRel(e0, 1e-3));
  }
}

TEST_CASE("energy density at t = 0 is spherically symmetric", "[property][field]") {
  std::mt19937_64 rng(26);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    for (double radius : {0.3, 1.0, 4.0}) {
      std::vector<double> rho;
      for (int i = 0; i < 20; ++i) {
        const Vec3 r = radius * Vec3{g(rng), g(rng), g(rng)}.normalized();
        rho.push_back(whittaker_field(axis, 1.0, r, 0.0).squaredNorm());
      }
      double mean = 0.0, var = 0.0;
      for (double v : rho)
        mean += v / rho.size();
      for (double v : rho)
        var += (v - mean) * (v - mean) / rho.size();
      CHECK(var / (mean * mean) < 1e-10);
      CHECK_THAT(mean, WithinRel(closed_form_energy(1.0, radius), 1e-12));
    }
  }
}

TEST_CASE("position spread is smallest at t = 0", "[property][field]") {
  const double a = 1.0;
  const auto ball = spherical_cubature(40.0 * a, 200, 8, 8);
  const double norm = total_energy(whittaker_field(Axis::z, a, ball, 0.0));
  const double r0 =
      real_space_delta_r(whittaker_field(Axis::z, a, ball, 0.0), norm);
  const double r1 =
      real_space_delta_r(whittaker_field(Axis::z, a, ball, a), norm);
  CHECK(r1 > r0 * (1.0 + 1e-3));
}

TEST_CASE("synthesis tracks the closed form out to |t| = 2a", "[property][field]") {
  const auto grid = build_grid(64, 96, 96, 1.0, RadialRule::truncated);
  const auto box = uniform_box(4.0, 3);
  const auto amps = saturating_amplitude(Axis::z, 1.0);
  for (double t : {-2.0, 2.0}) {
    const auto f = synthesize_field(amps, grid, PolarizationFrame{}, box, t);
    const auto w = whittaker_field(Axis::z, 1.0, box, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      worst = std::max(worst, (f.values[i] - w.values[i]).norm() /
                                  w.values[i].norm());
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("norm is homogeneous and additive over helicities", "[property]") {
  std::mt19937_64 rng(27);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto grid = build_grid(32, 24, 16, 1.0);
  for (int i = 0; i < 4; ++i) {
    HelicityAmplitudes plus, minus, both;
    plus.plus = both.plus = testing::random_term(rng, 1.0).component();
    minus.minus = both.minus = testing::random_term(rng, 0.7).component();
    const cplx c(g(rng), g(rng));
    CHECK_THAT(norm_squared(both.scaled(c), grid),
               WithinRel(std::norm(c) * norm_squared(both, grid), 1e-13));
    CHECK_THAT(norm_squared(both, grid),
               WithinRel(norm_squared(plus, grid) + norm_squared(minus, grid),
                         1e-13));
  }
}

TEST_CASE("norm is converged past the reference grid", "[property]") {
  const auto amps = saturating_amplitude(Axis::z, 1.0);
  const double ref = norm_squared(amps, build_grid(64, 48, 32, 1.0));
  const double fine = norm_squared(amps, build_grid(128, 96, 64, 1.0));
  CHECK(std::abs(fine - ref) < 1e-8);
}

TEST_CASE("azimuthally symmetric states have no transverse mean momentum",
          "[property]") {
  const auto grid = build_grid(32, 24, 16, 1.0);
  for (int m : {-2, 0, 1, 3}) {
    HelicityAmplitudes amps;
    amps.plus.value = [m](const SphericalPoint &p) {
      return p.k * std::sin(p.theta) * (1.0 + std::cos(p.theta)) *
             std::exp(-p.k) * std::exp(kI * (m * p.phi));
    };
    const Vec3 mean = mean_momentum(amps, grid);
    CHECK(std::abs(mean.x()) < 1e-13);
    CHECK(std::abs(mean.y()) < 1e-13);
    CHECK(mean.z() > 1e-3);
  }
}

TEST_CASE("angular spectrum is symmetric under lambda, m -> -lambda, -m",
          "[property]") {
  for (int m : {-2, -1, 0, 1, 2}) {
    const auto a = solve_angular(1, m, 4);
    const auto b = solve_angular(-1, -m, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i].eigenvalue == b[i].eigenvalue);
  }
}

TEST_CASE("radial levels scale as Z^2", "[property]") {
  for (int j = 1; j <= 2; ++j)
    for (int n_r = 0; n_r <= 1; ++n_r) {
      const double n = n_r + j + 1.0;
      for (double z : {2.0, 4.0, 8.0})
        CHECK_THAT(solve_radial_coulomb(z, j, n_r).eigenvalue / (z * z),
                   WithinRel(-1.0 / (n * n), 1e-8));
    }
}

TEST_CASE("radial levels are stable under step refinement", "[property]") {
  RadialOptions fine;
  fine.steps = 32000;
  for (int j = 1; j <= 2; ++j) {
    const double coarse = solve_radial_coulomb(1.0, j, 1).eigenvalue;
    CHECK(std::abs(solve_radial_coulomb(1.0, j, 1, fine).eigenvalue - coarse) <
          1e-8);
  }
}

TEST_CASE("variational minimum is attained by the closed form", "[property]") {
  const auto rep = gamma(saturating_amplitude(Axis::z, 1.0),
                         build_grid(64, 48, 32, 1.0), PolarizationFrame{});
  CHECK_THAT(rep.gamma, WithinAbs(solve_gamma(0, 1), 1e-4));
}
