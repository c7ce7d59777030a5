#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>

#include "photon_ur/field_synthesis.hpp"
#include "photon_ur/momentum_space.hpp"
#include "support.hpp"

using namespace photon_ur;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("grid weights integrate separable test functions", "[momentum]") {
  const auto grid = build_grid(64, 48, 32, 1.0);
  REQUIRE(grid.size() == 64u * 48u * 32u);
  double radial = 0.0, polar = 0.0, azimuth = 0.0;
  for (std::size_t i = 0; i < grid.k_nodes.size(); ++i)
    radial += grid.k_weights[i] * grid.k_nodes[i] * grid.k_nodes[i] *
              std::exp(-grid.k_nodes[i]);
  for (std::size_t i = 0; i < grid.theta_nodes.size(); ++i)
    polar += grid.theta_weights[i] * std::pow(std::cos(grid.theta_nodes[i]), 4);
  for (double w : grid.phi_weights)
    azimuth += w;
  CHECK_THAT(radial, WithinRel(2.0, 1e-10));
  CHECK_THAT(polar, WithinRel(0.4, 1e-12));
  CHECK_THAT(azimuth, WithinRel(2.0 * kPi, 1e-14));
}

TEST_CASE("truncated radial rule covers (0, 40 k_scale)", "[momentum]") {
  const auto grid = build_grid(64, 8, 8, 0.5, RadialRule::truncated);
  double length = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < grid.k_nodes.size(); ++i) {
    length += grid.k_weights[i];
    moment += grid.k_weights[i] * grid.k_nodes[i] * grid.k_nodes[i] *
              std::exp(-2.0 * grid.k_nodes[i]);
  }
  CHECK_THAT(length, WithinRel(20.0, 1e-13));
  CHECK_THAT(moment, WithinRel(0.25, 1e-12));
}

TEST_CASE("flattened node order is phi fastest, then theta, then k",
          "[momentum]") {
  const auto grid = build_grid(4, 5, 6, 1.0);
  const auto n = grid.node(1 * 5 * 6 + 2 * 6 + 3);
  CHECK(n.point.k == grid.k_nodes[1]);
  CHECK(n.point.theta == grid.theta_nodes[2]);
  CHECK(n.point.phi == grid.phi_nodes[3]);
  CHECK(n.weight ==
        grid.k_weights[1] * grid.theta_weights[2] * grid.phi_weights[3]);
  for (std::size_t i = 1; i < grid.theta_nodes.size(); ++i)
    CHECK(grid.theta_nodes[i] > grid.theta_nodes[i - 1]);
}

TEST_CASE("grid construction rejects bad resolutions", "[momentum]") {
  CHECK_THROWS_AS(build_grid(3, 48, 32, 1.0), Error);
  CHECK_THROWS_AS(build_grid(64, 48, 32, 0.0), Error);
  try {
    build_grid(64, 2, 32, 1.0);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("saturating family is normalized on the reference grid",
          "[momentum]") {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto grid = build_grid(64, 48, 32, 1.0 / a);
    for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
      const auto amps = saturating_amplitude(axis, a);
      CHECK_THAT(norm_squared(amps, grid), WithinAbs(1.0, 1e-8));
      CHECK(mean_momentum(amps, grid).norm() < 1e-12 / a);
    }
  }
}

TEST_CASE("norm agrees with an independent quadrature", "[momentum][oracle]") {
  std::mt19937_64 rng(7);
  const auto grid = build_grid(64, 48, 32, 1.0);
  for (int i = 0; i < 3; ++i) {
    const auto amps = testing::random_amplitudes(rng);
    CHECK_THAT(norm_squared(amps, grid),
               WithinRel(testing::oracle_norm(amps), 1e-9));
  }
}

TEST_CASE("mean momentum of a displaced state", "[momentum][oracle]") {
  HelicityAmplitudes amps;
  const Vec3 q{0.5, -0.3, 2.0};
  amps.plus.value = [q](const SphericalPoint &p) {
    return cplx(std::exp(-0.5 * (p.cartesian() - q).squaredNorm()));
  };
  const auto grid = build_grid(96, 64, 48, 2.0);
  const Vec3 mean = mean_momentum(amps, grid);
  auto dens = [&](const Vec3 &k) {
    return std::norm(testing::eval_at(amps.plus, k)) * k.norm();
  };
  const double norm = testing::oracle_integral(dens);
  for (int i = 0; i < 3; ++i) {
    const double expected =
        testing::oracle_integral([&](const Vec3 &k) { return dens(k) * k[i]; }) /
        norm;
    CHECK_THAT(mean[i], WithinAbs(expected, 1e-8));
  }
}

TEST_CASE("zero-norm state has no mean momentum", "[momentum]") {
  HelicityAmplitudes amps;
  amps.plus.value = [](const SphericalPoint &) { return cplx{}; };
  const auto grid = build_grid(8, 8, 8, 1.0);
  try {
    mean_momentum(amps, grid);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::undefined_mean);
  }
}

TEST_CASE("non-finite amplitude values name the node", "[momentum]") {
  HelicityAmplitudes amps;
  amps.plus.value = [](const SphericalPoint &p) {
    return p.k > 2.0 ? cplx(std::numeric_limits<double>::quiet_NaN())
                     : cplx(1.0);
  };
  const auto grid = build_grid(16, 8, 8, 1.0);
  try {
    norm_squared(amps, grid, Exec::serial);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::evaluation);
    CHECK_THAT(std::string(e.what()), ContainsSubstring("k="));
    CHECK_THAT(std::string(e.what()), ContainsSubstring("theta="));
  }
}

TEST_CASE("finite-difference partials match analytic ones", "[momentum]") {
  const auto amps = saturating_amplitude(Axis::x, 1.3);
  HelicityComponent numeric;
  numeric.value = amps.plus.value;
  for (const SphericalPoint p :
       {SphericalPoint{0.7, 1.1, 0.4}, SphericalPoint{2.5, 0.3, -2.0}}) {
    const auto exact = amps.plus.derivatives(p);
    const auto approx = numeric.derivatives(p);
    CHECK(std::abs(exact.dk - approx.dk) < 1e-9);
    CHECK(std::abs(exact.dtheta - approx.dtheta) < 1e-9);
    CHECK(std::abs(exact.dphi - approx.dphi) < 1e-9);
  }
}
