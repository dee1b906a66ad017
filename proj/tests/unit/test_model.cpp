#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "inls/checkpoint.hpp"
#include "inls/diagnostics.hpp"
#include "inls/error.hpp"
#include "inls/field.hpp"
#include "inls/params.hpp"
#include "oracles.hpp"

using namespace inls;
using doctest::Approx;

TEST_CASE("derive_params reference points") {
  const auto p = derive_params(3, 0.5, 0.6);
  CHECK(p.s_c == Approx(0.25).epsilon(1e-15));
  CHECK(p.sigma_c == Approx(2.4).epsilon(1e-15));
  CHECK(p.beta == Approx(0.4).epsilon(1e-15));
  CHECK(p.spacetime_exponent() == Approx(4.0 / 7.0).epsilon(1e-15));
  CHECK(p.regime_valid);

  const auto q = derive_params(3, 1.0, 1.0 / 3.0);
  CHECK(std::abs(q.s_c) < 1e-15);
  CHECK_FALSE(q.regime_valid);
  CHECK_FALSE(regime_violation(q).empty());

  const auto r = derive_params(4, 1.0, 0.4);
  CHECK(r.s_c == Approx(0.75));
  CHECK(r.sigma_c == Approx(3.2));
  CHECK(r.beta == Approx(0.4));
  CHECK(r.regime_valid);
}

TEST_CASE("derive_params rejects bad input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(derive_params(3, nan, 0.6), InvalidArgument);
  CHECK_THROWS_AS(derive_params(3, 0.5, std::numeric_limits<double>::infinity()), InvalidArgument);
  CHECK_THROWS_AS(derive_params(2, 0.5, 0.6), InvalidArgument);
  CHECK_THROWS_AS(derive_params(3, -0.5, 0.6), InvalidArgument);
}

TEST_CASE("regime lattice") {
  int valid = 0;
  for (int N = 3; N <= 6; ++N) {
    for (int i = 1; i <= 40; ++i) {
      for (int j = 1; j <= 40; ++j) {
        const double b = 2.0 * i / 41.0;
        const double sigma = 1.5 * (j + 0.37) / 41.0;
        const auto p = derive_params(N, b, sigma);
        const bool expect = b < std::min(N / 2.0, 2.0) && (2.0 - b) / N < sigma &&
                            sigma < std::min((2.0 - b) / (N - 2), 2.0 / N);
        CHECK(p.regime_valid == expect);
        if (!p.regime_valid) continue;
        ++valid;
        CHECK(p.s_c > 0.0);
        CHECK(p.s_c < 1.0);
        CHECK(p.sigma_c > 2.0);
        CHECK(p.beta > 0.0);
        CHECK(p.spacetime_exponent() > 0.0);
        CHECK(p.spacetime_exponent() < 1.0);
        CHECK(regime_violation(p).empty());
      }
    }
  }
  CHECK(valid > 100);
}

TEST_CASE("meshes avoid the origin") {
  for (double a : {0.0, 4.0}) {
    const auto g = Geometry::radial(3, 5.0, 64, a);
    CHECK(g.radius().front() > 0.0);
    CHECK(g.min_radius() > 0.0);
  }
  const auto g = Geometry::radial(3, 5.0, 10);
  CHECK(g.radius()[0] == Approx(0.25));
  CHECK(g.radius()[3] == Approx(1.75));
  const auto c = Geometry::cartesian3d(2.0, 8);
  double rmin = 1e300;
  for (double r : c.radius()) rmin = std::min(rmin, r);
  CHECK(rmin > 0.0);
  CHECK(rmin == Approx(std::sqrt(3.0) * c.spacing() / 2.0));
}

TEST_CASE("gaussian field closed forms") {
  const auto p = derive_params(3, 0.5, 0.6);
  const auto g = Geometry::radial(3, 10.0, 2000);
  const auto u = make_field(g, p, GaussianProfile{1.0, 1.0, {0, 0, 0}});
  CHECK(u.time == 0.0);
  CHECK(u.values.size() == g.size());
  CHECK(lp_integral(u, 2.0) == Approx(1.96870).epsilon(1e-5));
  CHECK(lp_integral(u, 2.0) == Approx(oracle::gaussian_mass(1.0, 1.0)).epsilon(1e-12));

  const auto z = make_field(g, p, GaussianProfile{0.0, 1.0, {0, 0, 0}});
  const auto me = mass_energy(z);
  CHECK(me.mass == 0.0);
  CHECK(me.energy == 0.0);
}

TEST_CASE("make_field errors") {
  const auto p = derive_params(3, 0.5, 0.6);
  const auto g = Geometry::radial(3, 10.0, 100);
  CHECK_THROWS_AS(make_field(g, p, GaussianProfile{1.0, 1.0, {0.5, 0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(make_field(g, p, GaussianProfile{1.0, 0.0, {0, 0, 0}}), InvalidArgument);
  const auto c = Geometry::cartesian3d(4.0, 16);
  CHECK_NOTHROW(make_field(c, p, GaussianProfile{1.0, 1.0, {0.5, 0, 0}}));
}

TEST_CASE("mass quadrature is second order") {
  // truncated ball so the outer endpoint term of the midpoint rule is present
  const auto p = derive_params(3, 0.5, 0.6);
  const double L = 1.5;
  const double exact = oracle::gaussian_ball_mass(L);
  std::vector<double> err;
  for (int n : {40, 80, 160, 320}) {
    const auto u = make_field(Geometry::radial(3, L, n), p, GaussianProfile{1.0, 1.0, {0, 0, 0}});
    err.push_back(std::abs(lp_integral(u, 2.0) - exact));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double ratio = err[i - 1] / err[i];
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("checkpoint round trip is lossless") {
  const auto p = derive_params(3, 0.5, 0.6);
  const auto g = Geometry::radial(3, 7.0, 50, 2.0);
  auto u = make_field(g, p, GaussianProfile{1.3, 0.7, {0, 0, 0}});
  for (std::size_t j = 0; j < u.values.size(); ++j) u.values[j] *= std::polar(1.0, 0.1 * j);
  u.time = 0.123456789012345678;
  const auto path = (std::filesystem::temp_directory_path() / "inls_test_model.chk").string();
  write_checkpoint(path, u, {{"note", "x"}});
  const auto cp = read_checkpoint(path);
  CHECK(cp.field.geometry == g);
  CHECK(cp.field.params == p);
  CHECK(cp.field.time == u.time);
  CHECK(cp.field.values == u.values);
  REQUIRE(cp.find("note"));
  CHECK(*cp.find("note") == "x");
  const auto v = make_field(g, p, CheckpointProfile{path});
  CHECK(v.values == u.values);
  CHECK_THROWS_AS(make_field(Geometry::radial(3, 7.0, 51, 2.0), p, CheckpointProfile{path}), InvalidArgument);
  std::remove(path.c_str());
}

TEST_CASE("field validity") {
  const auto p = derive_params(3, 0.5, 0.6);
  auto u = make_field(Geometry::radial(3, 5.0, 20), p, GaussianProfile{});
  CHECK(u.valid());
  u.values[3] = complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_FALSE(u.valid());
  CHECK_THROWS_AS(u.require_valid("test"), InvalidState);
}
