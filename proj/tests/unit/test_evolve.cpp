#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "inls/diagnostics.hpp"
#include "inls/error.hpp"
#include "inls/evolve.hpp"
#include "oracles.hpp"

using namespace inls;
using doctest::Approx;

namespace {

const ModelParams& ref() {
  static const ModelParams p = derive_params(3, 0.5, 0.6);
  return p;
}

// free Schrodinger evolution of e^{-r^2/w^2}
complex free_gaussian(double r, double w, double t) {
  const complex d(w * w, 4.0 * t);
  return std::pow(complex(1.0, 4.0 * t / (w * w)), -1.5) * std::exp(-r * r / d);
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

double l2_diff(const Field& a, const Field& b) {
  Field d = a;
  for (std::size_t j = 0; j < d.values.size(); ++j) d.values[j] -= b.values[j];
  return std::sqrt(lp_integral(d, 2.0));
}

EvolutionConfig fixed_step(double dt, double t_end) {
  EvolutionConfig c;
  c.dt0 = dt;
  c.dt_max = dt;
  c.growth = 1.0;
  c.cfl = 1e12;
  c.t_end = t_end;
  c.record_every = 1'000'000;
  c.grad_ceiling = 1e12;
  return c;
}

}  // namespace

TEST_CASE("nonlinear step") {
  const auto g = Geometry::radial(3, 8.0, 300, 3.0);
  const Field u = make_field(g, ref(), GaussianProfile{2.0, 1.0, {0, 0, 0}});
  CHECK(max_diff(nonlinear_phase_step(u, 0.0), u) == 0.0);
  const Field v = nonlinear_phase_step(u, 0.37);
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    CHECK(std::abs(v.values[j]) == Approx(std::abs(u.values[j])).epsilon(1e-15));
    const double r = g.radius()[j];
    const double phase = 0.37 * std::pow(r, -0.5) * std::pow(std::abs(u.values[j]), 1.2);
    CHECK(std::abs(v.values[j] - u.values[j] * std::polar(1.0, phase)) < 1e-14 * std::abs(u.values[j]) + 1e-300);
  }
  CHECK(max_diff(nonlinear_phase_step(v, -0.37), u) < 1e-14);
}

TEST_CASE("kinetic step on the cartesian grid") {
  const auto g = Geometry::cartesian3d(8.0, 64);
  Field c = zero_field(g, ref());
  std::fill(c.values.begin(), c.values.end(), complex(0.3, -0.2));
  CHECK(max_diff(kinetic_step(c, 0.5), c) < 1e-14);

  const Field u = make_field(g, ref(), GaussianProfile{1.0, 1.0, {0, 0, 0}});
  const Field v = kinetic_step(u, 0.1);
  double err = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    err = std::max(err, std::abs(v.values[j] - free_gaussian(g.radius()[j], 1.0, 0.1)));
  }
  CHECK(err < 1e-6);
  CHECK(std::abs(lp_integral(v, 2.0) - lp_integral(u, 2.0)) / lp_integral(u, 2.0) < 1e-12);
  CHECK(max_diff(kinetic_step(v, -0.1), u) < 1e-13);
}

TEST_CASE("kinetic step on radial meshes") {
  const auto g = Geometry::radial(3, 12.0, 3000);
  const Field u = make_field(g, ref(), GaussianProfile{1.0, 1.0, {0, 0, 0}});
  auto advance = [&](int steps) {
    Field v = u;
    for (int k = 0; k < steps; ++k) v = kinetic_step(v, 0.1 / steps);
    return v;
  };
  const Field fine = advance(400);
  double err = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    err = std::max(err, std::abs(fine.values[j] - free_gaussian(g.radius()[j], 1.0, 0.1)));
  }
  CHECK(err < 1e-4);
  // Crank-Nicolson: second order in dt at fixed mesh
  const double e1 = l2_diff(advance(25), fine), e2 = l2_diff(advance(50), fine);
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
  CHECK(std::abs(lp_integral(fine, 2.0) - lp_integral(u, 2.0)) / lp_integral(u, 2.0) < 1e-12);
  CHECK(max_diff(kinetic_step(kinetic_step(u, 0.01), -0.01), u) < 1e-13);
}

TEST_CASE("zero field run") {
  const auto g = Geometry::radial(3, 10.0, 200);
  EvolutionConfig c;
  c.t_end = 0.1;
  c.record_every = 5;
  const auto tr = evolve_run(zero_field(g, ref()), c);
  CHECK(tr.termination == Termination::horizon_reached);
  CHECK(tr.t_last == 0.1);
  for (const auto& r : tr.records) {
    const auto v = record_values(r);
    for (std::size_t k = 2; k < v.size(); ++k) {
      if (record_columns()[k] == "window_R") continue;
      CHECK(v[k] == 0.0);
    }
  }
}

TEST_CASE("small amplitude conservation") {
  const auto g = Geometry::radial(3, 12.0, 800, 3.0);
  const Field u = make_field(g, ref(), GaussianProfile{0.5, 1.0, {0, 0, 0}});
  EvolutionConfig c;
  c.dt0 = 1e-4;
  c.dt_max = 1e-3;
  c.t_end = 0.5;
  c.record_every = 20;
  const auto tr = evolve_run(u, c);
  CHECK(tr.termination == Termination::horizon_reached);
  const double M0 = tr.records.front().mass, E0 = tr.records.front().energy;
  for (const auto& r : tr.records) {
    CHECK(std::abs(r.mass - M0) / M0 < 1e-12);
    CHECK(std::abs(r.energy - E0) / std::abs(E0) < 1e-4);
  }
  CHECK(tr.records.back().t == 0.5);
}

TEST_CASE("strang splitting is second order") {
  // short horizon so that k_max^2 dt stays small on the coarse mesh
  const auto g = Geometry::radial(3, 10.0, 100);
  const Field u = make_field(g, ref(), GaussianProfile{1.5, 1.0, {0, 0, 0}});
  const double T = 0.005;
  const Field reference = evolve_run(u, fixed_step(T / 1280, T)).final_state;
  auto err = [&](int k) { return l2_diff(evolve_run(u, fixed_step(T / k, T)).final_state, reference); };
  const double e1 = err(10), e2 = err(20), e3 = err(40);
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.05));
  CHECK(e2 / e3 == Approx(4.0).epsilon(0.05));
}

TEST_CASE("cartesian run keeps mass") {
  const auto g = Geometry::cartesian3d(6.0, 24);
  const Field u = make_field(g, ref(), GaussianProfile{1.0, 1.2, {0.5, 0, 0}});
  EvolutionConfig c;
  c.dt0 = 1e-3;
  c.dt_max = 5e-3;
  c.t_end = 0.05;
  c.record_every = 2;
  const auto tr = evolve_run(u, c);
  CHECK(tr.termination == Termination::horizon_reached);
  for (const auto& r : tr.records) CHECK(std::abs(r.mass - tr.records.front().mass) < 1e-12 * r.mass);
  CHECK(std::isfinite(tr.records.back().hdot_sc));
}

TEST_CASE("blow-up run: step control and detection") {
  const auto g = Geometry::radial(3, 10.0, 500, 6.0);
  const Field u = make_field(g, ref(), GaussianProfile{6.0, 1.0, {0, 0, 0}});
  EvolutionConfig c;
  c.dt0 = 1e-6;
  c.t_end = 1.0;
  c.record_every = 1;
  c.grad_ceiling = 20.0 * std::sqrt(gradient_squared(u));
  const auto tr = evolve_run(u, c);
  REQUIRE(tr.termination == Termination::blowup_detected);
  CHECK_FALSE(tr.dt_floor_hit);
  CHECK(tr.records.back().grad_l2 >= c.grad_ceiling);
  CHECK(tr.t_last < 0.2);
  // once |grad u| passes a tenth of the ceiling the step never grows
  bool monotone = false;
  double prev = 1e300;
  for (std::size_t k = 1; k < tr.records.size(); ++k) {
    const auto& r = tr.records[k];
    if (monotone) {
      CHECK(r.dt <= prev);
    }
    if (r.grad_l2 >= c.grad_ceiling / 10.0) monotone = true;
    prev = r.dt;
  }
  CHECK(tr.records.front().energy < 0.0);
}

TEST_CASE("dt floor ends the run") {
  const auto g = Geometry::radial(3, 10.0, 300, 6.0);
  const Field u = make_field(g, ref(), GaussianProfile{6.0, 1.0, {0, 0, 0}});
  EvolutionConfig c;
  c.dt0 = 1e-6;
  c.dt_floor = 1e-7;
  c.t_end = 1.0;
  c.grad_ceiling = 1e9;
  const auto tr = evolve_run(u, c);
  CHECK(tr.termination == Termination::blowup_detected);
  CHECK(tr.dt_floor_hit);
  CHECK(std::find(tr.log.begin(), tr.log.end(), "time step fell below dt_floor") != tr.log.end());
}

TEST_CASE("snapshots land exactly") {
  const auto g = Geometry::radial(3, 10.0, 200);
  const Field u = make_field(g, ref(), GaussianProfile{1.0, 1.0, {0, 0, 0}});
  EvolutionConfig c;
  c.dt0 = 3e-3;
  c.dt_max = 7e-3;
  c.t_end = 0.1;
  c.snapshot_times = {0.0, 0.0123, 0.05};
  c.snapshot_every = 0.02;
  const auto tr = evolve_run(u, c);
  std::vector<double> times;
  for (const auto& s : tr.snapshots) times.push_back(s.time);
  const std::vector<double> expected{0.0, 0.0123, 0.02, 0.04, 0.05, 0.06, 0.08, 0.1};
  REQUIRE(times.size() == expected.size());
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(times[k] == Approx(expected[k]).epsilon(1e-15));
  for (const auto& s : tr.snapshots) CHECK(s.field.time == s.time);
}

TEST_CASE("virial derivatives match finite differences") {
  const auto g = Geometry::radial(3, 12.0, 1000, 3.0);
  Field u = make_field(g, ref(), GaussianProfile{1.5, 1.0, {0, 0, 0}});
  EvolutionConfig c = fixed_step(2e-4, 0.1);
  c.record_every = 5;
  c.virial_R = 1.0;
  const auto tr = evolve_run(u, c);
  const auto& rec = tr.records;
  double zp_scale = 0.0, zpp_scale = 0.0;
  for (const auto& r : rec) {
    zp_scale = std::max(zp_scale, std::abs(r.zp_R));
    zpp_scale = std::max(zpp_scale, std::abs(r.zpp_R));
  }
  REQUIRE(zp_scale > 0.0);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    const double h = rec[k + 1].t - rec[k - 1].t;
    e1 = std::max(e1, std::abs((rec[k + 1].z_R - rec[k - 1].z_R) / h - rec[k].zp_R));
    e2 = std::max(e2, std::abs((rec[k + 1].zp_R - rec[k - 1].zp_R) / h - rec[k].zpp_R));
  }
  CHECK(e1 / zp_scale < 1e-3);
  CHECK(e2 / zpp_scale < 1e-2);
}

TEST_CASE("config validation") {
  auto rejects = [](auto mutate, const std::string& needle) {
    EvolutionConfig c;
    mutate(c);
    try {
      validate(c);
      return false;
    } catch (const InvalidArgument& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
  };
  CHECK_NOTHROW(validate(EvolutionConfig{}));
  CHECK(rejects([](auto& c) { c.dt0 = 0.0; }, "dt0"));
  CHECK(rejects([](auto& c) { c.dt_max = 1e-6; }, "dt_max"));
  CHECK(rejects([](auto& c) { c.cfl = -1.0; }, "cfl"));
  CHECK(rejects([](auto& c) { c.growth = 0.5; }, "growth"));
  CHECK(rejects([](auto& c) { c.t_end = 0.0; }, "t_end"));
  CHECK(rejects([](auto& c) { c.record_every = 0; }, "record_every"));
  CHECK(rejects([](auto& c) { c.snapshot_times = {2.0}; }, "snapshot"));
  CHECK(rejects([](auto& c) { c.window_c1 = 0.0; }, "window_c1"));
  CHECK(rejects([](auto& c) { c.dt_floor = std::nan(""); }, "dt_floor"));
  CHECK(scheme_from_string(to_string(Scheme::strang)) == Scheme::strang);
  CHECK_THROWS_AS(scheme_from_string("rk4"), InvalidArgument);

  const auto g = Geometry::radial(3, 10.0, 100);
  const Field u = make_field(g, ref(), GaussianProfile{1.0, 1.0, {0, 0, 0}});
  EvolutionConfig c;
  c.grad_ceiling = 0.5;
  CHECK_THROWS_AS(evolve_run(u, c), InvalidArgument);
}
