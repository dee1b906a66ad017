#include "inls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inls/diagnostics.hpp"
#include "inls/error.hpp"
#include "inls/fft.hpp"

namespace inls {

std::string to_string(Scheme) { return "strang"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "strang" || name == "strang-split") return Scheme::strang;
  throw InvalidArgument("unknown scheme '" + name + "' (expected strang)");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::horizon_reached: return "horizon-reached";
    case Termination::blowup_detected: return "blowup-detected";
    case Termination::invalid_state: return "invalid-state";
  }
  return "unknown";
}

void validate(const EvolutionConfig& c) {
  auto fail = [](const std::string& m) { throw InvalidArgument("evolution config: " + m); };
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(c.dt_floor)) fail("dt_floor must be > 0");
  if (!positive(c.dt0) || !(c.dt0 > c.dt_floor)) fail("dt0 must exceed dt_floor");
  if (!positive(c.dt_max) || c.dt_max < c.dt0) fail("dt_max must be >= dt0");
  if (!positive(c.cfl)) fail("cfl must be > 0");
  if (!(c.growth >= 1.0) || !std::isfinite(c.growth)) fail("growth must be >= 1");
  if (!(c.grad_ceiling >= 0.0)) fail("grad_ceiling must be >= 0 (0 selects the default)");
  if (!positive(c.t_end)) fail("t_end must be > 0");
  if (c.record_every < 1) fail("record_every must be >= 1");
  if (!(c.snapshot_every >= 0.0)) fail("snapshot_every must be >= 0");
  for (double t : c.snapshot_times) {
    if (!(t >= 0.0) || t > c.t_end) fail("snapshot times must lie in [0, t_end]");
  }
  if (!positive(c.virial_R)) fail("virial_R must be > 0");
  if (!(c.rho_R >= 0.0)) fail("rho_R must be >= 0");
  if (!(c.window_c1 > 0.0)) fail("window_c1 must be > 0");
  if (c.max_steps < 1) fail("max_steps must be >= 1");
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{"t",         "dt",    "mass", "energy", "grad_l2",  "l_sigma_c", "hdot_sc",
                                             "potential", "z_R",   "zp_R", "zpp_R",  "rho_R",    "window_R",  "window_int"};
  return cols;
}

std::vector<double> record_values(const DiagnosticRecord& r) {
  return {r.t,   r.dt,   r.mass,  r.energy, r.grad_l2,  r.l_sigma_c, r.hdot_sc, r.potential,
          r.z_R, r.zp_R, r.zpp_R, r.rho_R,  r.window_R, r.window_int};
}

double window_constant(const Field& u0, double c1) {
  const ModelParams& p = u0.params;
  const double m = norm(u0, NormKind::l2);
  if (m == 0.0) return 0.0;
  return c1 * std::max(m, std::pow(m, (2.0 * p.sigma + 2.0 - p.sigma * p.N) / p.b));
}

RecordContext record_context(const Field& u0, const EvolutionConfig& cfg) {
  RecordContext ctx;
  ctx.virial_R = cfg.virial_R;
  ctx.rho_R = cfg.rho_R > 0.0 ? cfg.rho_R : cfg.virial_R;
  ctx.window_c = window_constant(u0, cfg.window_c1);
  return ctx;
}

DiagnosticRecord make_record(const Field& u, double dt, const RecordContext& ctx) {
  const ModelParams& p = u.params;
  DiagnosticRecord r;
  r.t = u.time;
  r.dt = dt;
  r.mass = lp_integral(u, 2.0);
  const double G = gradient_squared(u);
  r.potential = potential_term(u);
  r.energy = 0.5 * G - r.potential / p.p();
  r.grad_l2 = std::sqrt(G);
  r.l_sigma_c = std::pow(lp_integral(u, p.sigma_c), 1.0 / p.sigma_c);
  r.hdot_sc = supports_hdot(u.geometry) ? hdot_norm(u, p.s_c) : std::numeric_limits<double>::quiet_NaN();
  const auto v = virial_quantities(u, ctx.virial_R, ctx.phi);
  r.z_R = v.z;
  r.zp_R = v.zp;
  r.zpp_R = v.zpp;
  const BallIntegrator mass(u, 2.0);
  r.rho_R = rho_seminorm(mass, p.s_c, u.geometry.extent(), std::min(ctx.rho_R, u.geometry.extent())).value;
  if (ctx.window_c > 0.0 && r.grad_l2 > 0.0) {
    r.window_R = ctx.window_c * std::pow(r.grad_l2, -p.beta);
    r.window_int = BallIntegrator(u, p.sigma_c).ball(r.window_R);
  }
  return r;
}

namespace {

// in-place substeps with reusable workspace
class Stepper {
 public:
  explicit Stepper(const Geometry& g, const ModelParams& p) : g_(g), p_(p) {
    const auto& r = g.radius();
    weight_.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) weight_[j] = std::pow(r[j], -p.b);
    if (g.is_radial()) {
      const std::size_t n = r.size();
      const auto& area = g.face_area();
      const auto& gap = g.face_gap();
      const auto& w = g.weight();
      diag_.resize(n);
      up_.resize(n);
      lo_.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double Wr = area[j] / gap[j];
        const double Wl = j > 0 ? area[j - 1] / gap[j - 1] : 0.0;
        diag_[j] = -(Wl + Wr) / w[j];
        up_[j] = j + 1 < n ? Wr / w[j] : 0.0;
        lo_[j] = j > 0 ? Wl / w[j] : 0.0;
      }
      rhs_.resize(n);
      cp_.resize(n);
      dp_.resize(n);
    } else {
      phase_.resize(static_cast<std::size_t>(g.resolution()));
    }
  }

  void nonlinear(std::vector<complex>& u, double dt) const {
    const double s = p_.sigma;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double ph = dt * weight_[j] * std::pow(std::norm(u[j]), s);
      u[j] *= complex(std::cos(ph), std::sin(ph));
    }
  }

  bool kinetic(std::vector<complex>& u, double dt) {
    if (g_.is_radial()) return crank_nicolson(u, dt);
    spectral(u, dt);
    return true;
  }

  // max(|grad u|^2 / M, |u|_inf^(4 sigma/(2-b)), max r^-b |u|^(2 sigma))
  double rate(const Field& u, double G, double M) const {
    double umax = 0.0, ph = 0.0;
    for (std::size_t j = 0; j < u.values.size(); ++j) {
      const double a2 = std::norm(u.values[j]);
      umax = std::max(umax, a2);
      ph = std::max(ph, weight_[j] * std::pow(a2, p_.sigma));
    }
    const double scale = std::pow(umax, 2.0 * p_.sigma / (2.0 - p_.b));
    return std::max({M > 0.0 ? G / M : 0.0, scale, ph});
  }

 private:
  bool crank_nicolson(std::vector<complex>& u, double dt) {
    const std::size_t n = u.size();
    const complex ih(0.0, 0.5 * dt);
    for (std::size_t j = 0; j < n; ++j) {
      complex Lu = diag_[j] * u[j];
      if (j + 1 < n) Lu += up_[j] * u[j + 1];
      if (j > 0) Lu += lo_[j] * u[j - 1];
      rhs_[j] = u[j] + ih * Lu;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const complex a = j > 0 ? -ih * lo_[j] : complex(0.0);
      const complex c = j + 1 < n ? -ih * up_[j] : complex(0.0);
      const complex den = 1.0 - ih * diag_[j] - (j > 0 ? a * cp_[j - 1] : complex(0.0));
      if (std::abs(den) == 0.0 || !std::isfinite(std::abs(den))) return false;
      cp_[j] = c / den;
      dp_[j] = (rhs_[j] - (j > 0 ? a * dp_[j - 1] : complex(0.0))) / den;
    }
    for (std::size_t j = n; j-- > 0;) u[j] = dp_[j] - (j + 1 < n ? cp_[j] * u[j + 1] : complex(0.0));
    return true;
  }

  void spectral(std::vector<complex>& u, double dt) {
    const int n = g_.resolution();
    const auto& k = g_.wavenumber();
    const double n3 = static_cast<double>(n) * n * n;
    for (int i = 0; i < n; ++i) phase_[i] = std::polar(1.0, -k[i] * k[i] * dt);
    const Fft3& fft = Fft3::get(n);
    fft.forward(u);
    std::size_t q = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const complex pij = phase_[i] * phase_[j] / n3;
        for (int l = 0; l < n; ++l, ++q) u[q] *= pij * phase_[l];
      }
    }
    fft.backward(u);
  }

  Geometry g_;
  ModelParams p_;
  std::vector<double> weight_;
  std::vector<double> diag_, up_, lo_;
  std::vector<complex> rhs_, cp_, dp_;
  std::vector<complex> phase_;
};

std::vector<double> snapshot_schedule(const EvolutionConfig& c) {
  std::vector<double> times = c.snapshot_times;
  if (c.snapshot_every > 0.0) {
    for (long k = 1;; ++k) {
      const double t = static_cast<double>(k) * c.snapshot_every;
      if (t > c.t_end) break;
      times.push_back(t);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

}  // namespace

Field nonlinear_phase_step(const Field& u, double dt) {
  u.require_valid("nonlinear_phase_step");
  Field out = u;
  Stepper(u.geometry, u.params).nonlinear(out.values, dt);
  return out;
}

Field kinetic_step(const Field& u, double dt) {
  u.require_valid("kinetic_step");
  Field out = u;
  Stepper s(u.geometry, u.params);
  if (!s.kinetic(out.values, dt)) throw InvalidState("kinetic_step: tridiagonal solve broke down");
  out.time = u.time;
  return out;
}

Trajectory evolve_run(const Field& u0, const EvolutionConfig& cfg) {
  validate(cfg);
  u0.require_valid("evolve_run");
  Trajectory traj;
  traj.params = u0.params;
  traj.geometry = u0.geometry;
  traj.config = cfg;
  traj.hdot_available = supports_hdot(u0.geometry);
  if (!traj.hdot_available) {
    traj.log.push_back("hdot_sc not computed: radial meshes with N != 3 have no transform path");
  }

  Field u = u0;
  u.time = 0.0;
  traj.initial_state = u;
  const RecordContext ctx = record_context(u, cfg);
  traj.window_c = ctx.window_c;
  Stepper stepper(u.geometry, u.params);

  const double M0 = lp_integral(u, 2.0);
  const double G0 = gradient_squared(u);
  const double g0 = std::sqrt(G0);
  double ceiling = cfg.grad_ceiling > 0.0 ? cfg.grad_ceiling : 1e3 * g0;
  if (ceiling == 0.0) ceiling = std::numeric_limits<double>::infinity();
  if (!(ceiling > g0)) {
    throw InvalidArgument("evolution config: grad_ceiling must exceed the initial gradient norm");
  }
  traj.grad_ceiling = ceiling;

  const std::vector<double> snaps = snapshot_schedule(cfg);
  std::size_t next_snap = 0;
  auto take_snapshots = [&]() {
    while (next_snap < snaps.size() && snaps[next_snap] <= u.time) {
      if (snaps[next_snap] == u.time) traj.snapshots.push_back({u.time, u});
      ++next_snap;
    }
  };

  traj.records.push_back(make_record(u, 0.0, ctx));
  const double E0 = traj.records.front().energy;
  take_snapshots();

  double dt_prev = cfg.dt0 / cfg.growth;
  double G = G0;
  bool recorded_last = true;
  bool monotone = false;
  int drift_decade = -7;
  auto check_drift = [&](const DiagnosticRecord& rec) {
    if (!(rec.grad_l2 > 10.0 * g0) || E0 == 0.0) return;
    const double drift = std::abs(rec.energy - E0) / std::abs(E0);
    if (!(drift >= std::pow(10.0, drift_decade))) return;
    while (drift >= std::pow(10.0, drift_decade + 1)) ++drift_decade;
    std::ostringstream os;
    os.precision(6);
    os << "energy drift " << drift << " at t = " << rec.t << " (|grad u| = " << rec.grad_l2 / g0
       << " x initial) exceeds 1e" << drift_decade;
    traj.log.push_back(os.str());
    ++drift_decade;
  };

  while (true) {
    if (u.time >= cfg.t_end) {
      traj.termination = Termination::horizon_reached;
      break;
    }
    if (traj.steps >= cfg.max_steps) {
      traj.termination = Termination::invalid_state;
      traj.log.push_back("step budget exhausted before t_end");
      break;
    }
    const double rate = stepper.rate(u, G, M0);
    double dt = std::min(dt_prev * cfg.growth, cfg.dt_max);
    if (rate > 0.0) dt = std::min(dt, cfg.cfl / rate);
    if (monotone) dt = std::min(dt, dt_prev);
    double event = cfg.t_end;
    if (next_snap < snaps.size()) event = std::min(event, snaps[next_snap]);
    bool landing = false;
    if (u.time + dt >= event) {
      dt = event - u.time;
      landing = true;
    }
    if (dt < cfg.dt_floor && !landing) {
      traj.termination = Termination::blowup_detected;
      traj.dt_floor_hit = true;
      traj.log.push_back("time step fell below dt_floor");
      break;
    }
    if (dt > 0.0) {
      bool ok = stepper.kinetic(u.values, 0.5 * dt);
      stepper.nonlinear(u.values, dt);
      ok = ok && stepper.kinetic(u.values, 0.5 * dt);
      if (!ok) {
        traj.termination = Termination::invalid_state;
        traj.log.push_back("tridiagonal solve broke down");
        break;
      }
    }
    u.time = landing ? event : u.time + dt;
    ++traj.steps;
    if (dt > 0.0) dt_prev = dt;
    if (!u.valid()) {
      traj.termination = Termination::invalid_state;
      std::ostringstream os;
      os.precision(17);
      os << "non-finite amplitude at t = " << u.time;
      traj.log.push_back(os.str());
      break;
    }
    take_snapshots();
    G = gradient_squared(u);
    const double g = std::sqrt(G);
    if (g >= ceiling / 10.0) monotone = true;
    recorded_last = false;
    if (traj.steps % cfg.record_every == 0) {
      traj.records.push_back(make_record(u, dt, ctx));
      check_drift(traj.records.back());
      recorded_last = true;
    }
    if (g >= ceiling) {
      traj.termination = Termination::blowup_detected;
      break;
    }
  }
  if (!recorded_last && u.valid() && u.time > traj.records.back().t) {
    traj.records.push_back(make_record(u, dt_prev, ctx));
    check_drift(traj.records.back());
  }
  traj.t_last = u.time;
  traj.final_state = u;
  return traj;
}

}  // namespace inls
