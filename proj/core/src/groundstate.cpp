#include "inls/groundstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/numeric/odeint.hpp>

#include "inls/checkpoint.hpp"
#include "inls/diagnostics.hpp"
#include "inls/error.hpp"

namespace inls {

namespace odeint = boost::numeric::odeint;

std::string to_string(ShootKind kind) {
  switch (kind) {
    case ShootKind::crosses_zero: return "crosses-zero";
    case ShootKind::blows_up: return "blows-up";
    case ShootKind::decays: return "decays";
    case ShootKind::indeterminate: return "indeterminate";
  }
  return "unknown";
}

double tail_exponent(const ModelParams& p) {
  const double m = 2.0 / (p.sigma_c - 2.0);
  return std::max(m, static_cast<double>(p.N - 2));
}

namespace {

using State = std::array<double, 2>;

void require_regime(const ModelParams& p, const char* where) {
  if (!p.regime_valid) throw InvalidArgument(std::string(where) + ": " + regime_violation(p));
}

}  // namespace

ShootOutcome shoot_radial(const ModelParams& params, double a, double r_max, const ShootOptions& opt) {
  return shoot_radial(params, a, r_max, opt, nullptr);
}

ShootOutcome shoot_radial(const ModelParams& p, double a, double r_max, const ShootOptions& opt,
                          std::vector<ShootSample>* path) {
  require_regime(p, "shoot_radial");
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("shoot_radial: a must be > 0");
  if (!(r_max > opt.r0)) throw InvalidArgument("shoot_radial: r_max must exceed the start radius");
  const double b = p.b, sig = p.sigma, sc = p.sigma_c;
  const int N = p.N;
  auto rhs = [&](const State& x, State& dx, double r) {
    const double V = x[0], aV = std::abs(V);
    dx[0] = x[1];
    dx[1] = -(N - 1) / r * x[1] - std::pow(r, -b) * std::pow(aV, 2.0 * sig) * V + std::pow(aV, sc - 2.0) * V;
  };
  const double A = std::pow(a, 2.0 * sig + 1.0) / ((2.0 - b) * (N - b));
  double r = opt.r0;
  State x{a - A * std::pow(r, 2.0 - b), -A * (2.0 - b) * std::pow(r, 1.0 - b)};
  auto stepper = odeint::make_controlled(opt.rtol * 1e-3 * a, opt.rtol, odeint::runge_kutta_dopri5<State>());
  double dr = 1e-3 * r;
  if (path) path->push_back({r, x[0], x[1]});
  ShootOutcome out;
  while (r < r_max) {
    dr = std::min(dr, r_max - r);
    if (dr < 1e-14 * r) {
      out.kind = ShootKind::indeterminate;
      out.r = r;
      out.V = x[0];
      out.dV = x[1];
      return out;
    }
    if (stepper.try_step(rhs, x, r, dr) != odeint::success) continue;
    if (path) path->push_back({r, x[0], x[1]});
    out.r = r;
    out.V = x[0];
    out.dV = x[1];
    if (x[0] <= 0.0) {
      out.kind = ShootKind::crosses_zero;
      return out;
    }
    if (x[1] > 0.0 && std::pow(x[0], sc - 2.0) >= std::pow(r, -b) * std::pow(x[0], 2.0 * sig)) {
      out.kind = ShootKind::blows_up;
      return out;
    }
  }
  out.kind = std::abs(x[0]) < opt.decay_threshold && std::abs(x[1]) < opt.decay_threshold ? ShootKind::decays
                                                                                          : ShootKind::indeterminate;
  return out;
}

namespace {

struct Operator {
  std::vector<double> W;   // face conductances
  std::vector<double> w;   // cell weights
  std::vector<double> r;
  double ghost_ratio = 0.0;  // V_ghost / V_{n-1}
};

Operator make_operator(const Geometry& g, const ModelParams& p) {
  Operator op;
  op.r = g.radius();
  op.w = g.weight();
  const auto& area = g.face_area();
  const auto& gap = g.face_gap();
  op.W.resize(op.r.size());
  for (std::size_t j = 0; j < op.r.size(); ++j) op.W[j] = area[j] / gap[j];
  const double rl = op.r.back();
  op.ghost_ratio = std::pow(rl / (rl + gap.back()), tail_exponent(p));
  return op;
}

template <class T>
std::vector<T> apply(const Operator& op, const ModelParams& p, const std::vector<T>& V) {
  const std::size_t n = V.size();
  std::vector<T> F(n);
  for (std::size_t j = 0; j < n; ++j) {
    const T right = j + 1 < n ? V[j + 1] : op.ghost_ratio * V[j];
    T flux = op.W[j] * (right - V[j]);
    if (j > 0) flux -= op.W[j - 1] * (V[j] - V[j - 1]);
    const double m = std::abs(V[j]);
    F[j] = flux / op.w[j] + std::pow(op.r[j], -p.b) * std::pow(m, 2.0 * p.sigma) * V[j] -
           std::pow(m, p.sigma_c - 2.0) * V[j];
  }
  return F;
}

template <class T>
double max_abs(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, static_cast<double>(std::abs(x)));
  return m;
}

// tridiagonal solve, sub[0] and sup[n-1] unused
std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                           std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double f = sub[i] / diag[i - 1];
    diag[i] -= f * sup[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

int newton_polish(const Operator& op, const ModelParams& p, std::vector<double>& V, double target) {
  const std::size_t n = V.size();
  double res = max_abs(apply(op, p, V));
  int it = 0;
  for (; it < 60 && res > target; ++it) {
    const auto F = apply(op, p, V);
    std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0), rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      double d = -op.W[j];
      if (j + 1 < n) {
        sup[j] = op.W[j] / op.w[j];
      } else {
        d += op.W[j] * op.ghost_ratio;
      }
      if (j > 0) {
        d -= op.W[j - 1];
        sub[j] = op.W[j - 1] / op.w[j];
      }
      const double m = std::abs(V[j]);
      diag[j] = d / op.w[j] + (2.0 * p.sigma + 1.0) * std::pow(op.r[j], -p.b) * std::pow(m, 2.0 * p.sigma) -
                (p.sigma_c - 1.0) * std::pow(m, p.sigma_c - 2.0);
      rhs[j] = -F[j];
    }
    const auto delta = thomas(sub, diag, sup, rhs);
    double step = 1.0;
    std::vector<double> trial(n);
    double trial_res = res;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = V[j] + step * delta[j];
      trial_res = max_abs(apply(op, p, trial));
      if (trial_res < res) break;
    }
    if (!(trial_res < res)) break;
    V = trial;
    res = trial_res;
  }
  return it;
}

}  // namespace

Field GroundState::field() const {
  Field f = zero_field(mesh, params);
  for (std::size_t j = 0; j < profile.size(); ++j) f.values[j] = profile[j];
  return f;
}

GroundState solve_ground_state(const ModelParams& p, double tol, const GroundStateOptions& opt) {
  require_regime(p, "solve_ground_state");
  if (!(tol > 0.0)) throw InvalidArgument("solve_ground_state: tol must be > 0");
  ShootOptions sopt;
  sopt.rtol = tol / 10.0;

  // scan a upward for the first switch from upward escape to crossing zero
  double lo = 0.0, hi = 0.0;
  double a = opt.a_start;
  ShootKind prev = shoot_radial(p, a, opt.shoot_r_max, sopt).kind;
  double a_prev = a;
  for (a *= 2.0; a <= opt.a_limit; a *= 2.0) {
    const ShootKind k = shoot_radial(p, a, opt.shoot_r_max, sopt).kind;
    if (prev == ShootKind::blows_up && k == ShootKind::crosses_zero) {
      lo = a_prev;
      hi = a;
      break;
    }
    prev = k;
    a_prev = a;
  }
  if (hi == 0.0) {
    std::ostringstream os;
    os << "no sign change between blows-up and crosses-zero for a in [" << opt.a_start << ", " << opt.a_limit << "]";
    throw BracketFailure(os.str());
  }
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const ShootKind k = shoot_radial(p, mid, opt.shoot_r_max, sopt).kind;
    if (k == ShootKind::crosses_zero) {
      hi = mid;
    } else if (k == ShootKind::blows_up) {
      lo = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }

  GroundState gs;
  gs.params = p;
  gs.shoot_param = 0.5 * (lo + hi);
  gs.bracket_lo = lo;
  gs.bracket_hi = hi;
  gs.tail_exponent = tail_exponent(p);
  gs.tolerance = tol;

  // trust the shot profile while the two bracket orbits agree
  std::vector<ShootSample> plo, phi;
  shoot_radial(p, lo, opt.shoot_r_max, sopt, &plo);
  shoot_radial(p, hi, opt.shoot_r_max, sopt, &phi);
  auto hermite = [](const std::vector<ShootSample>& s) {
    std::vector<double> x, y, dy;
    for (const auto& q : s) {
      if (!x.empty() && q.r <= x.back()) continue;
      x.push_back(q.r);
      y.push_back(q.V);
      dy.push_back(q.dV);
    }
    return boost::math::interpolators::cubic_hermite<std::vector<double>>(std::move(x), std::move(y), std::move(dy));
  };
  const double r_end = std::min(plo.back().r, phi.back().r);
  auto Hlo = hermite(plo);
  auto Hhi = hermite(phi);
  double r_trust = plo.front().r;
  for (const auto& q : plo) {
    if (q.r >= r_end) break;
    const double vl = Hlo(q.r), vh = Hhi(q.r);
    if (std::abs(vl - vh) > 1e-6 * std::abs(vl) || vl <= 0.0 || vh <= 0.0) break;
    r_trust = q.r;
  }

  gs.mesh = Geometry::radial(p.N, opt.r_max, opt.resolution, opt.stretch);
  const auto& rs = gs.mesh.radius();
  const double v_trust = 0.5 * (Hlo(r_trust) + Hhi(r_trust));
  const double start = plo.front().r;
  gs.profile.resize(rs.size());
  for (std::size_t j = 0; j < rs.size(); ++j) {
    const double r = rs[j];
    if (r < start) {
      gs.profile[j] = plo.front().V;
    } else if (r <= r_trust) {
      gs.profile[j] = 0.5 * (Hlo(r) + Hhi(r));
    } else {
      gs.profile[j] = v_trust * std::pow(r_trust / r, gs.tail_exponent);
    }
  }

  const Operator op = make_operator(gs.mesh, p);
  gs.newton_iterations = newton_polish(op, p, gs.profile, 1e-3 * tol);
  gs.residual = max_abs(apply(op, p, gs.profile));
  if (!(gs.residual <= tol)) {
    std::ostringstream os;
    os << "ground-state residual " << gs.residual << " above tolerance " << tol << " on " << gs.mesh.describe();
    throw ResolutionError(os.str());
  }
  for (double v : gs.profile) {
    if (!(v > 0.0)) throw InvalidState("ground-state profile is not positive on the mesh");
  }

  const Field f = gs.field();
  gs.norm_sigma_c = norm(f, NormKind::l_sigma_c);
  gs.grad_norm = norm(f, NormKind::grad_l2);
  gs.potential = potential_term(f);
  gs.mass = lp_integral(f, 2.0);
  gs.sharp_constant = (p.sigma + 1.0) / std::pow(gs.norm_sigma_c, 2.0 * p.sigma);
  return gs;
}

double elliptic_residual(const Field& u) {
  if (!u.geometry.is_radial()) throw Unsupported("elliptic_residual needs a radial mesh");
  u.require_valid("elliptic_residual");
  const Operator op = make_operator(u.geometry, u.params);
  return max_abs(apply(op, u.params, u.values));
}

double gn_sharp_check(const GroundState& gs, const Field& u) {
  if (!(gs.params == u.params)) throw InvalidArgument("gn_sharp_check: ground state and field have different params");
  u.require_valid("gn_sharp_check");
  const double g2 = gradient_squared(u);
  const double lsc = norm(u, NormKind::l_sigma_c);
  if (!(g2 > 0.0) || !(lsc > 0.0)) throw DegenerateField("gn_sharp_check: ratio undefined for the zero field");
  const double sigma = u.params.sigma;
  return potential_term(u) / (gs.sharp_constant * g2 * std::pow(lsc, 2.0 * sigma));
}

ScaledGroundStateProfile scaled_profile(const GroundState& gs, double lambda) {
  return ScaledGroundStateProfile{gs.mesh, gs.profile, gs.tail_exponent, lambda};
}

void write_ground_state(const std::string& path, const GroundState& gs) {
  write_checkpoint(path, gs.field(),
                   {{"sharp_constant", format_double(gs.sharp_constant)},
                    {"shoot_param", format_double(gs.shoot_param)},
                    {"norm_sigma_c", format_double(gs.norm_sigma_c)},
                    {"grad_norm", format_double(gs.grad_norm)},
                    {"residual", format_double(gs.residual)},
                    {"tail_exponent", format_double(gs.tail_exponent)}});
}

}  // namespace inls
