#include "inls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "inls/diagnostics.hpp"
#include "inls/error.hpp"

namespace inls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gn_exponent(const ModelParams& p) { return (2.0 * p.sigma + 2.0 - p.sigma * p.N) / (2.0 - p.sigma * p.N); }

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double check_annulus_gn(const Field& u, double R, double eta) {
  if (!(R > 0.0) || !(eta > 0.0)) throw InvalidArgument("check_annulus_gn: R and eta must be > 0");
  const ModelParams& p = u.params;
  const BallIntegrator pot(u, p.p(), -p.b);
  const double outer = pot.total() - pot.ball(R);
  const double rho = rho_seminorm(u, R).value;
  const double lhs = outer - eta * gradient_squared(u);
  if (rho == 0.0) {
    if (outer > 0.0) throw DegenerateField("check_annulus_gn: rho(u, R) vanishes while the outer integral does not");
    return -kInf;
  }
  return lhs * std::pow(R, 2.0 * (1.0 - p.s_c)) * std::pow(rho, -gn_exponent(p));
}

VirialSlack virial_lemma_slack(const Field& u, double R, double E0, double zpp) {
  if (!(R > 0.0)) throw InvalidArgument("virial_lemma_slack: R must be > 0");
  const ModelParams& p = u.params;
  const double support = CutoffProfile::virial().support();
  VirialSlack s;
  s.numerator = 8.0 * p.sigma * p.s_c * gradient_squared(u) + zpp - 16.0 * (p.sigma * p.s_c + 1.0) * E0;
  const BallIntegrator mass(u, 2.0);
  const BallIntegrator pot(u, p.p(), -p.b);
  s.denominator = mass.shell(2.0 * R, support * R) / (R * R) + (pot.total() - pot.ball(R));
  if (s.denominator > 0.0) {
    s.c_needed = s.numerator / s.denominator;
  } else {
    s.degenerate = true;
    s.c_needed = s.numerator > 0.0 ? kInf : 0.0;
  }
  return s;
}

double check_gnf(const Field& u) {
  u.require_valid("check_gnf");
  const ModelParams& p = u.params;
  const double G = gradient_squared(u);
  const double M = lp_integral(u, 2.0);
  if (!(G > 0.0) || !(M > 0.0)) throw DegenerateField("check_gnf: undefined for the zero field");
  const double denom = std::pow(G, p.sigma * p.s_c + 1.0) * std::pow(M, p.sigma * (1.0 - p.s_c));
  return potential_term(u) / denom;
}

BlowupTime estimate_blowup_time(const std::vector<double>& t, const std::vector<double>& grad) {
  if (t.size() != grad.size()) throw InvalidArgument("estimate_blowup_time: series lengths differ");
  if (t.size() < 5) throw NoBlowup("estimate_blowup_time: too few records");
  const double g_first = grad.front(), g_last = grad.back();
  if (!(g_first > 0.0) || !(g_last >= 100.0 * g_first)) {
    std::ostringstream os;
    os << "gradient grew by " << (g_first > 0.0 ? g_last / g_first : 0.0) << "x; at least 100x is needed";
    throw NoBlowup(os.str());
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (grad[i] >= g_last / 10.0) idx.push_back(i);
  }
  if (idx.size() < 5) throw NoBlowup("estimate_blowup_time: fewer than five records in the last growth decade");
  std::vector<double> x(idx.size()), y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) x[k] = t[idx[k]];
  BlowupTime best;
  LinearFit best_fit;
  bool have = false;
  for (int i = 0; i <= 2900; ++i) {
    const double p = 0.1 + 0.0005 * i;
    for (std::size_t k = 0; k < idx.size(); ++k) y[k] = std::pow(grad[idx[k]] / g_last, -1.0 / p);
    LinearFit f;
    try {
      f = linear_fit(x, y);
    } catch (const InvalidArgument&) {
      continue;
    }
    if (!(f.slope < 0.0)) continue;
    if (!have || f.r2 > best_fit.r2) {
      best_fit = f;
      best.p_fit = p;
      have = true;
    }
  }
  if (!have) throw NoBlowup("estimate_blowup_time: no decreasing linearisation found");
  const double a = best_fit.intercept, b = best_fit.slope;
  best.t_star = -a / b;
  const double var = (best_fit.intercept_stderr * best_fit.intercept_stderr +
                      best.t_star * best.t_star * best_fit.slope_stderr * best_fit.slope_stderr +
                      2.0 * best.t_star * best_fit.covariance) /
                     (b * b);
  best.stderr_ = std::sqrt(std::max(var, 0.0));
  best.r2 = best_fit.r2;
  best.points = static_cast<int>(idx.size());
  best.lo = t.back();
  best.hi = std::max(best.t_star + best.stderr_, t.back());
  return best;
}

std::vector<std::size_t> final_decade(const std::vector<double>& t, double t_star, double t_last) {
  std::vector<std::size_t> idx;
  const double span = 10.0 * (t_star - t_last);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_star && t_star - t[i] <= span) idx.push_back(i);
  }
  return idx;
}

BlowupReport blowup_report(const Trajectory& traj, const ReportOptions& opt) {
  if (traj.termination != Termination::blowup_detected) {
    throw NoBlowup("blowup_report: trajectory ended " + to_string(traj.termination));
  }
  const auto& recs = traj.records;
  const ModelParams& p = traj.params;
  std::vector<double> t, g;
  for (const auto& r : recs) {
    t.push_back(r.t);
    g.push_back(r.grad_l2);
  }
  BlowupReport rep;
  rep.t_star = estimate_blowup_time(t, g);
  rep.growth = g.back() / g.front();
  rep.rate_bound = (1.0 - p.s_c) / 2.0;
  const double t_last = t.back();
  double T = rep.t_star.t_star;
  if (!(T > t_last)) T = t_last + 0.5 * (t_last - t[t.size() - 2]);

  // lower-rate exponent over the last growth decade
  {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (g[i] >= g.back() / 10.0 && t[i] < T) {
        x.push_back(-std::log(T - t[i]));
        y.push_back(std::log(g[i]));
      }
    }
    rep.rate_fit = linear_fit(x, y);
    rep.lower_rate_exponent = rep.rate_fit.slope;
  }

  // space-time ratio: trapezoid over records plus the power-law tail past t_last
  rep.spacetime_exponent = p.spacetime_exponent();
  {
    const double pt = std::min(rep.lower_rate_exponent, 0.999);
    const double tail = g.back() * g.back() * (T - t_last) * (T - t_last) / (2.0 - 2.0 * pt);
    std::vector<double> suffix(t.size(), 0.0);
    suffix.back() = tail;
    for (std::size_t i = t.size() - 1; i-- > 0;) {
      const double f0 = (T - t[i]) * g[i] * g[i], f1 = (T - t[i + 1]) * g[i + 1] * g[i + 1];
      suffix[i] = suffix[i + 1] + 0.5 * (f0 + f1) * (t[i + 1] - t[i]);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= T) continue;
      rep.spacetime_ratio.push_back({t[i], suffix[i] / std::pow(T - t[i], rep.spacetime_exponent)});
    }
    const auto dec = final_decade(t, T, t_last);
    rep.final_decade_records = static_cast<int>(dec.size());
    double lo = kInf, hi = 0.0;
    for (std::size_t i : dec) {
      const double r = suffix[i] / std::pow(T - t[i], rep.spacetime_exponent);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    rep.spacetime_max_min = dec.empty() ? kNaN : hi / lo;
  }

  // log-bound fit
  {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= T || g[i] < g.back() / 100.0) continue;
      const double L = std::abs(std::log(T - t[i]));
      if (L <= 1.0) continue;
      x.push_back(std::log(L));
      y.push_back(std::log(recs[i].l_sigma_c));
    }
    if (x.size() >= 3) {
      rep.log_fit = linear_fit(x, y);
      rep.gamma_hat = rep.log_fit.slope;
      rep.gamma_lower = rep.gamma_hat - 2.0 * rep.log_fit.slope_stderr;
    } else {
      rep.gamma_hat = rep.gamma_lower = kNaN;
    }
  }

  // H-dot^s_c envelope
  rep.hsc_available = traj.hdot_available;
  if (rep.hsc_available) {
    double run = 0.0;
    for (const auto& r : recs) {
      run = std::max(run, r.hdot_sc);
      rep.hsc_envelope.push_back({r.t, run});
    }
    std::size_t mid = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::abs(t[i] - t_last / 2.0) < std::abs(t[mid] - t_last / 2.0)) mid = i;
    }
    rep.hsc_mid = rep.hsc_envelope[mid].y;
    rep.hsc_final = rep.hsc_envelope.back().y;
    rep.hsc_ratio = rep.hsc_final / rep.hsc_mid;
  } else {
    rep.hsc_mid = rep.hsc_final = rep.hsc_ratio = kNaN;
  }

  // concentration window
  rep.window_constant = traj.window_c;
  for (const auto& r : recs) {
    rep.conc_t.push_back(r.t);
    rep.conc_R.push_back(r.window_R);
    rep.conc_int.push_back(r.window_int);
  }
  rep.window_shrink = rep.conc_R.back() > 0.0 ? rep.conc_R.front() / rep.conc_R.back() : kNaN;
  {
    const auto dec = final_decade(t, T, t_last);
    std::vector<double> w;
    for (std::size_t i : dec) w.push_back(recs[i].window_int);
    rep.window_floor_median = median(w);
    rep.window_floor_min = w.empty() ? kNaN : *std::min_element(w.begin(), w.end());
    rep.window_floor_ok = !w.empty() && rep.window_floor_median > 0.0 &&
                          rep.window_floor_min >= opt.window_floor_fraction * rep.window_floor_median;
    double acc = 0.0;
    for (std::size_t i : dec) acc += recs[i].potential / (g[i] * g[i]);
    rep.energy_ratio_mean = dec.empty() ? kNaN : acc / static_cast<double>(dec.size());
    rep.energy_ratio_target = p.sigma + 1.0;
  }
  return rep;
}

namespace {

const Field& state_at(const Trajectory& traj, double tau) {
  if (tau == 0.0) return traj.initial_state;
  for (const auto& s : traj.snapshots) {
    if (std::abs(s.time - tau) <= 1e-12 * std::max(1.0, tau)) return s.field;
  }
  std::ostringstream os;
  os.precision(17);
  os << "no snapshot stored at tau = " << tau;
  throw MissingSnapshot(os.str());
}

double rho_or_zero(const Field& v, double R) {
  if (R > v.geometry.extent()) return 0.0;
  return rho_seminorm(v, R).value;
}

double weighted_dispersion(const Trajectory& traj, double tau0) {
  double acc = 0.0;
  const auto& r = traj.records;
  for (std::size_t i = 0; i + 1 < r.size() && r[i].t < tau0; ++i) {
    const double t1 = std::min(r[i + 1].t, tau0);
    double g1 = r[i + 1].grad_l2 * r[i + 1].grad_l2;
    const double g0 = r[i].grad_l2 * r[i].grad_l2;
    if (r[i + 1].t > tau0) g1 = g0 + (g1 - g0) * (tau0 - r[i].t) / (r[i + 1].t - r[i].t);
    acc += 0.5 * ((tau0 - r[i].t) * g0 + (tau0 - t1) * g1) * (t1 - r[i].t);
  }
  return acc;
}

}  // namespace

PropositionQuantities proposition_quantities(const Trajectory& traj, const GroundState& gs, double tau0, double A,
                                             const PropositionOptions& opt) {
  if (!(tau0 >= 0.0) || tau0 > traj.t_last) throw InvalidArgument("proposition_quantities: tau0 outside the run");
  if (!(A > 0.0)) throw InvalidArgument("proposition_quantities: A must be > 0");
  const ModelParams& p = traj.params;
  PropositionQuantities q;
  q.tau0 = tau0;
  q.A = A;
  q.M0 = 4.0 * norm(traj.initial_state, NormKind::l_sigma_c) / gs.norm_sigma_c;
  q.G_eps = std::pow(q.M0, 1.0 / opt.epsilon);
  q.A_eps = std::pow(opt.epsilon * q.G_eps / (q.M0 * q.M0), 1.0 / (2.0 * (1.0 + p.s_c)));

  const Field& v = state_at(traj, tau0);
  double m2 = 0.0;
  bool any = false;
  for (const auto& s : traj.snapshots) {
    if (s.time <= 0.0 || s.time > tau0 * (1.0 + 1e-12)) continue;
    m2 = std::max(m2, rho_or_zero(s.field, A * std::sqrt(s.time)));
    any = true;
  }
  if (tau0 > 0.0 && !any) throw MissingSnapshot("proposition_quantities: no snapshots in (0, tau0]");
  q.M_infinity = std::sqrt(m2);
  q.rho_at_window = tau0 > 0.0 ? rho_or_zero(v, A * std::sqrt(tau0)) : 0.0;
  q.weighted_dispersion = weighted_dispersion(traj, tau0);
  q.lambda_v = std::pow(gradient_squared(v), -0.5 / (1.0 - p.s_c));
  q.F_star = std::sqrt(tau0) / q.lambda_v;
  q.D_star = std::pow(q.M0, opt.alpha3) * std::max(1.0, std::pow(q.F_star, (1.0 + p.s_c) / (1.0 - p.s_c)));
  const BallIntegrator mass0(traj.initial_state, 2.0);
  q.window_mass = std::pow(q.lambda_v, -2.0 * p.s_c) * mass0.ball(q.D_star * q.lambda_v);
  return q;
}

std::vector<double> tau_ladder(const Trajectory& traj, int rungs) {
  std::vector<double> out;
  const double top = traj.t_last / 2.0;
  for (int k = 0; k < rungs; ++k) {
    const double target = top * std::pow(2.0, -k);
    double best = -1.0;
    for (const auto& s : traj.snapshots) {
      if (s.time > 0.0 && s.time <= target && s.time > best) best = s.time;
    }
    if (best > 0.0 && std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// smallest x in [0, hi] with pred(x) true, assuming pred is monotone
template <class Pred>
double smallest_true(Pred pred, double hi) {
  if (pred(0.0)) return 0.0;
  if (!pred(hi)) return kInf;
  double lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

PropositionLadder proposition_ladder(const Trajectory& traj, const GroundState& gs, double A,
                                     const PropositionOptions& opt, int rungs) {
  const ModelParams& p = traj.params;
  PropositionLadder L;
  const auto taus = tau_ladder(traj, rungs);
  if (taus.empty()) throw MissingSnapshot("proposition_ladder: no snapshots in (0, t_last/2]");
  const double extent = traj.geometry.extent();
  const BallIntegrator mass0(traj.initial_state, 2.0);
  std::vector<double> windows;
  L.alpha1_hat = L.alpha2_hat = L.alpha3_hat = -kInf;
  for (double tau0 : taus) {
    const auto q = proposition_quantities(traj, gs, tau0, A, opt);
    const auto q2 = proposition_quantities(traj, gs, tau0, 2.0 * A, opt);
    L.rows.push_back(q);
    L.rows_twice.push_back(q2);
    if (q2.M_infinity > q.M_infinity * (1.0 + 1e-9)) L.monotone = false;
    windows.push_back(q.window_mass);

    const double logM = std::log(q.M0);
    if (logM > 0.0) {
      const Field& v = state_at(traj, tau0);
      const double a_hi = std::max(0.0, std::log(extent / std::sqrt(tau0)) / logM) + 1e-9;
      const double a1 = smallest_true(
          [&](double a) { return rho_or_zero(v, std::pow(q.M0, a) * std::sqrt(tau0)) <= opt.C1 * q.M0 * q.M0; }, a_hi);
      L.alpha1_hat = std::max(L.alpha1_hat, a1);
      if (q.weighted_dispersion > 0.0) {
        L.alpha2_hat = std::max(L.alpha2_hat, std::log(q.weighted_dispersion / std::pow(tau0, 1.0 + p.s_c)) / logM);
      }
      const double scale = std::max(1.0, std::pow(q.F_star, (1.0 + p.s_c) / (1.0 - p.s_c)));
      const double a3_hi = std::max(0.0, std::log(extent / (scale * q.lambda_v)) / logM) + 1e-9;
      const double a3 = smallest_true(
          [&](double a) {
            const double D = std::pow(q.M0, a) * scale;
            return std::pow(q.lambda_v, -2.0 * p.s_c) * mass0.ball(D * q.lambda_v) >= opt.C2;
          },
          a3_hi);
      L.alpha3_hat = std::max(L.alpha3_hat, a3);
    } else {
      L.alpha1_hat = L.alpha2_hat = L.alpha3_hat = kNaN;
    }
  }
  L.window_min = *std::min_element(windows.begin(), windows.end());
  L.window_median = median(windows);
  L.window_floor_ok = L.window_min > 0.0 && L.window_min >= opt.C2;
  return L;
}

namespace {

void kv(std::ostringstream& os, const std::string& k, double v) { os << k << " = " << v << "\n"; }

}  // namespace

std::string to_text(const BlowupReport& r) {
  std::ostringstream os;
  os.precision(12);
  kv(os, "t_star", r.t_star.t_star);
  kv(os, "t_star_stderr", r.t_star.stderr_);
  kv(os, "t_star_bracket_lo", r.t_star.lo);
  kv(os, "t_star_bracket_hi", r.t_star.hi);
  kv(os, "t_star_linearisation_p", r.t_star.p_fit);
  kv(os, "t_star_fit_r2", r.t_star.r2);
  kv(os, "gradient_growth", r.growth);
  kv(os, "lower_rate_exponent", r.lower_rate_exponent);
  kv(os, "lower_rate_exponent_stderr", r.rate_fit.slope_stderr);
  kv(os, "lower_rate_bound", r.rate_bound);
  kv(os, "spacetime_exponent", r.spacetime_exponent);
  kv(os, "spacetime_ratio_max_over_min", r.spacetime_max_min);
  kv(os, "final_decade_records", r.final_decade_records);
  kv(os, "gamma_hat", r.gamma_hat);
  kv(os, "gamma_hat_stderr", r.log_fit.slope_stderr);
  kv(os, "gamma_lower", r.gamma_lower);
  kv(os, "hsc_mid", r.hsc_mid);
  kv(os, "hsc_final_running_max", r.hsc_final);
  kv(os, "hsc_ratio", r.hsc_ratio);
  kv(os, "window_constant", r.window_constant);
  kv(os, "window_shrink", r.window_shrink);
  kv(os, "window_floor_min", r.window_floor_min);
  kv(os, "window_floor_median", r.window_floor_median);
  os << "window_floor_ok = " << (r.window_floor_ok ? "true" : "false") << "\n";
  kv(os, "energy_ratio_mean", r.energy_ratio_mean);
  kv(os, "energy_ratio_target", r.energy_ratio_target);
  return os.str();
}

std::string to_text(const PropositionLadder& l) {
  std::ostringstream os;
  os.precision(12);
  kv(os, "rungs", static_cast<double>(l.rows.size()));
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    const auto& q = l.rows[i];
    os << "rung." << i << " = tau0 " << q.tau0 << " M0 " << q.M0 << " M_inf " << q.M_infinity << " M_inf_2A "
       << l.rows_twice[i].M_infinity << " rho_window " << q.rho_at_window << " dispersion " << q.weighted_dispersion
       << " lambda_v " << q.lambda_v << " F_star " << q.F_star << " D_star " << q.D_star << " window_mass "
       << q.window_mass << "\n";
  }
  if (!l.rows.empty()) {
    kv(os, "G_eps", l.rows.front().G_eps);
    kv(os, "A_eps", l.rows.front().A_eps);
  }
  os << "M_inf_monotone = " << (l.monotone ? "true" : "false") << "\n";
  kv(os, "alpha1_hat", l.alpha1_hat);
  kv(os, "alpha2_hat", l.alpha2_hat);
  kv(os, "alpha3_hat", l.alpha3_hat);
  kv(os, "window_mass_min", l.window_min);
  kv(os, "window_mass_median", l.window_median);
  os << "window_mass_floor_ok = " << (l.window_floor_ok ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace inls
