#include "inls/app/app.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "inls/checkpoint.hpp"
#include "inls/diagnostics.hpp"
#include "inls/error.hpp"

namespace fs = std::filesystem;

namespace inls::app {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir);
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string csv_text(const std::vector<DiagnosticRecord>& recs) {
  std::string out;
  const auto& cols = record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : recs) {
    const auto v = record_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    out += "\n";
  }
  return out;
}

std::vector<DiagnosticRecord> parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<DiagnosticRecord> recs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell, source + ":" + std::to_string(lineno)));
    if (v.size() != record_columns().size()) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(record_columns().size()) + " columns");
    }
    DiagnosticRecord r;
    double* f[] = {&r.t,   &r.dt,   &r.mass,   &r.energy, &r.grad_l2,  &r.l_sigma_c, &r.hdot_sc,
                   &r.potential, &r.z_R, &r.zp_R, &r.zpp_R, &r.rho_R, &r.window_R, &r.window_int};
    for (std::size_t i = 0; i < v.size(); ++i) *f[i] = v[i];
    recs.push_back(r);
  }
  return recs;
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

std::string run_text(const Trajectory& t) {
  std::ostringstream os;
  os << "termination = " << to_string(t.termination) << "\n";
  os << "steps = " << t.steps << "\n";
  os << "t_last = " << format_double(t.t_last) << "\n";
  os << "dt_floor_hit = " << (t.dt_floor_hit ? "true" : "false") << "\n";
  os << "grad_ceiling = " << format_double(t.grad_ceiling) << "\n";
  os << "window_constant = " << format_double(t.window_c) << "\n";
  os << "hdot_available = " << (t.hdot_available ? "true" : "false") << "\n";
  os << "snapshots = " << t.snapshots.size() << "\n";
  for (std::size_t i = 0; i < t.log.size(); ++i) os << "log." << i << " = " << t.log[i] << "\n";
  return os.str();
}

Field initial_field(const RunConfig& cfg, const Geometry& g, const ModelParams& p, const GroundState* gs) {
  const auto& in = cfg.initial;
  if (in.profile == "gaussian") {
    return make_field(g, p, GaussianProfile{in.amplitude, in.width, {in.center_x, in.center_y, in.center_z}});
  }
  if (in.profile == "ground_state") return make_field(g, p, scaled_profile(*gs, in.lambda));
  return make_field(g, p, CheckpointProfile{in.path});
}

std::string two_column(const std::vector<std::pair<double, double>>& xy) {
  std::string out;
  for (const auto& [x, y] : xy) out += format_double(x) + " " + format_double(y) + "\n";
  return out;
}

const std::vector<std::string> kRecordSeries = {"mass",    "energy", "grad",     "l-sigma-c",     "hdot",
                                                "potential", "z",    "zp",       "zpp",           "rho",
                                                "dt",      "window-radius", "window-integral", "energy-ratio"};
const std::vector<std::string> kReportSeries = {"lower-rate", "spacetime-ratio", "log-bound", "hsc-envelope"};

double record_field(const DiagnosticRecord& r, const std::string& name) {
  if (name == "mass") return r.mass;
  if (name == "energy") return r.energy;
  if (name == "grad") return r.grad_l2;
  if (name == "l-sigma-c") return r.l_sigma_c;
  if (name == "hdot") return r.hdot_sc;
  if (name == "potential") return r.potential;
  if (name == "z") return r.z_R;
  if (name == "zp") return r.zp_R;
  if (name == "zpp") return r.zpp_R;
  if (name == "rho") return r.rho_R;
  if (name == "dt") return r.dt;
  if (name == "window-radius") return r.window_R;
  if (name == "window-integral") return r.window_int;
  return r.grad_l2 > 0.0 ? r.potential / (r.grad_l2 * r.grad_l2) : 0.0;
}

std::string series_text(const Trajectory& traj, const std::optional<BlowupReport>& rep, const std::string& name) {
  std::vector<std::pair<double, double>> xy;
  if (std::find(kRecordSeries.begin(), kRecordSeries.end(), name) != kRecordSeries.end()) {
    for (const auto& r : traj.records) xy.emplace_back(r.t, record_field(r, name));
    return two_column(xy);
  }
  if (std::find(kReportSeries.begin(), kReportSeries.end(), name) == kReportSeries.end()) {
    std::string names;
    for (const auto& n : series_names()) names += (names.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown series '" + name + "'; available: " + names);
  }
  if (!rep) throw NoBlowup("series '" + name + "' needs a blow-up run");
  const double T = rep->t_star.t_star;
  if (name == "spacetime-ratio") {
    for (const auto& p : rep->spacetime_ratio) xy.emplace_back(p.x, p.y);
  } else if (name == "hsc-envelope") {
    for (const auto& p : rep->hsc_envelope) xy.emplace_back(p.x, p.y);
  } else {
    for (const auto& r : traj.records) {
      if (!(r.t < T)) continue;
      if (name == "lower-rate") {
        xy.emplace_back(std::log(T - r.t), std::log(r.grad_l2));
      } else if (std::abs(std::log(T - r.t)) > 1.0) {
        xy.emplace_back(std::log(std::abs(std::log(T - r.t))), std::log(r.l_sigma_c));
      }
    }
  }
  return two_column(xy);
}

std::optional<BlowupReport> try_report(const Trajectory& traj, const RunConfig& cfg, std::string* why) {
  if (traj.termination != Termination::blowup_detected) {
    if (why) *why = "trajectory ended " + to_string(traj.termination);
    return std::nullopt;
  }
  try {
    ReportOptions o;
    o.window_floor_fraction = cfg.analysis.window_floor_fraction;
    return blowup_report(traj, o);
  } catch (const NoBlowup& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
}

std::string slack_csv(const Trajectory& traj, const RunConfig& cfg) {
  std::string out = "t,R,virial_c_needed,annulus_c_needed\n";
  std::vector<const Field*> states{&traj.initial_state};
  for (const auto& s : traj.snapshots) states.push_back(&s.field);
  const double E0 = traj.records.front().energy;
  for (const Field* u : states) {
    for (double R : cfg.analysis.R_ladder) {
      double vc = std::nan(""), ac = std::nan("");
      try {
        const auto vq = virial_quantities(*u, R, CutoffProfile::virial());
        vc = virial_lemma_slack(*u, R, E0, vq.zpp).c_needed;
      } catch (const Error&) {
      }
      try {
        if (R <= u->geometry.extent()) ac = check_annulus_gn(*u, R, cfg.analysis.corpus_eta);
      } catch (const Error&) {
      }
      out += format_double(u->time) + "," + format_double(R) + "," + format_double(vc) + "," + format_double(ac) + "\n";
    }
  }
  return out;
}

std::string groundstate_text(const GroundState& gs) {
  std::ostringstream os;
  os << "shoot_param = " << format_double(gs.shoot_param) << "\n";
  os << "bracket_lo = " << format_double(gs.bracket_lo) << "\n";
  os << "bracket_hi = " << format_double(gs.bracket_hi) << "\n";
  os << "norm_sigma_c = " << format_double(gs.norm_sigma_c) << "\n";
  os << "grad_norm = " << format_double(gs.grad_norm) << "\n";
  os << "potential = " << format_double(gs.potential) << "\n";
  os << "mass = " << format_double(gs.mass) << "\n";
  os << "sharp_constant = " << format_double(gs.sharp_constant) << "\n";
  os << "residual = " << format_double(gs.residual) << "\n";
  os << "tolerance = " << format_double(gs.tolerance) << "\n";
  os << "newton_iterations = " << gs.newton_iterations << "\n";
  const double sc = std::pow(gs.norm_sigma_c, gs.params.sigma_c);
  const double K = gs.grad_norm * gs.grad_norm;
  os << "pohozaev_relative = " << format_double((-K + gs.potential - sc) / gs.potential) << "\n";
  os << "gn_ratio_self = " << format_double(gn_sharp_check(gs, gs.field())) << "\n";
  return os.str();
}

}  // namespace

const std::vector<std::string>& series_names() {
  static const std::vector<std::string> names = [] {
    auto n = kRecordSeries;
    n.insert(n.end(), kReportSeries.begin(), kReportSeries.end());
    return n;
  }();
  return names;
}

GroundState run_groundstate(const RunConfig& cfg, const std::string& out_dir) {
  const ModelParams p = model_params(cfg);
  if (const auto why = regime_violation(p); !why.empty()) throw InvalidArgument("model: " + why);
  if (!(cfg.groundstate.tol > 0.0)) throw InvalidArgument("groundstate.tol must be > 0");
  make_dir(out_dir);
  GroundState gs = solve_ground_state(p, cfg.groundstate.tol, groundstate_options(cfg));
  write_ground_state(join(out_dir, "groundstate.chk"), gs);
  write_text(join(out_dir, "groundstate.txt"), groundstate_text(gs));
  return gs;
}

RunOutput run_config(const RunConfig& cfg, const std::string& out_dir, int workers) {
  validate(cfg);
  make_dir(out_dir);
  write_text(join(out_dir, "config.txt"), cfg.to_text());
  const ModelParams p = model_params(cfg);
  const Geometry g = make_geometry(cfg);

  RunOutput out;
  if (cfg.groundstate.solve) out.groundstate = run_groundstate(cfg, out_dir);
  const Field u0 = initial_field(cfg, g, p, out.groundstate ? &*out.groundstate : nullptr);
  out.trajectory = evolve_run(u0, cfg.evolution);
  const Trajectory& traj = out.trajectory;

  write_text(join(out_dir, "diagnostics.csv"), csv_text(traj.records));
  write_text(join(out_dir, "run.txt"), run_text(traj));
  if (!traj.snapshots.empty()) {
    const std::string sdir = join(out_dir, "snapshots");
    make_dir(sdir);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(4) << std::setfill('0') << i << ".chk";
      write_checkpoint(join(sdir, name.str()), traj.snapshots[i].field);
    }
  }
  write_text(join(out_dir, "slack.csv"), slack_csv(traj, cfg));

  RunSummary& s = out.summary;
  s.termination = to_string(traj.termination);
  s.energy0 = traj.records.front().energy;
  s.t_last = traj.t_last;
  std::string why;
  out.report = try_report(traj, cfg, &why);
  std::string report;
  if (out.report) {
    s.t_star = out.report->t_star.t_star;
    s.p_hat = out.report->lower_rate_exponent;
    s.gamma_hat = out.report->gamma_hat;
    report = "status = blowup\n" + to_text(*out.report);
    if (out.groundstate) {
      try {
        out.ladder = proposition_ladder(traj, *out.groundstate, cfg.analysis.A, proposition_options(cfg),
                                        cfg.analysis.tau_rungs);
        report += to_text(*out.ladder);
      } catch (const Error& e) {
        report += std::string("proposition_ladder = unavailable: ") + e.what() + "\n";
      }
    }
  } else {
    s.status = traj.termination == Termination::invalid_state ? "invalid-state" : "no-blowup";
    s.t_star = s.p_hat = s.gamma_hat = std::nan("");
    report = "status = " + s.status + "\nreason = " + why + "\n";
  }
  if (cfg.analysis.corpus) {
    const auto v = verify_corpus(p, corpus_options(cfg), out.groundstate ? &*out.groundstate : nullptr, workers);
    s.corpus = v.coarse;
    write_text(join(out_dir, "corpus.txt"), to_text(v));
  }
  write_text(join(out_dir, "report.txt"), report);

  const std::string series_dir = join(out_dir, "series");
  make_dir(series_dir);
  for (const auto& name : series_names()) {
    if (!out.report && std::find(kReportSeries.begin(), kReportSeries.end(), name) != kReportSeries.end()) continue;
    write_text(join(series_dir, name + ".dat"), series_text(traj, out.report, name));
  }
  return out;
}

std::string summary_csv(const std::vector<SweepRow>& rows, const std::string& axis) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out = quote(axis) +
                    ",status,termination,energy0,t_last,t_star,p_hat,gamma_hat,annulus_gn_max,virial_c_max,gnf_max\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    const bool c = s.corpus.has_value();
    const double nan = std::nan("");
    out += quote(r.value) + "," + quote(s.status) + "," + s.termination + "," + format_double(s.energy0) + "," +
           format_double(s.t_last) + "," + format_double(s.t_star) + "," + format_double(s.p_hat) + "," +
           format_double(s.gamma_hat) + "," + format_double(c ? s.corpus->annulus_gn : nan) + "," +
           format_double(c ? s.corpus->virial_c : nan) + "," + format_double(c ? s.corpus->gnf : nan) + "\n";
  }
  return out;
}

std::vector<SweepRow> sweep(const RunConfig& cfg, const std::string& axis, const std::vector<std::string>& values,
                            const std::string& out_dir, int workers) {
  const auto keys = config_keys();
  if (std::find(keys.begin(), keys.end(), axis) == keys.end()) throw InvalidArgument("unknown sweep axis '" + axis + "'");
  make_dir(out_dir);
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = values[i];
      std::ostringstream name;
      name << std::setw(3) << std::setfill('0') << i;
      row.dir = join(out_dir, name.str());
      try {
        RunConfig c = cfg;
        set_value(c, axis, values[i]);
        c.analysis.output = row.dir;
        row.summary = run_config(c, row.dir).summary;
      } catch (const std::exception& e) {
        row.summary = RunSummary{};
        row.summary.status = std::string("error: ") + e.what();
        row.summary.termination = "none";
        row.summary.energy0 = row.summary.t_last = std::nan("");
        row.summary.t_star = row.summary.p_hat = row.summary.gamma_hat = std::nan("");
      }
    }
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(values.size())));
  if (w <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < w; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  write_text(join(out_dir, "summary.csv"), summary_csv(rows, axis));
  return rows;
}

Trajectory load_trajectory(const std::string& run_dir) {
  const RunConfig cfg = parse_config(read_text(join(run_dir, "config.txt")), join(run_dir, "config.txt"));
  const auto kv = parse_kv(read_text(join(run_dir, "run.txt")));
  Trajectory t;
  t.params = model_params(cfg);
  t.config = cfg.evolution;
  t.records = parse_csv(read_text(join(run_dir, "diagnostics.csv")), join(run_dir, "diagnostics.csv"));
  if (t.records.empty()) throw ParseError(run_dir + ": diagnostics.csv has no records");
  auto get = [&](const std::string& k) {
    const auto it = kv.find(k);
    if (it == kv.end()) throw ParseError(run_dir + "/run.txt: missing '" + k + "'");
    return it->second;
  };
  const std::string term = get("termination");
  t.termination = term == "blowup-detected"   ? Termination::blowup_detected
                  : term == "horizon-reached" ? Termination::horizon_reached
                                              : Termination::invalid_state;
  t.t_last = parse_double(get("t_last"), "t_last");
  t.window_c = parse_double(get("window_constant"), "window_constant");
  t.grad_ceiling = parse_double(get("grad_ceiling"), "grad_ceiling");
  t.hdot_available = get("hdot_available") == "true";
  t.dt_floor_hit = get("dt_floor_hit") == "true";
  return t;
}

std::string export_series(const std::string& run_dir, const std::string& name) {
  if (std::find(series_names().begin(), series_names().end(), name) == series_names().end()) {
    std::string names;
    for (const auto& n : series_names()) names += (names.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown series '" + name + "'; available: " + names);
  }
  const Trajectory traj = load_trajectory(run_dir);
  const RunConfig cfg = load_config(join(run_dir, "config.txt"));
  std::string why;
  const auto rep = try_report(traj, cfg, &why);
  if (!rep && std::find(kReportSeries.begin(), kReportSeries.end(), name) != kReportSeries.end()) {
    throw NoBlowup("series '" + name + "' needs a blow-up run: " + why);
  }
  return series_text(traj, rep, name);
}

bool verify(const RunConfig& cfg, const std::string& out_dir, int workers, std::string* text) {
  const ModelParams p = model_params(cfg);
  if (const auto why = regime_violation(p); !why.empty()) throw InvalidArgument("model: " + why);
  make_dir(out_dir);
  const GroundState gs = run_groundstate(cfg, out_dir);
  const auto v = verify_corpus(p, corpus_options(cfg), &gs, workers);
  std::string cert;
  bool ok = v.ok();
  for (const auto& phi : {CutoffProfile::virial(), CutoffProfile::plateau(), CutoffProfile::frequency()}) {
    const auto c = certify(phi);
    cert += to_text(c) + "\n";
    ok = ok && c.ok;
  }
  const std::string corpus = to_text(v);
  write_text(join(out_dir, "corpus.txt"), corpus);
  write_text(join(out_dir, "cutoff.txt"), cert);
  if (text) *text = corpus + cert;
  return ok;
}

}  // namespace inls::app
