#include "inls/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "inls/checkpoint.hpp"
#include "inls/error.hpp"

namespace inls::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(const std::string& text, const std::string& key) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError(key + ": expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, key));
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

struct Entry {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class F>
Entry real(const std::string& key, F field) {
  return {key, [field](const RunConfig& c) { return format_double(field(const_cast<RunConfig&>(c))); },
          [field, key](RunConfig& c, const std::string& v) { field(c) = parse_double(v, key); }};
}

template <class F>
Entry integer(const std::string& key, F field) {
  return {key, [field](const RunConfig& c) { return std::to_string(field(const_cast<RunConfig&>(c))); },
          [field, key](RunConfig& c, const std::string& v) {
            using T = std::remove_reference_t<decltype(field(c))>;
            field(c) = parse_integer<T>(v, key);
          }};
}

template <class F>
Entry text(const std::string& key, F field) {
  return {key, [field](const RunConfig& c) { return field(const_cast<RunConfig&>(c)); },
          [field](RunConfig& c, const std::string& v) { field(c) = v; }};
}

template <class F>
Entry boolean(const std::string& key, F field) {
  return {key, [field](const RunConfig& c) { return std::string(field(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [field, key](RunConfig& c, const std::string& v) { field(c) = parse_bool(v, key); }};
}

template <class F>
Entry list(const std::string& key, F field) {
  return {key, [field](const RunConfig& c) { return list_text(field(const_cast<RunConfig&>(c))); },
          [field, key](RunConfig& c, const std::string& v) { field(c) = parse_list(v, key); }};
}

#define F(expr) [](RunConfig& c) -> auto& { return c.expr; }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      integer("model.N", F(model.N)),
      real("model.b", F(model.b)),
      real("model.sigma", F(model.sigma)),
      text("geometry.kind", F(geometry.kind)),
      real("geometry.extent", F(geometry.extent)),
      integer("geometry.resolution", F(geometry.resolution)),
      real("geometry.stretch", F(geometry.stretch)),
      text("initial.profile", F(initial.profile)),
      real("initial.amplitude", F(initial.amplitude)),
      real("initial.width", F(initial.width)),
      real("initial.center_x", F(initial.center_x)),
      real("initial.center_y", F(initial.center_y)),
      real("initial.center_z", F(initial.center_z)),
      real("initial.lambda", F(initial.lambda)),
      text("initial.path", F(initial.path)),
      {"evolution.scheme", [](const RunConfig& c) { return to_string(c.evolution.scheme); },
       [](RunConfig& c, const std::string& v) {
         try {
           c.evolution.scheme = scheme_from_string(v);
         } catch (const InvalidArgument& e) {
           throw ParseError(e.what());
         }
       }},
      real("evolution.dt0", F(evolution.dt0)),
      real("evolution.cfl", F(evolution.cfl)),
      real("evolution.dt_floor", F(evolution.dt_floor)),
      real("evolution.dt_max", F(evolution.dt_max)),
      real("evolution.growth", F(evolution.growth)),
      real("evolution.grad_ceiling", F(evolution.grad_ceiling)),
      real("evolution.t_end", F(evolution.t_end)),
      integer("evolution.record_every", F(evolution.record_every)),
      list("evolution.snapshot_times", F(evolution.snapshot_times)),
      real("evolution.snapshot_every", F(evolution.snapshot_every)),
      real("evolution.virial_R", F(evolution.virial_R)),
      real("evolution.rho_R", F(evolution.rho_R)),
      real("evolution.window_c1", F(evolution.window_c1)),
      integer("evolution.max_steps", F(evolution.max_steps)),
      boolean("groundstate.solve", F(groundstate.solve)),
      real("groundstate.tol", F(groundstate.tol)),
      real("groundstate.r_max", F(groundstate.r_max)),
      integer("groundstate.resolution", F(groundstate.resolution)),
      real("groundstate.stretch", F(groundstate.stretch)),
      list("analysis.R_ladder", F(analysis.R_ladder)),
      real("analysis.epsilon", F(analysis.epsilon)),
      real("analysis.C1", F(analysis.C1)),
      real("analysis.C2", F(analysis.C2)),
      real("analysis.alpha3", F(analysis.alpha3)),
      real("analysis.A", F(analysis.A)),
      integer("analysis.tau_rungs", F(analysis.tau_rungs)),
      real("analysis.window_floor_fraction", F(analysis.window_floor_fraction)),
      boolean("analysis.corpus", F(analysis.corpus)),
      integer("analysis.corpus_count", F(analysis.corpus_count)),
      integer("analysis.corpus_resolution", F(analysis.corpus_resolution)),
      real("analysis.corpus_extent", F(analysis.corpus_extent)),
      real("analysis.corpus_R", F(analysis.corpus_R)),
      real("analysis.corpus_eta", F(analysis.corpus_eta)),
      integer("analysis.seed", F(analysis.seed)),
      text("analysis.output", F(analysis.output)),
  };
  return e;
}

#undef F

const Entry* find(const std::string& key) {
  for (const auto& e : entries()) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> k;
  for (const auto& e : entries()) k.push_back(e.key);
  return k;
}

void set_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Entry* e = find(key);
  if (!e) throw ParseError("unknown key '" + key + "'");
  e->set(cfg, value);
}

std::string RunConfig::to_text() const {
  std::string out;
  std::string section;
  for (const auto& e : entries()) {
    const std::string s = e.key.substr(0, e.key.find('.'));
    if (s != section) {
      if (!section.empty()) out += "\n";
      section = s;
    }
    out += e.key + " = " + e.get(*this) + "\n";
  }
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + "expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos) throw ParseError(where + "key '" + key + "' has no section");
    try {
      set_value(cfg, key, value);
    } catch (const Error& e) {
      throw ParseError(where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

ModelParams model_params(const RunConfig& cfg) { return derive_params(cfg.model.N, cfg.model.b, cfg.model.sigma); }

Geometry make_geometry(const RunConfig& cfg) {
  const auto kind = geometry_kind_from_string(cfg.geometry.kind);
  if (kind == GeometryKind::radial) {
    return Geometry::radial(cfg.model.N, cfg.geometry.extent, cfg.geometry.resolution, cfg.geometry.stretch);
  }
  if (cfg.model.N != 3) throw InvalidArgument("cartesian3d geometry needs model.N = 3");
  return Geometry::cartesian3d(cfg.geometry.extent, cfg.geometry.resolution);
}

GroundStateOptions groundstate_options(const RunConfig& cfg) {
  GroundStateOptions o;
  o.r_max = cfg.groundstate.r_max;
  o.resolution = cfg.groundstate.resolution;
  o.stretch = cfg.groundstate.stretch;
  return o;
}

PropositionOptions proposition_options(const RunConfig& cfg) {
  PropositionOptions o;
  o.C1 = cfg.analysis.C1;
  o.C2 = cfg.analysis.C2;
  o.alpha3 = cfg.analysis.alpha3;
  o.epsilon = cfg.analysis.epsilon;
  return o;
}

CorpusOptions corpus_options(const RunConfig& cfg) {
  CorpusOptions o;
  o.count = cfg.analysis.corpus_count;
  o.seed = cfg.analysis.seed;
  o.extent = cfg.analysis.corpus_extent;
  o.resolution = cfg.analysis.corpus_resolution;
  o.R = cfg.analysis.corpus_R;
  o.eta = cfg.analysis.corpus_eta;
  return o;
}

void validate(const RunConfig& cfg) {
  const ModelParams p = model_params(cfg);
  if (const auto why = regime_violation(p); !why.empty()) throw InvalidArgument("model: " + why);
  make_geometry(cfg);
  const auto& in = cfg.initial;
  if (in.profile != "gaussian" && in.profile != "ground_state" && in.profile != "file") {
    throw InvalidArgument("initial.profile must be gaussian, ground_state or file");
  }
  if (in.profile == "file" && in.path.empty()) throw InvalidArgument("initial.path is required for profile = file");
  if (in.profile == "ground_state" && !(in.lambda > 0.0)) throw InvalidArgument("initial.lambda must be > 0");
  if (in.profile == "ground_state" && !cfg.groundstate.solve) {
    throw InvalidArgument("initial.profile = ground_state needs groundstate.solve = true");
  }
  inls::validate(cfg.evolution);
  if (!(cfg.groundstate.tol > 0.0)) throw InvalidArgument("groundstate.tol must be > 0");
  const auto& a = cfg.analysis;
  for (double R : a.R_ladder) {
    if (!(R > 0.0)) throw InvalidArgument("analysis.R_ladder entries must be > 0");
  }
  if (!(a.epsilon > 0.0) || !(a.A > 0.0) || !(a.C1 > 0.0) || !(a.C2 > 0.0)) {
    throw InvalidArgument("analysis.epsilon, A, C1 and C2 must be > 0");
  }
  if (a.tau_rungs < 1) throw InvalidArgument("analysis.tau_rungs must be >= 1");
  if (a.corpus_count < 0 || a.corpus_resolution < 16) throw InvalidArgument("analysis corpus size out of range");
}

}  // namespace inls::app
