#include "inls/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "inls/error.hpp"

namespace inls {

const std::string* Checkpoint::find(const std::string& key) const {
  for (const auto& [k, v] : extra) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& context) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(context + ": cannot parse number '" + text + "'");
  return v;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw ParseError(context + ": cannot parse integer '" + text + "'");
  return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const Field& f, const HeaderEntries& extra) {
  f.require_valid("write_checkpoint");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const auto& p = f.params;
  const auto& g = f.geometry;
  out << "N = " << p.N << "\n";
  out << "b = " << format_double(p.b) << "\n";
  out << "sigma = " << format_double(p.sigma) << "\n";
  out << "s_c = " << format_double(p.s_c) << "\n";
  out << "sigma_c = " << format_double(p.sigma_c) << "\n";
  out << "beta = " << format_double(p.beta) << "\n";
  out << "regime_valid = " << (p.regime_valid ? "true" : "false") << "\n";
  out << "geometry.kind = " << to_string(g.kind()) << "\n";
  out << "geometry.dim = " << g.dim() << "\n";
  out << "geometry.extent = " << format_double(g.extent()) << "\n";
  out << "geometry.resolution = " << g.resolution() << "\n";
  out << "geometry.stretch = " << format_double(g.stretch()) << "\n";
  out << "geometry.origin_offset = " << (g.origin_offset() ? "true" : "false") << "\n";
  out << "time = " << format_double(f.time) << "\n";
  for (const auto& [k, v] : extra) out << k << " = " << v << "\n";
  for (const auto& z : f.values) out << format_double(z.real()) << ' ' << format_double(z.imag()) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::map<std::string, std::string> header;
  HeaderEntries order;
  std::string line;
  std::vector<complex> values;
  long lineno = 0;
  bool in_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string ctx = path + ":" + std::to_string(lineno);
    if (!in_data) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        header[key] = val;
        order.emplace_back(key, val);
        continue;
      }
      in_data = true;
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto sp = t.find_first_of(" \t");
    if (sp == std::string::npos) throw ParseError(ctx + ": expected 're im'");
    values.emplace_back(parse_double(t.substr(0, sp), ctx), parse_double(t.substr(sp + 1), ctx));
  }

  auto need = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw ParseError(path + ": missing header key '" + key + "'");
    return it->second;
  };
  const ModelParams params = derive_params(parse_int(need("N"), path), parse_double(need("b"), path),
                                           parse_double(need("sigma"), path));
  const GeometryKind kind = geometry_kind_from_string(need("geometry.kind"));
  const double extent = parse_double(need("geometry.extent"), path);
  const int res = parse_int(need("geometry.resolution"), path);
  Geometry g = kind == GeometryKind::radial
                   ? Geometry::radial(parse_int(need("geometry.dim"), path), extent, res,
                                      parse_double(need("geometry.stretch"), path))
                   : Geometry::cartesian3d(extent, res);
  if (values.size() != g.size()) {
    throw ParseError(path + ": expected " + std::to_string(g.size()) + " samples, found " +
                     std::to_string(values.size()));
  }
  static const char* known[] = {"N", "b", "sigma", "s_c", "sigma_c", "beta", "regime_valid", "geometry.kind",
                                "geometry.dim", "geometry.extent", "geometry.resolution", "geometry.stretch",
                                "geometry.origin_offset", "time"};
  Checkpoint cp{Field{g, params, std::move(values), parse_double(need("time"), path)}, {}};
  for (const auto& [k, v] : order) {
    bool is_known = false;
    for (const char* kk : known) is_known = is_known || k == kk;
    if (!is_known) cp.extra.emplace_back(k, v);
  }
  cp.field.require_valid("read_checkpoint");
  return cp;
}

}  // namespace inls
