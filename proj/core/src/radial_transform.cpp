#include "inls/radial_transform.hpp"

#include <cmath>
#include <numbers>

#include "inls/error.hpp"

namespace inls {

namespace {

// node values of r u on [0, r_0, ..., r_{n-1}, R]; zero at both ends
struct Nodes {
  std::vector<double> r;
  std::vector<std::complex<double>> jump;  // slope_{i-1} - slope_i at node i
};

Nodes build_nodes(const Geometry& g, const std::vector<std::complex<double>>& u) {
  if (!g.is_radial()) throw Unsupported("radial sine transform needs a radial mesh");
  const auto& rs = g.radius();
  const std::size_t n = rs.size();
  std::vector<double> r(n + 2);
  std::vector<std::complex<double>> f(n + 2);
  r[0] = 0.0;
  f[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    r[j + 1] = rs[j];
    f[j + 1] = rs[j] * u[j];
  }
  r[n + 1] = g.extent();
  f[n + 1] = 0.0;
  std::vector<std::complex<double>> slope(n + 1);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) slope[i] = (f[i + 1] - f[i]) / (r[i + 1] - r[i]);
  Nodes nodes;
  nodes.r = r;
  nodes.jump.assign(r.size(), 0.0);
  for (std::size_t i = 1; i + 1 < r.size(); ++i) nodes.jump[i] = slope[i - 1] - slope[i];
  nodes.jump.front() = -slope.front();
  nodes.jump.back() = slope.back();
  return nodes;
}

// Sum over linear segments telescopes to k^-2 sum_i jump_i sin(k r_i)
std::complex<double> transform(const Nodes& nodes, double k) {
  if (k == 0.0) return 0.0;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < nodes.r.size(); ++i) acc += nodes.jump[i] * std::sin(k * nodes.r[i]);
  return acc / (k * k);
}

}  // namespace

std::complex<double> radial_sine_transform(const Geometry& mesh, const std::vector<std::complex<double>>& u, double k) {
  if (u.size() != mesh.size()) throw InvalidArgument("radial_sine_transform: size mismatch");
  return transform(build_nodes(mesh, u), k);
}

FrequencyGrid radial_frequency_grid(const Geometry& mesh) {
  const double R = mesh.extent();
  const double dk = std::numbers::pi / (2.0 * R);
  const double k1 = 24.0;
  double hmin = mesh.radius()[0] * 2.0;
  const double kmax = std::max(4.0 * std::numbers::pi / hmin, 4.0 * k1);
  FrequencyGrid grid;
  // uniform trapezoid on [0, k1]
  const int nu = std::max(8, static_cast<int>(std::ceil(k1 / dk)));
  const double hu = k1 / nu;
  for (int i = 0; i <= nu; ++i) {
    grid.k.push_back(i * hu);
    grid.w.push_back(i == 0 || i == nu ? 0.5 * hu : hu);
  }
  // trapezoid in log k on [k1, kmax], dk = k d(ln k)
  const int per_decade = 32;
  const int nl = std::max(4, static_cast<int>(std::ceil(per_decade * std::log10(kmax / k1))));
  const double hl = std::log(kmax / k1) / nl;
  grid.w.back() += 0.5 * hl * k1;
  for (int i = 1; i <= nl; ++i) {
    const double k = k1 * std::exp(i * hl);
    grid.k.push_back(k);
    grid.w.push_back((i == nl ? 0.5 : 1.0) * hl * k);
  }
  return grid;
}

double radial_hdot_squared(const Geometry& mesh, const std::vector<std::complex<double>>& u, double s) {
  if (mesh.dim() != 3) throw Unsupported("radial H-dot^s is implemented for N = 3 only");
  if (u.size() != mesh.size()) throw InvalidArgument("radial_hdot_squared: size mismatch");
  const Nodes nodes = build_nodes(mesh, u);
  const FrequencyGrid grid = radial_frequency_grid(mesh);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.k.size(); ++i) {
    const double k = grid.k[i];
    if (k == 0.0) continue;
    total += grid.w[i] * std::pow(k, 2.0 * s) * std::norm(transform(nodes, k));
  }
  return 8.0 * total;
}

}  // namespace inls
