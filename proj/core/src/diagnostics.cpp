#include "inls/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "inls/error.hpp"
#include "inls/fft.hpp"
#include "inls/radial_transform.hpp"

namespace inls {

namespace {

double abs_pow(const complex& z, double p) { return std::pow(std::abs(z), p); }

std::vector<complex> forward_transform(const Field& u) {
  std::vector<complex> hat = u.values;
  Fft3::get(u.geometry.resolution()).forward(hat);
  return hat;
}

// sum over the spectrum of m(|xi|^2) |u-hat|^2, scaled to a physical-space integral
template <class Multiplier>
double spectral_sum(const Field& u, Multiplier m) {
  const Geometry& g = u.geometry;
  const auto hat = forward_transform(u);
  const auto& k = g.wavenumber();
  const int n = g.resolution();
  const double h = g.spacing();
  double total = 0.0;
  std::size_t q = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double kij = k[i] * k[i] + k[j] * k[j];
      for (int l = 0; l < n; ++l, ++q) total += m(kij + k[l] * k[l]) * std::norm(hat[q]);
    }
  }
  const double n3 = static_cast<double>(n) * n * n;
  return total * h * h * h / n3;
}

std::array<std::vector<complex>, 3> spectral_gradient(const Field& u) {
  const Geometry& g = u.geometry;
  const int n = g.resolution();
  const auto& k = g.wavenumber();
  const auto hat = forward_transform(u);
  const double n3 = static_cast<double>(n) * n * n;
  std::array<std::vector<complex>, 3> grad;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<complex> d(hat.size());
    std::size_t q = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l, ++q) {
          const int m = axis == 0 ? i : axis == 1 ? j : l;
          const double km = m == n / 2 ? 0.0 : k[m];
          d[q] = complex(0.0, km / n3) * hat[q];
        }
      }
    }
    Fft3::get(n).backward(d);
    grad[axis] = std::move(d);
  }
  return grad;
}

struct FaceData {
  std::vector<double> r;     // face radius
  std::vector<double> vol;   // face area * gap
  std::vector<complex> g;    // (u_{j+1} - u_j) / gap
  std::vector<complex> mid;  // (u_{j+1} + u_j) / 2
  std::vector<double> right; // radius of the right neighbour (ghost for the last face)
};

FaceData faces(const Field& u) {
  const Geometry& m = u.geometry;
  const auto& rs = m.radius();
  const auto& gap = m.face_gap();
  const auto& area = m.face_area();
  const std::size_t n = rs.size();
  FaceData f;
  f.r = m.face_radius();
  f.vol.resize(n);
  f.g.resize(n);
  f.mid.resize(n);
  f.right.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const complex next = j + 1 < n ? u.values[j + 1] : complex(0.0);
    f.vol[j] = area[j] * gap[j];
    f.g[j] = (next - u.values[j]) / gap[j];
    f.mid[j] = 0.5 * (next + u.values[j]);
    f.right[j] = rs[j] + gap[j];
  }
  return f;
}

void require_virial_resolution(const Geometry& g, double R, const CutoffProfile& phi) {
  const double reach = phi.support() * R;
  const double cells = g.is_radial() ? static_cast<double>(g.count_within(reach)) : reach / g.spacing();
  if (cells < 8.0) {
    throw ResolutionError("virial cutoff support [0, " + std::to_string(reach) + "] spans fewer than 8 cells");
  }
}

}  // namespace

bool supports_hdot(const Geometry& g) { return !g.is_radial() || g.dim() == 3; }

double gradient_squared(const Field& u) {
  if (u.geometry.is_radial()) {
    const auto& gap = u.geometry.face_gap();
    const auto& area = u.geometry.face_area();
    const std::size_t n = u.values.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const complex next = j + 1 < n ? u.values[j + 1] : complex(0.0);
      total += area[j] / gap[j] * std::norm(next - u.values[j]);
    }
    return total;
  }
  return spectral_sum(u, [](double k2) { return k2; });
}

double potential_term(const Field& u) {
  const auto& r = u.geometry.radius();
  const auto& w = u.geometry.weight();
  const double b = u.params.b, p = u.params.p();
  double total = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) total += w[j] * std::pow(r[j], -b) * abs_pow(u.values[j], p);
  return total;
}

double lp_integral(const Field& u, double p) {
  const auto& w = u.geometry.weight();
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) total += w[j] * abs_pow(u.values[j], p);
  return total;
}

double hdot_norm(const Field& u, double s) {
  if (!supports_hdot(u.geometry)) {
    throw Unsupported("H-dot^s needs a cartesian3d grid or a radial mesh with N = 3");
  }
  if (u.geometry.is_radial()) return std::sqrt(radial_hdot_squared(u.geometry, u.values, s));
  return std::sqrt(spectral_sum(u, [s](double k2) { return k2 > 0.0 ? std::pow(k2, s) : 0.0; }));
}

double norm(const Field& u, NormKind kind) {
  switch (kind) {
    case NormKind::l2: return std::sqrt(lp_integral(u, 2.0));
    case NormKind::grad_l2: return std::sqrt(gradient_squared(u));
    case NormKind::l_sigma_c: return std::pow(lp_integral(u, u.params.sigma_c), 1.0 / u.params.sigma_c);
    case NormKind::hdot_s: return hdot_norm(u, u.params.s_c);
  }
  return 0.0;
}

MassEnergy mass_energy(const Field& u) {
  MassEnergy me;
  me.mass = lp_integral(u, 2.0);
  me.energy = 0.5 * gradient_squared(u) - potential_term(u) / u.params.p();
  return me;
}

FunctionalP functional_P(const Field& u) {
  const ModelParams& pr = u.params;
  const double G = gradient_squared(u);
  const double pot = potential_term(u);
  const double E = 0.5 * G - pot / pr.p();
  FunctionalP out;
  out.direct = G - (pr.N * pr.sigma + pr.b) / pr.p() * pot;
  out.energy_form = -pr.sigma * pr.s_c * G + 2.0 * (pr.sigma * pr.s_c + 1.0) * E;
  return out;
}

VirialQuantities virial_quantities(const Field& u, double R, const CutoffProfile& phi) {
  if (phi.kind() != CutoffKind::virial_phi) throw InvalidArgument("virial_quantities needs the virial cutoff");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("virial_quantities: R must be > 0");
  const Geometry& geo = u.geometry;
  require_virial_resolution(geo, R, phi);
  const ModelParams& pr = u.params;
  const int N = pr.N;
  const double b = pr.b, sigma = pr.sigma;
  const double coef = 2.0 * sigma / (sigma + 1.0);

  auto phiR = [&](double r) { return R * R * phi.value(r / R); };
  auto dphiR = [&](double r) { return R * phi.d1(r / R); };
  auto d2phiR = [&](double r) { return phi.d2(r / R); };
  auto dlapR = [&](double r) { return phi.laplacian_d1(r / R, N) / R; };

  VirialQuantities v;
  double grad_sq = 0.0, pot = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, hess = 0.0;
  double k2 = 0.0, pot_general = 0.0;

  const auto& rs = geo.radius();
  const auto& w = geo.weight();
  for (std::size_t j = 0; j < rs.size(); ++j) {
    const double r = rs[j];
    const double a2 = std::norm(u.values[j]);
    v.z += w[j] * phiR(r) * a2;
    const double nl = w[j] * std::pow(r, -b) * std::pow(a2, sigma + 1.0);
    pot += nl;
    if (r >= phi.support() * R) {
      k2 += -coef * (-2.0 * N - 2.0 * b / sigma) * nl;
      continue;
    }
    const double d1 = dphiR(r), d2 = d2phiR(r);
    k2 += -coef * (d2 + (N - 1 + b / sigma) * d1 / r - 2.0 * N - 2.0 * b / sigma) * nl;
    pot_general += -coef * (d2 + (N - 1) * d1 / r) * nl + 2.0 / (sigma + 1.0) * (-b * d1 / r) * nl;
  }

  if (geo.is_radial()) {
    const FaceData f = faces(u);
    for (std::size_t j = 0; j < f.r.size(); ++j) {
      const double r = f.r[j];
      const double g2 = std::norm(f.g[j]);
      grad_sq += f.vol[j] * g2;
      if (rs[j] >= phi.support() * R) continue;
      const double d1 = dphiR(r), d2 = d2phiR(r);
      const double gap = f.right[j] - rs[j];
      const double dphi_face = phiR(f.right[j]) - phiR(rs[j]);
      v.zp += 2.0 * (f.vol[j] / gap) * dphi_face * std::imag(std::conj(f.mid[j]) * f.g[j]);
      t1 += 4.0 * f.vol[j] * (d1 / r) * g2;
      t2 += 4.0 * f.vol[j] * (d2 - d1 / r) * g2;
      hess += 4.0 * f.vol[j] * d2 * g2;
      // |u|^2 difference over the face, times (Lap phi_R)'
      const complex next = j + 1 < rs.size() ? u.values[j + 1] : complex(0.0);
      t3 += f.vol[j] * (std::norm(next) - std::norm(u.values[j])) / gap * dlapR(r);
    }
  } else {
    const auto grad = spectral_gradient(u);
    const auto& ax = geo.axis();
    const int n = geo.resolution();
    const double h3 = std::pow(geo.spacing(), 3);
    std::size_t q = 0;
    for (int i = 0; i < n; ++i) {
      for (int jj = 0; jj < n; ++jj) {
        for (int l = 0; l < n; ++l, ++q) {
          const std::array<complex, 3> gq{grad[0][q], grad[1][q], grad[2][q]};
          const double g2 = std::norm(gq[0]) + std::norm(gq[1]) + std::norm(gq[2]);
          grad_sq += h3 * g2;
          const double r = rs[q];
          if (r >= phi.support() * R) continue;
          const std::array<double, 3> xh{ax[i] / r, ax[jj] / r, ax[l] / r};
          const complex radial_d = xh[0] * gq[0] + xh[1] * gq[1] + xh[2] * gq[2];
          const double d1 = dphiR(r), d2 = d2phiR(r);
          const complex ubar = std::conj(u.values[q]);
          v.zp += 2.0 * h3 * d1 * std::imag(radial_d * ubar);
          t1 += 4.0 * h3 * (d1 / r) * g2;
          t2 += 4.0 * h3 * (d2 - d1 / r) * std::norm(radial_d);
          double contraction = 0.0;
          for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) {
              const double H = (d2 - d1 / r) * xh[a] * xh[c] + (a == c ? d1 / r : 0.0);
              contraction += H * std::real(gq[a] * std::conj(gq[c]));
            }
          }
          hess += 4.0 * h3 * contraction;
          t3 += h3 * 2.0 * std::real(ubar * radial_d) * dlapR(r);
        }
      }
    }
  }

  double t4 = 0.0;
  for (std::size_t j = 0; j < rs.size(); ++j) {
    const double r = rs[j];
    if (r >= phi.support() * R) continue;
    const double nl = w[j] * std::pow(r, -b) * std::pow(std::norm(u.values[j]), sigma + 1.0);
    t4 += -coef * (d2phiR(r) + (N - 1 + b / sigma) * dphiR(r) / r) * nl;
  }

  v.zpp = t1 + t2 + t3 + t4;
  v.zpp_general = hess + t3 + pot_general;
  v.P = grad_sq - (N * sigma + b) / pr.p() * pot;
  v.K1 = t1 + t2 - 8.0 * grad_sq;
  v.K2 = k2;
  v.K3 = t3;
  return v;
}

BallIntegrator::BallIntegrator(const Field& u, double p, double radial_power) : geometry_(u.geometry) {
  if (!(p >= 1.0)) throw InvalidArgument("ball integral needs p >= 1");
  const auto& w = geometry_.weight();
  const auto& r = geometry_.radius();
  const std::size_t n = w.size();
  auto term = [&](std::size_t j) {
    const double v = w[j] * abs_pow(u.values[j], p);
    return radial_power == 0.0 ? v : v * std::pow(r[j], radial_power);
  };
  prefix_.assign(n + 1, 0.0);
  if (geometry_.is_radial()) {
    radius_ = geometry_.face_radius();
    for (std::size_t j = 0; j < n; ++j) prefix_[j + 1] = prefix_[j] + term(j);
  } else {
    radius_ = geometry_.sorted_radius();
    const auto& order = geometry_.radial_order();
    for (std::size_t j = 0; j < n; ++j) prefix_[j + 1] = prefix_[j] + term(order[j]);
  }
}

double BallIntegrator::ball(double R) const {
  if (!(R > 0.0)) return 0.0;
  const std::size_t n = radius_.size();
  if (geometry_.is_radial()) {
    const auto it = std::lower_bound(radius_.begin(), radius_.end(), R);
    if (it == radius_.end()) return prefix_[n];
    const auto j = static_cast<std::size_t>(it - radius_.begin());
    const int N = geometry_.dim();
    const double lo = geometry_.cell_lower()[j], hi = radius_[j];
    const double frac = (std::pow(R, N) - std::pow(lo, N)) / (std::pow(hi, N) - std::pow(lo, N));
    return prefix_[j] + (prefix_[j + 1] - prefix_[j]) * std::clamp(frac, 0.0, 1.0);
  }
  const auto k = static_cast<std::size_t>(std::upper_bound(radius_.begin(), radius_.end(), R) - radius_.begin());
  if (k >= n) return prefix_[n];
  const double prev = k == 0 ? 0.0 : radius_[k - 1];
  const double frac = radius_[k] > prev ? (R - prev) / (radius_[k] - prev) : 0.0;
  return prefix_[k] + (prefix_[k + 1] - prefix_[k]) * frac;
}

double window_integral(const Field& u, double R, double p) {
  if (!(R > 0.0)) throw InvalidArgument("window_integral: R must be > 0");
  return BallIntegrator(u, p).ball(R);
}

SeminormResult rho_seminorm(const BallIntegrator& mass, double s_c, double extent, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("rho_seminorm: R must be > 0");
  if (R > extent) throw InvalidArgument("rho_seminorm: R beyond the geometry extent");
  auto f = [&](double r) { return mass.shell(r, 2.0 * r) / std::pow(r, 2.0 * s_c); };
  std::vector<double> ladder{R};
  for (int k = 1;; ++k) {
    const double r = R * std::pow(2.0, k / 4.0);
    if (2.0 * r > extent) break;
    ladder.push_back(r);
  }
  std::size_t best = 0;
  double best_value = f(R);
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    const double v = f(ladder[k]);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  SeminormResult out;
  out.R = R;
  out.value = best_value;
  out.argmax = ladder[best];
  out.ladder_size = static_cast<int>(ladder.size());
  if (ladder.size() > 1) {
    double a = ladder[best == 0 ? 0 : best - 1];
    double c = ladder[std::min(best + 1, ladder.size() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - inv_phi * (c - a), x2 = a + inv_phi * (c - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && c - a > 1e-12 * c; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (c - a);
        f2 = f(x2);
      } else {
        c = x2;
        x2 = x1;
        f2 = f1;
        x1 = c - inv_phi * (c - a);
        f1 = f(x1);
      }
    }
    const double xm = f1 > f2 ? x1 : x2;
    const double fm = std::max(f1, f2);
    if (fm > out.value) {
      out.value = fm;
      out.argmax = xm;
    }
  }
  return out;
}

SeminormResult rho_seminorm(const Field& u, double R) {
  return rho_seminorm(BallIntegrator(u, 2.0), u.params.s_c, u.geometry.extent(), R);
}

SpatialSplit spatial_split(const Field& u, double R, const CutoffProfile& plateau) {
  if (plateau.kind() != CutoffKind::plateau_phi) throw InvalidArgument("spatial_split needs the plateau cutoff");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("spatial_split: R must be > 0");
  SpatialSplit s{u, u};
  const auto& r = u.geometry.radius();
  for (std::size_t j = 0; j < r.size(); ++j) {
    s.inner.values[j] = plateau.value(r[j] / R) * u.values[j];
    s.outer.values[j] = u.values[j] - s.inner.values[j];
  }
  return s;
}

namespace {

// chi-hat(|xi|/rho) cached per integer |m|^2, xi = (pi/L) m
class ChiOnGrid {
 public:
  ChiOnGrid(const Geometry& g, double rho, const CutoffProfile& chi)
      : dk_(std::acos(-1.0) / g.extent()), rho_(rho), chi_(chi) {
    const long half = g.resolution() / 2;
    cache_.assign(static_cast<std::size_t>(3 * half * half + 1), std::numeric_limits<double>::quiet_NaN());
  }
  double operator()(long m2) {
    double& c = cache_[static_cast<std::size_t>(m2)];
    if (std::isnan(c)) c = chi_.hat(dk_ * std::sqrt(static_cast<double>(m2)) / rho_);
    return c;
  }
  double dk() const { return dk_; }

 private:
  double dk_, rho_;
  const CutoffProfile& chi_;
  std::vector<double> cache_;
};

long mode(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

double multiplier_constant(const Geometry& g, double s_c, double rho, const CutoffProfile& chi) {
  if (g.is_radial()) throw Unsupported("the frequency multiplier is only evaluated on cartesian3d grids");
  if (!(rho > 0.0)) throw InvalidArgument("multiplier_constant: rho must be > 0");
  ChiOnGrid table(g, rho, chi);
  const int n = g.resolution();
  double best = 0.0;
  // depends on |m|^2 only
  std::vector<char> seen(static_cast<std::size_t>(3 * (n / 2) * (n / 2) + 1), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const long mi = mode(i, n), mj = mode(j, n), ml = mode(l, n);
        const long m2 = mi * mi + mj * mj + ml * ml;
        if (m2 == 0 || seen[static_cast<std::size_t>(m2)]) continue;
        seen[static_cast<std::size_t>(m2)] = 1;
        const double xi = table.dk() * std::sqrt(static_cast<double>(m2));
        const double v = std::pow(xi, s_c) * std::abs(1.0 - table(m2)) * std::pow(rho, 1.0 - s_c) / xi;
        best = std::max(best, v);
      }
    }
  }
  return best;
}

FrequencySplit frequency_split(const Field& u1, double rho, const CutoffProfile& chi) {
  if (u1.geometry.is_radial()) throw Unsupported("frequency_split needs a cartesian3d grid");
  if (chi.kind() != CutoffKind::frequency_chi) throw InvalidArgument("frequency_split needs the frequency cutoff");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgument("frequency_split: rho must be > 0");
  const Geometry& g = u1.geometry;
  const int n = g.resolution();
  ChiOnGrid table(g, rho, chi);
  auto hat = forward_transform(u1);
  const double n3 = static_cast<double>(n) * n * n;
  std::size_t q = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l, ++q) {
        const long mi = mode(i, n), mj = mode(j, n), ml = mode(l, n);
        hat[q] *= table(mi * mi + mj * mj + ml * ml) / n3;
      }
    }
  }
  Fft3::get(n).backward(hat);
  FrequencySplit out{u1, u1, 0.0};
  out.low.values = std::move(hat);
  for (std::size_t k = 0; k < u1.values.size(); ++k) out.high.values[k] = u1.values[k] - out.low.values[k];
  out.multiplier_constant = multiplier_constant(g, u1.params.s_c, rho, chi);
  return out;
}

BallHolder ball_holder(const Field& u, double R) {
  const ModelParams& pr = u.params;
  BallHolder out;
  out.lhs = std::pow(R, -2.0 * pr.s_c) * window_integral(u, R, 2.0);
  const double lsc = norm(u, NormKind::l_sigma_c);
  out.rhs = std::pow(unit_ball_volume(pr.N), 1.0 - 2.0 / pr.sigma_c) * lsc * lsc;
  return out;
}

std::vector<complex> spectral_derivative(const Field& u, int axis) {
  if (u.geometry.is_radial()) throw Unsupported("spectral derivatives need a cartesian3d grid");
  if (axis < 0 || axis > 2) throw InvalidArgument("axis must be 0, 1 or 2");
  return spectral_gradient(u)[static_cast<std::size_t>(axis)];
}

}  // namespace inls
