#include "inls/cutoff.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inls/error.hpp"

namespace inls {

std::string to_string(CutoffKind kind) {
  switch (kind) {
    case CutoffKind::virial_phi: return "virial-phi";
    case CutoffKind::plateau_phi: return "plateau-phi";
    case CutoffKind::frequency_chi: return "frequency-chi";
  }
  return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

// segment end values of phi' and phi, starting from (dphi, phi) at its left edge
void advance(const CurvatureSegment& s, double& dphi, double& phi) {
  const double L = s.length, d = s.v1 - s.v0;
  phi += dphi * L + L * L * (0.5 * s.v0 + 0.15 * d);
  dphi += L * (s.v0 + 0.5 * d);
}

std::vector<CurvatureSegment> virial_segments(double m, double q) {
  return {{2.0, 0.2, 2.0, -m}, {2.2, 0.2, -m, -m}, {2.4, 1.0, -m, q}, {3.4, 2.4, q, q}, {5.8, 0.2, q, 0.0}};
}

std::pair<double, double> end_state(double m, double q) {
  double dphi = 4.0, phi = 4.0;
  for (const auto& s : virial_segments(m, q)) advance(s, dphi, phi);
  return {dphi, phi};
}

double bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

double smooth_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double smooth_exp_d1(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

// 4 pi int_0^1 bump(r) r^2 sinc(k r) dr, composite Gauss-Legendre
double bump_transform(double k) {
  constexpr int panels = 32;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
    total += boost::math::quadrature::gauss<double, 20>::integrate(
        [k](double r) {
          const double kr = k * r;
          const double sinc = std::abs(kr) < 1e-8 ? 1.0 - kr * kr / 6.0 : std::sin(kr) / kr;
          return bump(r) * r * r * sinc;
        },
        a, b);
  }
  return 4.0 * kPi * total;
}

struct ChiTable {
  double norm = 1.0;
  double step = 1.0 / 32.0;
  std::vector<double> values;
  ChiTable() {
    norm = 1.0 / bump_transform(0.0);
    const int count = 256 * 32 + 1;
    values.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = norm * bump_transform(i * step);
  }
};

const ChiTable& chi_table() {
  static const ChiTable table;
  return table;
}

}  // namespace

CutoffProfile CutoffProfile::virial() {
  CutoffProfile c;
  c.kind_ = CutoffKind::virial_phi;
  const auto [d0, p0] = end_state(0.0, 0.0);
  const auto [dm, pm] = end_state(1.0, 0.0);
  const auto [dq, pq] = end_state(0.0, 1.0);
  // end_state is affine in (m, q); solve phi'(6) = phi(6) = 0
  const double a11 = dm - d0, a12 = dq - d0, a21 = pm - p0, a22 = pq - p0;
  const double det = a11 * a22 - a12 * a21;
  const double m = (-d0 * a22 + p0 * a12) / det;
  const double q = (-p0 * a11 + d0 * a21) / det;
  c.segments_ = virial_segments(m, q);
  double dphi = 4.0, phi = 4.0;
  for (const auto& s : c.segments_) {
    c.seg_dphi_.push_back(dphi);
    c.seg_phi_.push_back(phi);
    advance(s, dphi, phi);
  }
  double ratio = 4.0;
  const int samples = 200000;
  for (int i = 1; i < samples; ++i) {
    const double r = 2.0 + 4.0 * i / samples;
    const double v = c.value(r), g = c.d1(r);
    if (v > 0.0) ratio = std::max(ratio, g * g / v);
  }
  c.constant_ = ratio;
  return c;
}

CutoffProfile CutoffProfile::plateau() {
  CutoffProfile c;
  c.kind_ = CutoffKind::plateau_phi;
  double mx = 0.0;
  const int samples = 200000;
  for (int i = 0; i <= samples; ++i) mx = std::max(mx, std::abs(c.d1(1.0 + static_cast<double>(i) / samples)));
  c.constant_ = mx;
  return c;
}

CutoffProfile CutoffProfile::frequency() {
  CutoffProfile c;
  c.kind_ = CutoffKind::frequency_chi;
  const auto& t = chi_table();
  c.norm_ = t.norm;
  c.hat_table_ = t.values;
  c.hat_step_ = t.step;
  return c;
}

double CutoffProfile::inner() const {
  switch (kind_) {
    case CutoffKind::virial_phi: return 2.0;
    case CutoffKind::plateau_phi: return 1.0;
    case CutoffKind::frequency_chi: return 0.0;
  }
  return 0.0;
}

double CutoffProfile::support() const {
  switch (kind_) {
    case CutoffKind::virial_phi: return segments_.back().a + segments_.back().length;
    case CutoffKind::plateau_phi: return 2.0;
    case CutoffKind::frequency_chi: return 1.0;
  }
  return 0.0;
}

int CutoffProfile::locate(double r) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (r < segments_[i].a + segments_[i].length) return static_cast<int>(i);
  }
  return static_cast<int>(segments_.size()) - 1;
}

double CutoffProfile::value(double r) const {
  r = std::abs(r);
  switch (kind_) {
    case CutoffKind::virial_phi: {
      if (r <= 2.0) return r * r;
      if (r >= support()) return 0.0;
      const int i = locate(r);
      const auto& s = segments_[static_cast<std::size_t>(i)];
      const double L = s.length, t = (r - s.a) / L, d = s.v1 - s.v0;
      const double t2 = t * t, t4 = t2 * t2;
      return seg_phi_[static_cast<std::size_t>(i)] + seg_dphi_[static_cast<std::size_t>(i)] * L * t +
             L * L * (0.5 * s.v0 * t2 + d * (0.25 * t4 - 0.1 * t4 * t));
    }
    case CutoffKind::plateau_phi: {
      if (r <= 1.0) return 1.0;
      if (r >= 2.0) return 0.0;
      const double g1 = smooth_exp(2.0 - r), g2 = smooth_exp(r - 1.0);
      return g1 / (g1 + g2);
    }
    case CutoffKind::frequency_chi: return norm_ * bump(r);
  }
  return 0.0;
}

double CutoffProfile::d1(double r) const {
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  switch (kind_) {
    case CutoffKind::virial_phi: {
      if (r <= 2.0) return sign * 2.0 * r;
      if (r >= support()) return 0.0;
      const int i = locate(r);
      const auto& s = segments_[static_cast<std::size_t>(i)];
      const double L = s.length, t = (r - s.a) / L, d = s.v1 - s.v0;
      const double t3 = t * t * t;
      return sign * (seg_dphi_[static_cast<std::size_t>(i)] + L * (s.v0 * t + d * (t3 - 0.5 * t3 * t)));
    }
    case CutoffKind::plateau_phi: {
      if (r <= 1.0 || r >= 2.0) return 0.0;
      const double g1 = smooth_exp(2.0 - r), g2 = smooth_exp(r - 1.0);
      const double d1g1 = -smooth_exp_d1(2.0 - r), d1g2 = smooth_exp_d1(r - 1.0);
      const double s = g1 + g2;
      return sign * (d1g1 * g2 - g1 * d1g2) / (s * s);
    }
    case CutoffKind::frequency_chi: {
      if (r >= 1.0) return 0.0;
      const double w = 1.0 - r * r;
      return sign * norm_ * bump(r) * (-2.0 * r / (w * w));
    }
  }
  return 0.0;
}

double CutoffProfile::d2(double r) const {
  if (kind_ != CutoffKind::virial_phi) throw Unsupported("second derivative is only tabulated for virial-phi");
  r = std::abs(r);
  if (r <= 2.0) return 2.0;
  if (r >= support()) return 0.0;
  const auto& s = segments_[static_cast<std::size_t>(locate(r))];
  const double t = (r - s.a) / s.length;
  return s.v0 + (s.v1 - s.v0) * t * t * (3.0 - 2.0 * t);
}

double CutoffProfile::d3(double r) const {
  if (kind_ != CutoffKind::virial_phi) throw Unsupported("third derivative is only tabulated for virial-phi");
  r = std::abs(r);
  if (r <= 2.0 || r >= support()) return 0.0;
  const auto& s = segments_[static_cast<std::size_t>(locate(r))];
  const double t = (r - s.a) / s.length;
  return (s.v1 - s.v0) * 6.0 * t * (1.0 - t) / s.length;
}

double CutoffProfile::d4(double r) const {
  if (kind_ != CutoffKind::virial_phi) throw Unsupported("fourth derivative is only tabulated for virial-phi");
  r = std::abs(r);
  if (r <= 2.0 || r >= support()) return 0.0;
  const auto& s = segments_[static_cast<std::size_t>(locate(r))];
  const double t = (r - s.a) / s.length;
  return (s.v1 - s.v0) * (6.0 - 12.0 * t) / (s.length * s.length);
}

double CutoffProfile::laplacian_d1(double r, int N) const {
  if (r <= 2.0) return 0.0;
  return d3(r) + (N - 1) * (d2(r) / r - d1(r) / (r * r));
}

double CutoffProfile::bilaplacian(double r, int N) const {
  if (r <= 2.0) return 0.0;
  const double r2 = r * r;
  const double lap_dd = d4(r) + (N - 1) * (d3(r) / r - 2.0 * d2(r) / r2 + 2.0 * d1(r) / (r2 * r));
  return lap_dd + (N - 1) / r * laplacian_d1(r, N);
}

double CutoffProfile::hat(double k) const {
  if (kind_ != CutoffKind::frequency_chi) throw Unsupported("hat() is only defined for frequency-chi");
  k = std::abs(k);
  const double kmax = hat_step_ * static_cast<double>(hat_table_.size() - 1);
  if (k >= kmax) return norm_ * bump_transform(k);
  // cubic Lagrange on the uniform table
  const double x = k / hat_step_;
  auto i = static_cast<long>(x);
  const long last = static_cast<long>(hat_table_.size()) - 1;
  i = std::clamp(i - 1, 0L, last - 3);
  const double t = x - static_cast<double>(i);
  const double* y = hat_table_.data() + i;
  const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  const double l1 = t * (t - 2) * (t - 3) / 2.0;
  const double l2 = -t * (t - 1) * (t - 3) / 2.0;
  const double l3 = t * (t - 1) * (t - 2) / 6.0;
  return l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3];
}

CutoffCertificate certify(const CutoffProfile& phi, int samples) {
  CutoffCertificate c;
  c.kind = phi.kind();
  c.samples = samples;
  c.lo = 0.0;
  c.hi = phi.support();
  c.min_value = INFINITY;
  c.max_value = -INFINITY;
  c.max_d2 = -INFINITY;
  for (int i = 0; i <= samples; ++i) {
    const double r = c.hi * static_cast<double>(i) / samples;
    const double v = phi.value(r), g = phi.d1(r);
    c.min_value = std::min(c.min_value, v);
    c.max_value = std::max(c.max_value, v);
    c.max_abs_d1 = std::max(c.max_abs_d1, std::abs(g));
    switch (phi.kind()) {
      case CutoffKind::virial_phi:
        c.max_d2 = std::max(c.max_d2, phi.d2(r));
        if (v > 0.0) c.max_ratio = std::max(c.max_ratio, g * g / v);
        if (r <= 2.0) c.inner_error = std::max(c.inner_error, std::abs(v - r * r));
        break;
      case CutoffKind::plateau_phi:
        if (r <= 1.0) c.inner_error = std::max(c.inner_error, std::abs(v - 1.0));
        break;
      case CutoffKind::frequency_chi: break;
    }
  }
  for (int i = 0; i <= samples / 10; ++i) {
    const double r = c.hi * (1.0 + static_cast<double>(i) / samples);
    c.outer_max = std::max(c.outer_max, std::abs(phi.value(r)));
  }
  switch (phi.kind()) {
    case CutoffKind::virial_phi:
      c.ok = c.min_value >= 0.0 && c.max_d2 <= 2.0 + 1e-12 && c.max_ratio <= phi.recorded_constant() * (1.0 + 1e-12) &&
             c.inner_error < 1e-12 && c.outer_max == 0.0;
      break;
    case CutoffKind::plateau_phi:
      c.ok = c.min_value >= 0.0 && c.max_value <= 1.0 && c.inner_error == 0.0 && c.outer_max == 0.0 &&
             c.max_abs_d1 <= phi.recorded_constant() * (1.0 + 1e-12);
      break;
    case CutoffKind::frequency_chi: {
      c.integral = 4.0 * kPi * boost::math::quadrature::tanh_sinh<double>().integrate(
                                   [&](double r) { return phi.value(r) * r * r; }, 0.0, 1.0);
      c.ok = c.min_value >= 0.0 && c.outer_max == 0.0 && std::abs(c.integral - 1.0) < 1e-10 &&
             std::abs(phi.hat(0.0) - 1.0) < 1e-12;
      break;
    }
  }
  return c;
}

std::string to_text(const CutoffCertificate& c) {
  std::ostringstream os;
  os.precision(17);
  os << "kind = " << to_string(c.kind) << "\n"
     << "samples = " << c.samples << "\n"
     << "interval = [" << c.lo << ", " << c.hi << "]\n"
     << "min_value = " << c.min_value << "\n"
     << "max_value = " << c.max_value << "\n"
     << "max_abs_d1 = " << c.max_abs_d1 << "\n";
  if (c.kind == CutoffKind::virial_phi) {
    os << "max_d2 = " << c.max_d2 << "\n"
       << "max_gradient_ratio = " << c.max_ratio << "\n"
       << "inner_error = " << c.inner_error << "\n";
  }
  if (c.kind == CutoffKind::plateau_phi) os << "inner_error = " << c.inner_error << "\n";
  if (c.kind == CutoffKind::frequency_chi) os << "integral = " << c.integral << "\n";
  os << "outer_max = " << c.outer_max << "\n"
     << "ok = " << (c.ok ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace inls
