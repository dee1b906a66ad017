#include "inls/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "inls/error.hpp"

namespace inls {

ModelParams derive_params(int N, double b, double sigma) {
  if (!std::isfinite(b) || !std::isfinite(sigma)) {
    throw InvalidArgument("derive_params: non-finite b or sigma");
  }
  if (N < 3) throw InvalidArgument("derive_params: N must be >= 3");
  if (b <= 0.0) throw InvalidArgument("derive_params: b must be > 0");
  if (sigma <= 0.0) throw InvalidArgument("derive_params: sigma must be > 0");

  ModelParams m;
  m.N = N;
  m.b = b;
  m.sigma = sigma;
  m.s_c = 0.5 * N - (2.0 - b) / (2.0 * sigma);
  m.sigma_c = 2.0 * N * sigma / (2.0 - b);
  m.beta = (2.0 - sigma * N) / b;
  m.regime_valid = regime_violation(m).empty();
  return m;
}

std::string regime_violation(const ModelParams& m) {
  const double n = m.N;
  std::ostringstream os;
  os.precision(17);
  if (!(m.b < std::min(n / 2.0, 2.0))) {
    os << "b = " << m.b << " violates b < min(N/2, 2) = " << std::min(n / 2.0, 2.0);
    return os.str();
  }
  const double lower = (2.0 - m.b) / n;
  if (!(m.sigma > lower)) {
    os << "sigma = " << m.sigma << " violates sigma > (2-b)/N = " << lower;
    return os.str();
  }
  const double upper = std::min((2.0 - m.b) / (n - 2.0), 2.0 / n);
  if (!(m.sigma < upper)) {
    os << "sigma = " << m.sigma << " violates sigma < min((2-b)/(N-2), 2/N) = " << upper;
    return os.str();
  }
  return {};
}

double unit_sphere_area(int N) {
  const double h = 0.5 * N;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double unit_ball_volume(int N) { return unit_sphere_area(N) / N; }

}  // namespace inls
