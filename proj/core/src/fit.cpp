#include "inls/fit.hpp"

#include <cmath>

#include "inls/error.hpp"

namespace inls {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("linear_fit: x and y differ in length");
  if (x.size() < 3) throw InvalidArgument("linear_fit: need at least three points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InvalidArgument("linear_fit: x values are all equal");
  LinearFit f;
  f.count = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    sse += e * e;
  }
  f.residual_sd = std::sqrt(sse / (n - 2.0));
  f.slope_stderr = f.residual_sd / std::sqrt(sxx);
  f.intercept_stderr = f.residual_sd * std::sqrt(1.0 / n + mx * mx / sxx);
  f.covariance = -mx * f.residual_sd * f.residual_sd / sxx;
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

}  // namespace inls
