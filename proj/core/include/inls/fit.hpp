#pragma once

#include <vector>

namespace inls {

// ordinary least squares y = intercept + slope x
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double covariance = 0.0;  // cov(intercept, slope)
  double r2 = 0.0;
  double residual_sd = 0.0;
  int count = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace inls
