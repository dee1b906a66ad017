#pragma once

#include <string>

namespace inls {

// Equation i u_t + Lap u + |x|^-b |u|^(2 sigma) u = 0 in N dimensions.
struct ModelParams {
  int N = 3;
  double b = 0.5;
  double sigma = 0.6;
  double s_c = 0.0;
  double sigma_c = 0.0;
  double beta = 0.0;
  bool regime_valid = false;

  double p() const { return 2.0 * sigma + 2.0; }
  // 2 beta / (1 + beta)
  double spacetime_exponent() const { return 2.0 * beta / (1.0 + beta); }
  bool operator==(const ModelParams&) const = default;
};

ModelParams derive_params(int N, double b, double sigma);

// Empty when the triple is inside the intercritical regime, otherwise a
// sentence naming the first violated bound.
std::string regime_violation(const ModelParams& params);

double unit_sphere_area(int N);
double unit_ball_volume(int N);

}  // namespace inls
