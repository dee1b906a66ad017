#pragma once

#include <string>
#include <vector>

#include "inls/field.hpp"

namespace inls {

// Radial ODE V'' + (N-1)/r V' + r^-b V^(2 sigma + 1) - V^(sigma_c - 1) = 0,
// started from V = a - A r^(2-b), A = a^(2 sigma + 1) / ((2-b)(N-b)).
enum class ShootKind { crosses_zero, blows_up, decays, indeterminate };

std::string to_string(ShootKind kind);

struct ShootOutcome {
  ShootKind kind = ShootKind::indeterminate;
  double r = 0.0;  // radius where the outcome was decided
  double V = 0.0;
  double dV = 0.0;
};

struct ShootOptions {
  double r0 = 1e-5;
  double rtol = 1e-9;
  double decay_threshold = 1e-3;
};

// blows_up means the orbit turns upward (V' > 0 with the defocusing term
// dominant) before reaching zero
ShootOutcome shoot_radial(const ModelParams& params, double a, double r_max, const ShootOptions& opt = {});

struct ShootSample {
  double r, V, dV;
};
ShootOutcome shoot_radial(const ModelParams& params, double a, double r_max, const ShootOptions& opt,
                          std::vector<ShootSample>* path);

struct GroundStateOptions {
  double r_max = 200.0;
  int resolution = 4000;
  double stretch = 6.0;
  double a_start = 1e-3;
  double a_limit = 1e4;
  double shoot_r_max = 1000.0;
};

struct GroundState {
  ModelParams params;
  Geometry mesh;
  std::vector<double> profile;
  double shoot_param = 0.0;
  double bracket_lo = 0.0;  // escapes upward
  double bracket_hi = 0.0;  // crosses zero
  double tail_exponent = 0.0;
  double norm_sigma_c = 0.0;
  double grad_norm = 0.0;
  double potential = 0.0;  // int |x|^-b V^(2 sigma + 2)
  double mass = 0.0;
  double sharp_constant = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  int newton_iterations = 0;

  Field field() const;
};

// m in V ~ C r^-m: 2/(sigma_c - 2) when that exceeds N - 2, else N - 2
double tail_exponent(const ModelParams& params);

GroundState solve_ground_state(const ModelParams& params, double tol, const GroundStateOptions& opt = {});

// max_j |L u + r^-b |u|^(2 sigma) u - |u|^(sigma_c - 2) u| with the
// flux-form Laplacian and a power-law ghost beyond the last cell
double elliptic_residual(const Field& u);

// int |x|^-b |u|^(2 sigma + 2) / ((sigma+1)/||V||^(2 sigma) ||grad u||^2 ||u||_{sigma_c}^(2 sigma))
double gn_sharp_check(const GroundState& gs, const Field& u);

ScaledGroundStateProfile scaled_profile(const GroundState& gs, double lambda = 1.0);

void write_ground_state(const std::string& path, const GroundState& gs);

}  // namespace inls
