#pragma once

#include <cstdint>
#include <vector>

#include "inls/cutoff.hpp"
#include "inls/field.hpp"

namespace inls {

enum class NormKind { l2, grad_l2, l_sigma_c, hdot_s };

// hdot_s uses s = s_c
double norm(const Field& u, NormKind kind);
double hdot_norm(const Field& u, double s);
// cartesian3d, or radial with N = 3
bool supports_hdot(const Geometry& g);

// ||grad u||^2; radial meshes use face differences with a zero ghost outside
double gradient_squared(const Field& u);
// int |x|^-b |u|^(2 sigma + 2)
double potential_term(const Field& u);
// int |u|^p
double lp_integral(const Field& u, double p);

struct MassEnergy {
  double mass = 0.0;
  double energy = 0.0;
};
MassEnergy mass_energy(const Field& u);

struct VirialQuantities {
  double z = 0.0;
  double zp = 0.0;
  double zpp = 0.0;          // radial form
  double zpp_general = 0.0;  // Hessian form
  // zpp = 8 P + K1 + K2 + K3
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double P = 0.0;
};

// phi_R(x) = R^2 phi(|x|/R) with phi the virial cutoff
VirialQuantities virial_quantities(const Field& u, double R, const CutoffProfile& phi);

struct FunctionalP {
  double direct = 0.0;       // ||grad u||^2 - (N sigma + b)/(2 sigma + 2) int |x|^-b |u|^(2 sigma + 2)
  double energy_form = 0.0;  // -sigma s_c ||grad u||^2 + 2 (sigma s_c + 1) E
};
FunctionalP functional_P(const Field& u);

// Cumulative int_{|x| <= R} |x|^radial_power |u|^p, continuous and non-decreasing in R. On
// radial meshes the cell containing R contributes its volume fraction; on
// cartesian grids samples are swept in order of |x| and the next one is
// phased in linearly between consecutive radii.
class BallIntegrator {
 public:
  BallIntegrator(const Field& u, double p, double radial_power = 0.0);
  double ball(double R) const;
  double shell(double r0, double r1) const { return ball(r1) - ball(r0); }
  double total() const { return prefix_.back(); }

 private:
  Geometry geometry_;
  std::vector<double> prefix_;  // prefix_[k] = sum of the first k contributions
  std::vector<double> radius_;  // radial: cell faces; cartesian: sorted sample radii
};

double window_integral(const Field& u, double R, double p);

struct SeminormResult {
  double R = 0.0;
  double value = 0.0;
  double argmax = 0.0;
  int ladder_size = 0;
};

// sup_{R' >= R} R'^(-2 s_c) int_{R' <= |x| <= 2R'} |u|^2 on the quarter-octave
// ladder R' = R 2^(k/4), 2R' <= extent, with golden-section refinement
SeminormResult rho_seminorm(const Field& u, double R);
SeminormResult rho_seminorm(const BallIntegrator& mass, double s_c, double extent, double R);

struct SpatialSplit {
  Field inner;
  Field outer;
};
SpatialSplit spatial_split(const Field& u, double R, const CutoffProfile& plateau);

struct FrequencySplit {
  Field low;
  Field high;
  double multiplier_constant = 0.0;
};
FrequencySplit frequency_split(const Field& u1, double rho, const CutoffProfile& chi);

// max over nonzero grid frequencies of |xi|^s_c |1 - chi-hat(xi/rho)| rho^(1-s_c) / |xi|
double multiplier_constant(const Geometry& g, double s_c, double rho, const CutoffProfile& chi);

// R^(-2 s_c) int_{|x| <= R} |u|^2 and the Holder bound omega_N^(1 - 2/sigma_c) ||u||^2_{sigma_c}
struct BallHolder {
  double lhs = 0.0;
  double rhs = 0.0;
};
BallHolder ball_holder(const Field& u, double R);

// spectral derivatives on cartesian grids: d/dx_axis u, Nyquist mode dropped
std::vector<complex> spectral_derivative(const Field& u, int axis);

}  // namespace inls
