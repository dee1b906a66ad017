#pragma once

#include <string>
#include <vector>

#include "inls/evolve.hpp"
#include "inls/fit.hpp"
#include "inls/groundstate.hpp"

namespace inls {

// [int_{|x|>=R} |x|^-b |u|^(2 sigma + 2) - eta ||grad u||^2] R^(2(1-s_c)) rho(u,R)^-((2 sigma + 2 - sigma N)/(2 - sigma N));
// -infinity when both rho and the outer integral vanish
double check_annulus_gn(const Field& u, double R, double eta);

struct VirialSlack {
  double c_needed = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool degenerate = false;  // denominator zero
};

// [8 sigma s_c ||grad u||^2 + zpp - 16 (sigma s_c + 1) E0] /
// [R^-2 int_{2R<=|x|<=6R} |u|^2 + int_{|x|>=R} |x|^-b |u|^(2 sigma + 2)]
VirialSlack virial_lemma_slack(const Field& u, double R, double E0, double zpp);

// int |x|^-b |u|^(2 sigma + 2) / (||grad u||^(2 sigma s_c + 2) ||u||_2^(2 sigma (1 - s_c)))
double check_gnf(const Field& u);

struct BlowupTime {
  double t_star = 0.0;
  double lo = 0.0;  // last recorded time
  double hi = 0.0;
  double stderr_ = 0.0;
  double p_fit = 0.0;  // exponent used in the linearisation
  double r2 = 0.0;
  int points = 0;
};

// Regresses grad^(-1/p) on t over the last decade of growth for p on a
// grid and keeps the best linear fit; T* is its zero crossing.
BlowupTime estimate_blowup_time(const std::vector<double>& t, const std::vector<double>& grad);

struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
};

struct ReportOptions {
  double window_floor_fraction = 0.25;
};

struct BlowupReport {
  BlowupTime t_star;
  LinearFit rate_fit;  // log grad vs -log(T* - t)
  double lower_rate_exponent = 0.0;
  double rate_bound = 0.0;  // (1 - s_c)/2
  double growth = 0.0;      // grad_last / grad_first

  double spacetime_exponent = 0.0;
  std::vector<SeriesPoint> spacetime_ratio;  // (t, r(t))
  double spacetime_max_min = 0.0;            // over the final decade
  int final_decade_records = 0;

  LinearFit log_fit;  // log ||u||_{sigma_c} vs log |log(T* - t)|
  double gamma_hat = 0.0;
  double gamma_lower = 0.0;

  std::vector<SeriesPoint> hsc_envelope;  // running max of ||u||_{H-dot^s_c}
  double hsc_mid = 0.0;
  double hsc_final = 0.0;
  double hsc_ratio = 0.0;
  bool hsc_available = true;

  double window_constant = 0.0;
  std::vector<double> conc_t, conc_R, conc_int;
  double window_shrink = 0.0;
  double window_floor_min = 0.0;
  double window_floor_median = 0.0;
  bool window_floor_ok = false;

  double energy_ratio_mean = 0.0;  // potential / grad^2 over the final decade; limit sigma + 1
  double energy_ratio_target = 0.0;
};

BlowupReport blowup_report(const Trajectory& traj, const ReportOptions& opt = {});

// records with T* - t <= 10 (T* - t_last), t < T*
std::vector<std::size_t> final_decade(const std::vector<double>& t, double t_star, double t_last);

struct PropositionOptions {
  double C1 = 1.0;
  double C2 = 0.05;
  double alpha3 = 1.0;
  double epsilon = 0.1;
};

struct PropositionQuantities {
  double tau0 = 0.0;
  double A = 0.0;
  double M0 = 0.0;
  double M_infinity = 0.0;
  double rho_at_window = 0.0;
  double weighted_dispersion = 0.0;
  double lambda_v = 0.0;
  double F_star = 0.0;
  double D_star = 0.0;
  double window_mass = 0.0;
  double G_eps = 0.0;
  double A_eps = 0.0;
};

// tau0 must coincide with a stored snapshot time
PropositionQuantities proposition_quantities(const Trajectory& traj, const GroundState& gs, double tau0, double A,
                                             const PropositionOptions& opt = {});

struct PropositionLadder {
  std::vector<PropositionQuantities> rows;        // at A
  std::vector<PropositionQuantities> rows_twice;  // at 2A
  bool monotone = true;  // M_infinity(2A) <= M_infinity(A) on every rung
  double alpha1_hat = 0.0;
  double alpha2_hat = 0.0;
  double alpha3_hat = 0.0;
  double window_min = 0.0;
  double window_median = 0.0;
  bool window_floor_ok = false;  // window_min >= C2
};

// geometric rungs (t_last/2) 2^-k, snapped to the latest snapshot at or below each
std::vector<double> tau_ladder(const Trajectory& traj, int rungs = 8);

PropositionLadder proposition_ladder(const Trajectory& traj, const GroundState& gs, double A,
                                     const PropositionOptions& opt = {}, int rungs = 8);

double median(std::vector<double> v);

std::string to_text(const BlowupReport& r);
std::string to_text(const PropositionLadder& l);

}  // namespace inls
