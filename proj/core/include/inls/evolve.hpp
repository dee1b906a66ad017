#pragma once

#include <limits>
#include <string>
#include <vector>

#include "inls/cutoff.hpp"
#include "inls/field.hpp"

namespace inls {

enum class Scheme { strang };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct EvolutionConfig {
  Scheme scheme = Scheme::strang;
  double dt0 = 1e-4;
  double cfl = 0.05;
  double dt_floor = 1e-12;
  double dt_max = 1e-2;
  double growth = 1.1;
  double grad_ceiling = 0.0;  // 0 means 1e3 * ||grad u0||
  double t_end = 1.0;
  int record_every = 10;
  std::vector<double> snapshot_times;
  double snapshot_every = 0.0;  // 0 disables the periodic snapshots
  double virial_R = 1.0;
  double rho_R = 0.0;      // 0 means virial_R
  double window_c1 = 1.0;  // c1 in R(t) = c_{u0} ||grad u||^-beta
  long max_steps = 50'000'000;
};

// throws InvalidArgument naming the first contradiction
void validate(const EvolutionConfig& cfg);

struct DiagnosticRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_l2 = 0.0;
  double l_sigma_c = 0.0;
  double hdot_sc = 0.0;  // NaN when the geometry has no transform path
  double potential = 0.0;
  double z_R = 0.0;
  double zp_R = 0.0;
  double zpp_R = 0.0;
  double rho_R = 0.0;
  double window_R = 0.0;
  double window_int = 0.0;
};

// the csv header, in column order
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const DiagnosticRecord& r);

// fixed inputs for the per-record diagnostics of one run
struct RecordContext {
  double virial_R = 1.0;
  double rho_R = 1.0;
  double window_c = 0.0;  // c_{u0}
  CutoffProfile phi = CutoffProfile::virial();
};

// c1 max(||u0||_2, ||u0||_2^((2 sigma + 2 - sigma N)/b))
double window_constant(const Field& u0, double c1);
RecordContext record_context(const Field& u0, const EvolutionConfig& cfg);
DiagnosticRecord make_record(const Field& u, double dt, const RecordContext& ctx);

enum class Termination { horizon_reached, blowup_detected, invalid_state };
std::string to_string(Termination t);

struct Snapshot {
  double time = 0.0;
  Field field;
};

struct Trajectory {
  ModelParams params;
  Geometry geometry;
  EvolutionConfig config;
  std::vector<DiagnosticRecord> records;
  std::vector<Snapshot> snapshots;
  Field initial_state;
  Field final_state;
  Termination termination = Termination::horizon_reached;
  double t_last = 0.0;
  bool dt_floor_hit = false;
  bool hdot_available = true;
  long steps = 0;
  double grad_ceiling = 0.0;
  double window_c = 0.0;
  std::vector<std::string> log;
};

// u * exp(i dt |x|^-b |u|^(2 sigma)) samplewise
Field nonlinear_phase_step(const Field& u, double dt);
// exact Fourier multiplier (cartesian3d) or Crank-Nicolson (radial) for i u_t = -Lap u
Field kinetic_step(const Field& u, double dt);

Trajectory evolve_run(const Field& u0, const EvolutionConfig& cfg);

}  // namespace inls
