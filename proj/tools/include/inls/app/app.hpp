#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inls/app/config.hpp"

namespace inls::app {

struct RunSummary {
  std::string status = "ok";  // ok | no-blowup | error: <message>
  std::string termination;
  double energy0 = 0.0;
  double t_last = 0.0;
  double t_star = 0.0;
  double p_hat = 0.0;
  double gamma_hat = 0.0;
  std::optional<CorpusConstants> corpus;
};

// solve, write groundstate.chk and groundstate.txt into out_dir
GroundState run_groundstate(const RunConfig& cfg, const std::string& out_dir);

struct RunOutput {
  RunSummary summary;
  Trajectory trajectory;
  std::optional<GroundState> groundstate;
  std::optional<BlowupReport> report;
  std::optional<PropositionLadder> ladder;
};

// everything `inlslab run` does; out_dir is created if needed
RunOutput run_config(const RunConfig& cfg, const std::string& out_dir, int workers = 1);

struct SweepRow {
  std::string value;
  std::string dir;
  RunSummary summary;
};

// one run per value in out_dir/NNN/ (NNN the value index), then out_dir/summary.csv
std::vector<SweepRow> sweep(const RunConfig& cfg, const std::string& axis, const std::vector<std::string>& values,
                            const std::string& out_dir, int workers);
std::string summary_csv(const std::vector<SweepRow>& rows, const std::string& axis);

const std::vector<std::string>& series_names();
// two-column text for a run directory written by run_config
std::string export_series(const std::string& run_dir, const std::string& name);

// corpus inequality suite and cutoff certificates; returns true when every check holds
bool verify(const RunConfig& cfg, const std::string& out_dir, int workers, std::string* text = nullptr);

// rebuild the record-level trajectory from a run directory
Trajectory load_trajectory(const std::string& run_dir);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace inls::app
