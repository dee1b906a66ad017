#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inls/analysis.hpp"
#include "inls/corpus.hpp"
#include "inls/evolve.hpp"
#include "inls/groundstate.hpp"

namespace inls::app {

struct ModelBlock {
  int N = 3;
  double b = 0.5;
  double sigma = 0.6;
};

struct GeometryBlock {
  std::string kind = "radial";
  double extent = 10.0;
  int resolution = 1000;
  double stretch = 0.0;
};

struct InitialBlock {
  std::string profile = "gaussian";  // gaussian | ground_state | file
  double amplitude = 1.0;
  double width = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double center_z = 0.0;
  double lambda = 1.0;
  std::string path;
};

struct GroundStateBlock {
  bool solve = true;
  double tol = 1e-8;
  double r_max = 200.0;
  int resolution = 4000;
  double stretch = 6.0;
};

struct AnalysisBlock {
  std::vector<double> R_ladder{1.0};
  double epsilon = 0.1;
  double C1 = 1.0;
  double C2 = 0.05;
  double alpha3 = 1.0;
  double A = 1.0;
  int tau_rungs = 8;
  double window_floor_fraction = 0.25;
  bool corpus = false;
  int corpus_count = 100;
  int corpus_resolution = 400;
  double corpus_extent = 16.0;
  double corpus_R = 1.0;
  double corpus_eta = 0.1;
  std::uint64_t seed = 20240601;
  std::string output = "out";
};

struct RunConfig {
  ModelBlock model;
  GeometryBlock geometry;
  InitialBlock initial;
  EvolutionConfig evolution;
  GroundStateBlock groundstate;
  AnalysisBlock analysis;

  bool operator==(const RunConfig& o) const { return to_text() == o.to_text(); }
  // canonical echo; parse_config(to_text()) reproduces the config
  std::string to_text() const;
};

// `section.key = value` lines, `#` comments; errors carry the line number
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

// assigns one key (as in the file) from its text form
void set_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

ModelParams model_params(const RunConfig& cfg);
Geometry make_geometry(const RunConfig& cfg);
GroundStateOptions groundstate_options(const RunConfig& cfg);
PropositionOptions proposition_options(const RunConfig& cfg);
CorpusOptions corpus_options(const RunConfig& cfg);

// runs every module validator; throws on the first problem
void validate(const RunConfig& cfg);

}  // namespace inls::app
