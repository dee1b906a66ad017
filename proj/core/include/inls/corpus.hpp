#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inls/field.hpp"
#include "inls/groundstate.hpp"

namespace inls {

// Smooth radial closed forms. A shell is c (e^{-((r-r0)/w)^2} + e^{-((r+r0)/w)^2}) e^{i k r^2},
// which is even in r and so smooth through the origin; a bump is
// c exp(1 - 1/(1 - (r/w)^2)) e^{i k r^2} on r < w.
struct CorpusTerm {
  enum Kind { shell, bump } kind = shell;
  complex coeff{1.0, 0.0};
  double center = 0.0;
  double width = 1.0;
  double chirp = 0.0;
};

struct CorpusSpec {
  std::vector<CorpusTerm> terms;
  complex operator()(double r) const;
};

std::vector<CorpusSpec> make_corpus(int count, std::uint64_t seed);
Field sample_corpus_field(const CorpusSpec& spec, const Geometry& geometry, const ModelParams& params);

struct CorpusOptions {
  int count = 100;
  std::uint64_t seed = 20240601;
  double extent = 16.0;
  int resolution = 400;
  double R = 1.0;    // annulus and virial radius
  double eta = 0.1;  // annulus gradient weight
  std::vector<double> holder_radii{0.25, 0.5, 1.0, 2.0, 4.0};
};

// maxima over the corpus; -inf entries (fields with nothing outside R) are skipped
struct CorpusConstants {
  int resolution = 0;
  int fields = 0;
  double annulus_gn = 0.0;
  double virial_c = 0.0;
  int virial_degenerate = 0;
  double gnf = 0.0;
  double holder_ratio = 0.0;  // max lhs / rhs, at most 1
  double gn_sharp = 0.0;      // NaN without a ground state
};

CorpusConstants evaluate_corpus(const ModelParams& params, const CorpusOptions& opt, const GroundState* gs = nullptr,
                                int workers = 1);

struct CorpusVerification {
  CorpusConstants coarse;
  CorpusConstants fine;  // doubled resolution
  double annulus_change = 0.0;
  double virial_change = 0.0;
  double gnf_change = 0.0;
  double holder_change = 0.0;
  bool finite = false;
  bool stable = false;  // every change below 20%
  bool holder_ok = false;
  bool gn_sharp_ok = true;
  bool ok() const { return finite && stable && holder_ok && gn_sharp_ok; }
};

CorpusVerification verify_corpus(const ModelParams& params, const CorpusOptions& opt, const GroundState* gs = nullptr,
                                 int workers = 1);

std::string to_text(const CorpusVerification& v);

}  // namespace inls
