#include "inls/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "inls/analysis.hpp"
#include "inls/diagnostics.hpp"
#include "inls/error.hpp"

namespace inls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FieldValues {
  double annulus = -std::numeric_limits<double>::infinity();
  double virial = 0.0;
  bool virial_degenerate = false;
  double gnf = 0.0;
  double holder = 0.0;
  double gn_sharp = kNaN;
};

FieldValues evaluate_one(const Field& u, const CorpusOptions& opt, const GroundState* gs) {
  FieldValues v;
  v.annulus = check_annulus_gn(u, opt.R, opt.eta);
  const auto vq = virial_quantities(u, opt.R, CutoffProfile::virial());
  const auto s = virial_lemma_slack(u, opt.R, mass_energy(u).energy, vq.zpp);
  v.virial = s.c_needed;
  v.virial_degenerate = s.degenerate;
  v.gnf = check_gnf(u);
  for (double R : opt.holder_radii) {
    const auto h = ball_holder(u, R);
    v.holder = std::max(v.holder, h.lhs / h.rhs);
  }
  if (gs) v.gn_sharp = gn_sharp_check(*gs, u);
  return v;
}

double rel_change(double a, double b) { return std::abs(b - a) / std::abs(a); }

}  // namespace

complex CorpusSpec::operator()(double r) const {
  complex acc{0.0, 0.0};
  for (const auto& t : terms) {
    double env = 0.0;
    if (t.kind == CorpusTerm::shell) {
      const double a = (r - t.center) / t.width, b = (r + t.center) / t.width;
      env = std::exp(-a * a) + std::exp(-b * b);
    } else if (r < t.width) {
      const double q = r / t.width;
      env = std::exp(1.0 - 1.0 / (1.0 - q * q));
    }
    acc += t.coeff * env * std::polar(1.0, t.chirp * r * r);
  }
  return acc;
}

std::vector<CorpusSpec> make_corpus(int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("make_corpus: negative count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<CorpusSpec> out(static_cast<std::size_t>(count));
  for (auto& spec : out) {
    const int n = 1 + static_cast<int>(unit(rng) * 3.0);
    for (int i = 0; i < n; ++i) {
      CorpusTerm t;
      t.kind = unit(rng) < 0.25 ? CorpusTerm::bump : CorpusTerm::shell;
      t.coeff = std::polar(between(0.2, 2.5), between(0.0, 2.0 * M_PI));
      if (t.kind == CorpusTerm::shell) {
        t.center = unit(rng) < 0.5 ? 0.0 : between(0.0, 4.0);
        t.width = between(0.4, 2.0);
      } else {
        t.width = between(0.8, 5.0);
      }
      t.chirp = unit(rng) < 0.5 ? 0.0 : between(-1.0, 1.0);
      spec.terms.push_back(t);
    }
  }
  return out;
}

Field sample_corpus_field(const CorpusSpec& spec, const Geometry& geometry, const ModelParams& params) {
  Field u = zero_field(geometry, params);
  const auto& r = geometry.radius();
  for (std::size_t j = 0; j < u.values.size(); ++j) u.values[j] = spec(r[j]);
  return u;
}

CorpusConstants evaluate_corpus(const ModelParams& params, const CorpusOptions& opt, const GroundState* gs,
                                int workers) {
  const auto specs = make_corpus(opt.count, opt.seed);
  const Geometry g = Geometry::radial(params.N, opt.extent, opt.resolution);
  std::vector<FieldValues> vals(specs.size());
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(specs.size())));
  auto work = [&](int k) {
    for (std::size_t i = static_cast<std::size_t>(k); i < specs.size(); i += static_cast<std::size_t>(w)) {
      vals[i] = evaluate_one(sample_corpus_field(specs[i], g, params), opt, gs);
    }
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < w; ++k) pool.emplace_back(work, k);
    for (auto& t : pool) t.join();
  }
  CorpusConstants c;
  c.resolution = opt.resolution;
  c.fields = static_cast<int>(specs.size());
  c.annulus_gn = -std::numeric_limits<double>::infinity();
  c.gn_sharp = gs ? 0.0 : kNaN;
  for (const auto& v : vals) {
    c.annulus_gn = std::max(c.annulus_gn, v.annulus);
    if (v.virial_degenerate) {
      ++c.virial_degenerate;
    } else {
      c.virial_c = std::max(c.virial_c, v.virial);
    }
    c.gnf = std::max(c.gnf, v.gnf);
    c.holder_ratio = std::max(c.holder_ratio, v.holder);
    if (gs) c.gn_sharp = std::max(c.gn_sharp, v.gn_sharp);
  }
  return c;
}

CorpusVerification verify_corpus(const ModelParams& params, const CorpusOptions& opt, const GroundState* gs,
                                 int workers) {
  CorpusVerification v;
  v.coarse = evaluate_corpus(params, opt, gs, workers);
  CorpusOptions fine = opt;
  fine.resolution = 2 * opt.resolution;
  v.fine = evaluate_corpus(params, fine, gs, workers);
  v.annulus_change = rel_change(v.coarse.annulus_gn, v.fine.annulus_gn);
  v.virial_change = rel_change(v.coarse.virial_c, v.fine.virial_c);
  v.gnf_change = rel_change(v.coarse.gnf, v.fine.gnf);
  v.holder_change = rel_change(v.coarse.holder_ratio, v.fine.holder_ratio);
  v.finite = true;
  for (const auto* c : {&v.coarse, &v.fine}) {
    for (double x : {c->annulus_gn, c->virial_c, c->gnf, c->holder_ratio}) v.finite = v.finite && std::isfinite(x);
  }
  v.stable = v.annulus_change < 0.2 && v.virial_change < 0.2 && v.gnf_change < 0.2 && v.holder_change < 0.2;
  v.holder_ok = v.coarse.holder_ratio <= 1.0 && v.fine.holder_ratio <= 1.0;
  if (gs) v.gn_sharp_ok = v.coarse.gn_sharp <= 1.0 + 1e-3 && v.fine.gn_sharp <= 1.0 + 1e-3;
  return v;
}

std::string to_text(const CorpusVerification& v) {
  std::ostringstream os;
  os.precision(10);
  for (const auto* c : {&v.coarse, &v.fine}) {
    const std::string p = c == &v.coarse ? "coarse." : "fine.";
    os << p << "resolution = " << c->resolution << "\n";
    os << p << "fields = " << c->fields << "\n";
    os << p << "annulus_gn_max = " << c->annulus_gn << "\n";
    os << p << "virial_c_max = " << c->virial_c << "\n";
    os << p << "virial_degenerate = " << c->virial_degenerate << "\n";
    os << p << "gnf_max = " << c->gnf << "\n";
    os << p << "holder_ratio_max = " << c->holder_ratio << "\n";
    os << p << "gn_sharp_max = " << c->gn_sharp << "\n";
  }
  os << "annulus_gn_change = " << v.annulus_change << "\n";
  os << "virial_c_change = " << v.virial_change << "\n";
  os << "gnf_change = " << v.gnf_change << "\n";
  os << "holder_ratio_change = " << v.holder_change << "\n";
  os << "ok = " << (v.ok() ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace inls
