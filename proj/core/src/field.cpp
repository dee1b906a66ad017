#include "inls/field.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>

#include "inls/checkpoint.hpp"
#include "inls/error.hpp"

namespace inls {

bool Field::valid() const {
  if (values.size() != geometry.size()) return false;
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return std::isfinite(time);
}

void Field::require_valid(const char* where) const {
  if (values.size() != geometry.size()) {
    throw InvalidState(std::string(where) + ": value count does not match geometry");
  }
  if (!valid()) throw InvalidState(std::string(where) + ": field contains non-finite values");
}

Field zero_field(const Geometry& geometry, const ModelParams& params) {
  Field f{geometry, params, std::vector<complex>(geometry.size(), complex(0.0, 0.0)), 0.0};
  return f;
}

struct RadialInterpolant::Impl {
  Geometry mesh;
  std::vector<double> values;
  double tail_exponent = 0.0;
  double ell = 0.0;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;

  Impl(const Geometry& m, const std::vector<double>& v, double tail)
      : mesh(m),
        values(v),
        tail_exponent(tail),
        spline(v.data(), v.size(), 0.5 / m.resolution(), 1.0 / m.resolution()) {
    ell = m.stretch() > 0.0 ? m.extent() / std::sinh(m.stretch()) : m.extent();
  }

  double coordinate(double r) const {
    const double a = mesh.stretch();
    return a > 0.0 ? std::asinh(r / ell) / a : r / mesh.extent();
  }
};

RadialInterpolant::RadialInterpolant(const Geometry& mesh, const std::vector<double>& values, double tail_exponent) {
  if (!mesh.is_radial()) throw InvalidArgument("RadialInterpolant: mesh must be radial");
  if (values.size() != mesh.size()) throw InvalidArgument("RadialInterpolant: table size does not match mesh");
  impl_ = std::make_unique<Impl>(mesh, values, tail_exponent);
}

RadialInterpolant::~RadialInterpolant() = default;
RadialInterpolant::RadialInterpolant(RadialInterpolant&&) noexcept = default;
RadialInterpolant& RadialInterpolant::operator=(RadialInterpolant&&) noexcept = default;

double RadialInterpolant::operator()(double r) const {
  const auto& rs = impl_->mesh.radius();
  if (r <= rs.front()) return impl_->values.front();
  if (r >= rs.back()) {
    if (impl_->tail_exponent <= 0.0) return r > impl_->mesh.extent() ? 0.0 : impl_->values.back();
    return impl_->values.back() * std::pow(rs.back() / r, impl_->tail_exponent);
  }
  return impl_->spline(impl_->coordinate(r));
}

namespace {

double squared_distance(const Geometry& g, std::size_t q, const std::array<double, 3>& c) {
  if (g.is_radial()) return g.radius()[q] * g.radius()[q];
  const auto n = static_cast<std::size_t>(g.resolution());
  const auto& ax = g.axis();
  const std::size_t i = q / (n * n), j = (q / n) % n, k = q % n;
  const double dx = ax[i] - c[0], dy = ax[j] - c[1], dz = ax[k] - c[2];
  return dx * dx + dy * dy + dz * dz;
}

Field sample_gaussian(const Geometry& g, const ModelParams& p, const GaussianProfile& spec) {
  if (!std::isfinite(spec.amplitude) || !(spec.width > 0.0)) {
    throw InvalidArgument("gaussian profile: amplitude must be finite and width > 0");
  }
  const bool offset = spec.center[0] != 0.0 || spec.center[1] != 0.0 || spec.center[2] != 0.0;
  if (g.is_radial() && offset) throw InvalidArgument("gaussian profile: radial geometry requires center x0 = 0");
  Field f = zero_field(g, p);
  if (spec.amplitude == 0.0) return f;
  const double inv_w2 = 1.0 / (spec.width * spec.width);
  for (std::size_t q = 0; q < g.size(); ++q) {
    f.values[q] = spec.amplitude * std::exp(-squared_distance(g, q, spec.center) * inv_w2);
  }
  return f;
}

Field sample_ground_state(const Geometry& g, const ModelParams& p, const ScaledGroundStateProfile& spec) {
  if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) {
    throw InvalidArgument("scaled-ground-state profile: lambda must be > 0");
  }
  Field f = zero_field(g, p);
  const double amp = std::pow(spec.lambda, (2.0 - p.b) / (2.0 * p.sigma));
  if (g == spec.mesh && spec.lambda == 1.0) {
    for (std::size_t q = 0; q < g.size(); ++q) f.values[q] = spec.profile[q];
    return f;
  }
  RadialInterpolant V(spec.mesh, spec.profile, spec.tail_exponent);
  for (std::size_t q = 0; q < g.size(); ++q) f.values[q] = amp * V(spec.lambda * g.radius()[q]);
  return f;
}

Field load_checkpoint_profile(const Geometry& g, const ModelParams& p, const CheckpointProfile& spec) {
  Checkpoint cp = read_checkpoint(spec.path);
  if (cp.field.geometry != g) {
    throw InvalidArgument("checkpoint " + spec.path + ": geometry " + cp.field.geometry.describe() +
                          " does not match requested " + g.describe());
  }
  if (!(cp.field.params == p)) throw InvalidArgument("checkpoint " + spec.path + ": model parameters do not match");
  cp.field.time = 0.0;
  return cp.field;
}

}  // namespace

Field make_field(const Geometry& geometry, const ModelParams& params, const ProfileSpec& profile) {
  Field f = std::visit(
      [&](const auto& spec) -> Field {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, GaussianProfile>) return sample_gaussian(geometry, params, spec);
        else if constexpr (std::is_same_v<T, ScaledGroundStateProfile>) return sample_ground_state(geometry, params, spec);
        else return load_checkpoint_profile(geometry, params, spec);
      },
      profile);
  f.require_valid("make_field");
  return f;
}

}  // namespace inls
