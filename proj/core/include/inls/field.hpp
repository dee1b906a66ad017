#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "inls/geometry.hpp"
#include "inls/params.hpp"

namespace inls {

using complex = std::complex<double>;

struct Field {
  Geometry geometry;
  ModelParams params;
  std::vector<complex> values;
  double time = 0.0;

  bool valid() const;
  // throws InvalidState naming `where` when valid() is false
  void require_valid(const char* where) const;
};

Field zero_field(const Geometry& geometry, const ModelParams& params);

// A * exp(-|x - x0|^2 / w^2)
struct GaussianProfile {
  double amplitude = 1.0;
  double width = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

// lambda^((2-b)/(2 sigma)) V(lambda |x|) for a radial table V on `mesh`,
// continued past the mesh as V_last (r_last / r)^tail_exponent.
struct ScaledGroundStateProfile {
  Geometry mesh;
  std::vector<double> profile;
  double tail_exponent = 0.0;
  double lambda = 1.0;
};

struct CheckpointProfile {
  std::string path;
};

using ProfileSpec = std::variant<GaussianProfile, ScaledGroundStateProfile, CheckpointProfile>;

Field make_field(const Geometry& geometry, const ModelParams& params, const ProfileSpec& profile);

// Cubic B-spline interpolation of a real radial table, taken in the mesh
// coordinate s so stretched meshes interpolate as smoothly as uniform ones.
class RadialInterpolant {
 public:
  RadialInterpolant(const Geometry& mesh, const std::vector<double>& values, double tail_exponent = 0.0);
  ~RadialInterpolant();
  RadialInterpolant(RadialInterpolant&&) noexcept;
  RadialInterpolant& operator=(RadialInterpolant&&) noexcept;
  double operator()(double r) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace inls
