#pragma once

#include <complex>
#include <vector>

#include "inls/geometry.hpp"

namespace inls {

// Sine transform F(k) = int_0^R r u(r) sin(k r) dr of the piecewise-linear
// interpolant of r u through the cell centres, with r u = 0 at r = 0 and at
// the outer boundary. The radial Fourier transform in three dimensions is
// u-hat(k) = 4 pi F(k) / k.
std::complex<double> radial_sine_transform(const Geometry& mesh, const std::vector<std::complex<double>>& u, double k);

struct FrequencyGrid {
  std::vector<double> k;
  std::vector<double> w;  // quadrature weights for int_0^inf g(k) dk
};

// uniform near k = 0, logarithmic beyond, up to a few times the finest mesh wavenumber
FrequencyGrid radial_frequency_grid(const Geometry& mesh);

// |u|^2_{H-dot^s} = 8 int_0^inf k^(2s) |F(k)|^2 dk for radial N = 3
double radial_hdot_squared(const Geometry& mesh, const std::vector<std::complex<double>>& u, double s);

}  // namespace inls
