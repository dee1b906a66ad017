#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace inls {

// In-place 3D complex transforms of an n^3 row-major array. Plans are built
// once per n with FFTW_ESTIMATE (deterministic) and shared; executing a plan
// is thread-safe.
class Fft3 {
 public:
  static const Fft3& get(int n);

  int n() const { return n_; }
  void forward(std::complex<double>* data) const;
  // unnormalised inverse: backward(forward(u)) = n^3 u
  void backward(std::complex<double>* data) const;
  void forward(std::vector<std::complex<double>>& v) const { forward(v.data()); }
  void backward(std::vector<std::complex<double>>& v) const { backward(v.data()); }

  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

 private:
  explicit Fft3(int n);
  int n_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace inls
