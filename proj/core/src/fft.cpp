#include "inls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "inls/error.hpp"

namespace inls {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft3::Fft3(int n) : n_(n) {
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n * n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_) throw Error("FFTW planning failed for n = " + std::to_string(n));
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

const Fft3& Fft3::get(int n) {
  // constructed before the cache, destroyed after it
  std::mutex& m = planner_mutex();
  static std::map<int, std::unique_ptr<Fft3>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::unique_ptr<Fft3>(new Fft3(n))).first;
  return *it->second;
}

void Fft3::forward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void Fft3::backward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), p, p);
}

}  // namespace inls
