#include "bsq/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace bsq::fft {
namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW's planner is not thread-safe; execution with new arrays is.
Plans plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::size_t points = std::size_t(n) * n * n;
  const std::size_t modes = std::size_t(n) * n * (n / 2 + 1);
  RealVec real(points);
  ComplexVec spec(modes);
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  Plans p;
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, real.data(), c, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, c, real.data(), FFTW_ESTIMATE);
  cache.emplace(n, p);
  return p;
}

}  // namespace

void forward(const GridSpec& grid, const double* in, Complex* out) {
  const Plans p = plans_for(grid.n);
  // r2c does not modify its input, but FFTW's signature is non-const.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  const double w = grid.cell_volume();
  const std::size_t m = grid.num_modes();
  for (std::size_t q = 0; q < m; ++q) out[q] *= w;
}

void inverse(const GridSpec& grid, const Complex* in, double* out) {
  const Plans p = plans_for(grid.n);
  // c2r destroys its input.
  ComplexVec scratch(in, in + grid.num_modes());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  const double w = 1.0 / grid.volume();
  const std::size_t m = grid.num_points();
  for (std::size_t q = 0; q < m; ++q) out[q] *= w;
}

RealVec inverse(const GridSpec& grid, const ComplexVec& in) {
  RealVec out(grid.num_points());
  inverse(grid, in.data(), out.data());
  return out;
}

ComplexVec forward(const GridSpec& grid, const RealVec& in) {
  ComplexVec out(grid.num_modes());
  forward(grid, in.data(), out.data());
  return out;
}

}  // namespace bsq::fft
