#include "vfw/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

namespace vfw {

SpectralShape spectral_shape(const Grid3& g) {
  SpectralShape s;
  s.nx = g.n[0];
  s.ny = g.n[1];
  s.nz = g.n[2];
  s.nxh = g.n[0] / 2 + 1;
  return s;
}

std::vector<std::complex<double>> fft_forward(const Grid3& g, const double* data) {
  SpectralShape sh = spectral_shape(g);
  std::vector<std::complex<double>> out(sh.size());
  std::vector<double> in(data, data + g.size());
  fftw_plan plan = fftw_plan_dft_r2c_3d(sh.nz, sh.ny, sh.nx, in.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

void fft_inverse(const Grid3& g, std::vector<std::complex<double>> spec, double* out) {
  SpectralShape sh = spectral_shape(g);
  fftw_plan plan = fftw_plan_dft_c2r_3d(sh.nz, sh.ny, sh.nx,
                                        reinterpret_cast<fftw_complex*>(spec.data()), out,
                                        FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double inv = 1.0 / static_cast<double>(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) out[q] *= inv;
}

double diff_symbol(const Grid3& g, int axis, int mode) {
  const int n = g.n[axis];
  // sin(pi) is not an exact zero in floating point; the null modes of the
  // centered difference (mean and Nyquist) must be exactly zero so callers
  // can recognize and drop them.
  if (mode == 0 || 2 * mode == n) return 0.0;
  return std::sin(2.0 * M_PI * mode / n) / g.h[axis];
}

}  // namespace vfw
