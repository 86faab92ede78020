#pragma once
#include <complex>
#include <vector>

#include "vfw/grid.hpp"

namespace vfw {

// Thin FFTW wrappers.  Real data uses the r2c layout: logical dims
// (nz, ny, nx) row-major, so the transformed x-extent is nx/2+1.

struct SpectralShape {
  int nx = 0, ny = 0, nz = 0;
  int nxh = 0;  // nx/2 + 1
  std::size_t size() const {
    return static_cast<std::size_t>(nxh) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  std::size_t idx(int kx, int ky, int kz) const {
    return static_cast<std::size_t>(kx) +
           static_cast<std::size_t>(nxh) *
               (static_cast<std::size_t>(ky) + static_cast<std::size_t>(ny) * kz);
  }
};

SpectralShape spectral_shape(const Grid3& g);

std::vector<std::complex<double>> fft_forward(const Grid3& g, const double* data);
// Unnormalized inverse; divides by the node count internally so that
// fft_inverse(fft_forward(x)) == x.
void fft_inverse(const Grid3& g, std::vector<std::complex<double>> spec, double* out);

// Symbol of the centered first difference along axis a at integer mode m:
// sin(2*pi*m/n_a) / h_a.  The operator itself is i * this.
double diff_symbol(const Grid3& g, int axis, int mode);

}  // namespace vfw
