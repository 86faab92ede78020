#include "vfw/ops.hpp"

#include <cmath>

#include "vfw/spectral.hpp"

namespace vfw {
namespace {

// Periodic neighbour tables: for axis a, nbr[i] = i+1 mod n and i-1 mod n.
struct AxisWrap {
  std::vector<int> up, dn, up2, dn2;
  explicit AxisWrap(int n) : up(n), dn(n), up2(n), dn2(n) {
    for (int i = 0; i < n; ++i) {
      up[i] = (i + 1) % n;
      dn[i] = (i + n - 1) % n;
      up2[i] = (i + 2) % n;
      dn2[i] = (i + n - 2) % n;
    }
  }
};

struct Wrap3 {
  AxisWrap x, y, z;
  explicit Wrap3(const Grid3& g) : x(g.n[0]), y(g.n[1]), z(g.n[2]) {}
};

// Applies the centered first difference along each axis of one scalar block.
// out_a += sign * D_a f  for the three requested output blocks.
template <class F>
void for_each_node(const Grid3& g, F&& body) {
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) body(i, j, k);
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  require_periodic(f.grid, "gradient");
  const Grid3& g = f.grid;
  Wrap3 w(g);
  VectorField out(g);
  const double ax = 0.5 / g.h[0], ay = 0.5 / g.h[1], az = 0.5 / g.h[2];
  const double* s = f.v.data();
  double* ox = out.component(0);
  double* oy = out.component(1);
  double* oz = out.component(2);
  for_each_node(g, [&](int i, int j, int k) {
    const std::size_t q = g.idx(i, j, k);
    ox[q] = ax * (s[g.idx(w.x.up[i], j, k)] - s[g.idx(w.x.dn[i], j, k)]);
    oy[q] = ay * (s[g.idx(i, w.y.up[j], k)] - s[g.idx(i, w.y.dn[j], k)]);
    oz[q] = az * (s[g.idx(i, j, w.z.up[k])] - s[g.idx(i, j, w.z.dn[k])]);
  });
  return out;
}

ScalarField divergence(const VectorField& V) {
  require_periodic(V.grid, "divergence");
  const Grid3& g = V.grid;
  Wrap3 w(g);
  ScalarField out(g);
  const double ax = 0.5 / g.h[0], ay = 0.5 / g.h[1], az = 0.5 / g.h[2];
  const double* vx = V.component(0);
  const double* vy = V.component(1);
  const double* vz = V.component(2);
  for_each_node(g, [&](int i, int j, int k) {
    out.v[g.idx(i, j, k)] = ax * (vx[g.idx(w.x.up[i], j, k)] - vx[g.idx(w.x.dn[i], j, k)]) +
                            ay * (vy[g.idx(i, w.y.up[j], k)] - vy[g.idx(i, w.y.dn[j], k)]) +
                            az * (vz[g.idx(i, j, w.z.up[k])] - vz[g.idx(i, j, w.z.dn[k])]);
  });
  return out;
}

VectorField curl(const VectorField& V) {
  require_periodic(V.grid, "curl");
  const Grid3& g = V.grid;
  Wrap3 w(g);
  VectorField out(g);
  const double ax = 0.5 / g.h[0], ay = 0.5 / g.h[1], az = 0.5 / g.h[2];
  const double* vx = V.component(0);
  const double* vy = V.component(1);
  const double* vz = V.component(2);
  double* ox = out.component(0);
  double* oy = out.component(1);
  double* oz = out.component(2);
  for_each_node(g, [&](int i, int j, int k) {
    const std::size_t q = g.idx(i, j, k);
    const double dyvz = ay * (vz[g.idx(i, w.y.up[j], k)] - vz[g.idx(i, w.y.dn[j], k)]);
    const double dzvy = az * (vy[g.idx(i, j, w.z.up[k])] - vy[g.idx(i, j, w.z.dn[k])]);
    const double dzvx = az * (vx[g.idx(i, j, w.z.up[k])] - vx[g.idx(i, j, w.z.dn[k])]);
    const double dxvz = ax * (vz[g.idx(w.x.up[i], j, k)] - vz[g.idx(w.x.dn[i], j, k)]);
    const double dxvy = ax * (vy[g.idx(w.x.up[i], j, k)] - vy[g.idx(w.x.dn[i], j, k)]);
    const double dyvx = ay * (vx[g.idx(i, w.y.up[j], k)] - vx[g.idx(i, w.y.dn[j], k)]);
    ox[q] = dyvz - dzvy;
    oy[q] = dzvx - dxvz;
    oz[q] = dxvy - dyvx;
  });
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  require_periodic(f.grid, "laplacian");
  const Grid3& g = f.grid;
  Wrap3 w(g);
  ScalarField out(g);
  const double bx = 1.0 / (g.h[0] * g.h[0]);
  const double by = 1.0 / (g.h[1] * g.h[1]);
  const double bz = 1.0 / (g.h[2] * g.h[2]);
  const double* s = f.v.data();
  for_each_node(g, [&](int i, int j, int k) {
    const double c = s[g.idx(i, j, k)];
    out.v[g.idx(i, j, k)] =
        bx * (s[g.idx(w.x.up[i], j, k)] - 2.0 * c + s[g.idx(w.x.dn[i], j, k)]) +
        by * (s[g.idx(i, w.y.up[j], k)] - 2.0 * c + s[g.idx(i, w.y.dn[j], k)]) +
        bz * (s[g.idx(i, j, w.z.up[k])] - 2.0 * c + s[g.idx(i, j, w.z.dn[k])]);
  });
  return out;
}

ScalarField laplacian_wide(const ScalarField& f) {
  require_periodic(f.grid, "laplacian_wide");
  const Grid3& g = f.grid;
  Wrap3 w(g);
  ScalarField out(g);
  const double bx = 0.25 / (g.h[0] * g.h[0]);
  const double by = 0.25 / (g.h[1] * g.h[1]);
  const double bz = 0.25 / (g.h[2] * g.h[2]);
  const double* s = f.v.data();
  for_each_node(g, [&](int i, int j, int k) {
    const double c = s[g.idx(i, j, k)];
    out.v[g.idx(i, j, k)] =
        bx * (s[g.idx(w.x.up2[i], j, k)] - 2.0 * c + s[g.idx(w.x.dn2[i], j, k)]) +
        by * (s[g.idx(i, w.y.up2[j], k)] - 2.0 * c + s[g.idx(i, w.y.dn2[j], k)]) +
        bz * (s[g.idx(i, j, w.z.up2[k])] - 2.0 * c + s[g.idx(i, j, w.z.dn2[k])]);
  });
  return out;
}

VectorField laplacian_wide(const VectorField& V) {
  require_periodic(V.grid, "laplacian_wide");
  VectorField out(V.grid);
  for (int c = 0; c < 3; ++c) {
    ScalarField comp(V.grid);
    std::copy(V.component(c), V.component(c) + V.grid.size(), comp.v.begin());
    ScalarField lc = laplacian_wide(comp);
    std::copy(lc.v.begin(), lc.v.end(), out.component(c));
  }
  return out;
}

VectorField grad_div(const VectorField& V) {
  require_periodic(V.grid, "grad_div");
  return gradient(divergence(V));
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid, "inner");
  long double acc = 0.0L;
  for (std::size_t q = 0; q < f.v.size(); ++q) acc += (long double)f.v[q] * g.v[q];
  return static_cast<double>(acc) * f.grid.cell_volume();
}

double inner(const VectorField& V, const VectorField& W) {
  require_same_grid(V.grid, W.grid, "inner");
  long double acc = 0.0L;
  for (std::size_t q = 0; q < V.v.size(); ++q) acc += (long double)V.v[q] * W.v[q];
  return static_cast<double>(acc) * V.grid.cell_volume();
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::fabs(x));
  return m;
}

double max_abs(const VectorField& V) {
  double m = 0.0;
  for (double x : V.v) m = std::max(m, std::fabs(x));
  return m;
}

void scale_add(ScalarField& y, double a, const ScalarField& x) {
  require_same_grid(y.grid, x.grid, "scale_add");
  for (std::size_t q = 0; q < y.v.size(); ++q) y.v[q] += a * x.v[q];
}

void scale_add(VectorField& y, double a, const VectorField& x) {
  require_same_grid(y.grid, x.grid, "scale_add");
  for (std::size_t q = 0; q < y.v.size(); ++q) y.v[q] += a * x.v[q];
}

VectorField inverse_curl(const VectorField& B, double div_tol) {
  require_periodic(B.grid, "inverse_curl");
  const Grid3& g = B.grid;
  const std::size_t N = g.size();
  const double scale = std::max(1.0, max_abs(B));

  const double div_resid = max_abs(divergence(B));
  if (div_resid > div_tol * scale)
    throw ConstraintViolationError("inverse_curl: input is not divergence-free (max |div B| = " +
                                   std::to_string(div_resid) + ")");
  for (int c = 0; c < 3; ++c) {
    long double mean = 0.0L;
    const double* p = B.component(c);
    for (std::size_t q = 0; q < N; ++q) mean += p[q];
    if (std::fabs(static_cast<double>(mean) / (long double)N) > div_tol * scale)
      throw ConstraintViolationError("inverse_curl: component " + std::to_string(c) +
                                     " has nonzero mean");
  }

  // Spectral inversion with the discrete difference symbol s_a, so the
  // discrete curl of the result reproduces B exactly on resolvable modes.
  SpectralShape sh = spectral_shape(g);
  std::vector<std::complex<double>> Bx = fft_forward(g, B.component(0));
  std::vector<std::complex<double>> By = fft_forward(g, B.component(1));
  std::vector<std::complex<double>> Bz = fft_forward(g, B.component(2));
  std::vector<std::complex<double>> Ax(sh.size()), Ay(sh.size()), Az(sh.size());

  for (int kz = 0; kz < sh.nz; ++kz)
    for (int ky = 0; ky < sh.ny; ++ky)
      for (int kx = 0; kx < sh.nxh; ++kx) {
        const std::size_t q = sh.idx(kx, ky, kz);
        const double sx = diff_symbol(g, 0, kx);
        const double sy = diff_symbol(g, 1, ky);
        const double sz = diff_symbol(g, 2, kz);
        const double s2 = sx * sx + sy * sy + sz * sz;
        if (s2 == 0.0) {
          Ax[q] = Ay[q] = Az[q] = 0.0;
          continue;
        }
        // A = i s x B / |s|^2
        const std::complex<double> I(0.0, 1.0);
        Ax[q] = I * (sy * Bz[q] - sz * By[q]) / s2;
        Ay[q] = I * (sz * Bx[q] - sx * Bz[q]) / s2;
        Az[q] = I * (sx * By[q] - sy * Bx[q]) / s2;
      }

  VectorField A(g);
  fft_inverse(g, std::move(Ax), A.component(0));
  fft_inverse(g, std::move(Ay), A.component(1));
  fft_inverse(g, std::move(Az), A.component(2));
  return A;
}

ScalarField poisson_solve(const ScalarField& rho, double tol) {
  require_periodic(rho.grid, "poisson_solve");
  const Grid3& g = rho.grid;
  const std::size_t N = g.size();
  long double mean = 0.0L;
  for (double x : rho.v) mean += x;
  const double scale = std::max(1.0, max_abs(rho));
  if (std::fabs(static_cast<double>(mean) / (long double)N) > tol * scale)
    throw ConstraintViolationError("poisson_solve: net charge must vanish on a periodic box");

  SpectralShape sh = spectral_shape(g);
  std::vector<std::complex<double>> r = fft_forward(g, rho.v.data());
  for (int kz = 0; kz < sh.nz; ++kz)
    for (int ky = 0; ky < sh.ny; ++ky)
      for (int kx = 0; kx < sh.nxh; ++kx) {
        const std::size_t q = sh.idx(kx, ky, kz);
        const double sx = diff_symbol(g, 0, kx);
        const double sy = diff_symbol(g, 1, ky);
        const double sz = diff_symbol(g, 2, kz);
        const double s2 = sx * sx + sy * sy + sz * sz;
        r[q] = (s2 == 0.0) ? 0.0 : r[q] / s2;
      }
  ScalarField W(g);
  fft_inverse(g, std::move(r), W.v.data());
  return W;
}

double inner_spectral(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid, "inner_spectral");
  const Grid3& gr = f.grid;
  SpectralShape sh = spectral_shape(gr);
  std::vector<std::complex<double>> fh = fft_forward(gr, f.v.data());
  std::vector<std::complex<double>> gh = fft_forward(gr, g.v.data());
  // r2c keeps only kx <= nx/2; interior columns represent two conjugate modes.
  long double acc = 0.0L;
  for (int kz = 0; kz < sh.nz; ++kz)
    for (int ky = 0; ky < sh.ny; ++ky)
      for (int kx = 0; kx < sh.nxh; ++kx) {
        const std::size_t q = sh.idx(kx, ky, kz);
        const double w = (kx == 0 || 2 * kx == sh.nx) ? 1.0 : 2.0;
        acc += w * (fh[q].real() * gh[q].real() + fh[q].imag() * gh[q].imag());
      }
  return static_cast<double>(acc) * gr.cell_volume() / static_cast<double>(gr.size());
}

}  // namespace vfw
