#pragma once
#include "vfw/grid.hpp"

namespace vfw {

// Centered second-order differential operators on periodic collocated grids.
// All of them throw UnsupportedBoundaryError for non-periodic grids and
// GridMismatchError when two operands live on different grids.

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& V);
VectorField curl(const VectorField& V);
// Compact 7-point Laplacian (nearest neighbours).
ScalarField laplacian(const ScalarField& f);
// Composition of centered first differences, sum_a D_a D_a (2h-wide stencil).
// This is the operator that div(grad f) actually equals on the grid; the
// field evolution uses it so that its conservation identities are exact.
ScalarField laplacian_wide(const ScalarField& f);
VectorField laplacian_wide(const VectorField& V);
// grad(div V) assembled from mixed centered differences D_i D_j V_j.
VectorField grad_div(const VectorField& V);

// L2 pairing: sum over nodes times cell volume.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& V, const VectorField& W);

double max_abs(const ScalarField& f);
double max_abs(const VectorField& V);

// Axpy-style helpers used by the integrators.
void scale_add(ScalarField& y, double a, const ScalarField& x);  // y += a*x
void scale_add(VectorField& y, double a, const VectorField& x);

// Spectral reconstruction of a vector potential from a divergence-free field:
// solves curl A = B with div A = 0 and zero mean, using the discrete symbol
// of the centered difference so that the round trip curl(inverse_curl(B)) = B
// is exact for band-limited input.  Preconditions: max|div B| and the mean of
// every component must vanish within div_tol * max(1, max|B|); violations
// raise ConstraintViolationError.
VectorField inverse_curl(const VectorField& B, double div_tol = 1e-8);

// Spectral solve of  -div(grad W) = rho  (all operators the centered discrete
// ones).  Requires zero total charge: |mean rho| <= tol * max(1, max|rho|).
// Fourier modes on which the discrete symbol vanishes (the mean and the
// odd-ball checkerboard modes of an even grid) are projected out.
ScalarField poisson_solve(const ScalarField& rho, double tol = 1e-10);

// Parseval pairing used as an independent cross-check of inner():
// (cell_volume / n_nodes) * sum_k fhat(k) * conj(ghat(k)).
double inner_spectral(const ScalarField& f, const ScalarField& g);

}  // namespace vfw
