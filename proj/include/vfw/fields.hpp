#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vfw/grid.hpp"
#include "vfw/ops.hpp"
#include "vfw/particle.hpp"
#include "vfw/units.hpp"

namespace vfw {

// First-order canonical variables of the electromagnetic field:
//   dA/dt  = Y - grad W
//   dY/dt  = -curl curl A + j
//   dchi/dt = div(Y - grad W)
//   dW/dt  = -chi
// with E = -Y and B = curl A.  The gauge functional -chi + div A and the
// charge functional -div Y - rho are exact invariants of this flow.
struct CanonicalFieldState {
  VectorField A, Y;
  ScalarField W, chi;
  double time = 0.0;

  CanonicalFieldState() = default;
  explicit CanonicalFieldState(const Grid3& g) : A(g), Y(g), W(g), chi(g) {}
  const Grid3& grid() const { return A.grid; }
};

// Charge/current source sampled on the grid.  The charge density is static
// and the current is a fixed solenoidal profile times cos(omega t), so the
// discrete continuity equation drho/dt + div j = 0 holds exactly; the
// constructor verifies it and throws ConstraintViolationError otherwise.
class SourceModel {
 public:
  explicit SourceModel(const Grid3& g);                              // vacuum
  SourceModel(ScalarField rho0, VectorField j0, double omega = 0.0); // static rho
  // Fully custom time-dependent source; drho_dt is required so the
  // continuity check can be exact.
  SourceModel(const Grid3& g, std::function<ScalarField(double)> rho,
              std::function<ScalarField(double)> drho_dt, std::function<VectorField(double)> j,
              const std::vector<double>& check_times);

  const Grid3& grid() const { return grid_; }
  bool vacuum() const { return vacuum_; }
  ScalarField rho(double t) const;
  VectorField j(double t) const;
  // into += scale * j(t); avoids temporaries in the inner loop.
  void accumulate_j(double t, double scale, VectorField& into) const;
  // Replace the stored static charge (used to make initial data exactly
  // consistent with the discrete Gauss functional).
  void set_rho(ScalarField rho);

 private:
  Grid3 grid_;
  bool vacuum_ = true;
  bool analytic_ = false;
  ScalarField rho0_;
  VectorField j0_;
  double omega_ = 0.0;
  std::function<ScalarField(double)> rho_fn_;
  std::function<VectorField(double)> j_fn_;
};

struct DiagnosticsReport {
  double time = 0.0;
  double faraday = 0.0;  // max |dB/dt + curl E|
  double ampere = 0.0;   // max |dE/dt - curl B + j|
  double gauss = 0.0;    // max |div E - rho|
  double div_b = 0.0;    // max |div B|
  double lorenz = 0.0;   // max |-chi + div A|
  double energy = 0.0;
};

double field_hamiltonian(const CanonicalFieldState& s, const SourceModel& src);

struct FieldRhs {
  VectorField dA, dY;
  ScalarField dW, dchi;
  explicit FieldRhs(const Grid3& g) : dA(g), dY(g), dW(g), dchi(g) {}
};
void field_rhs(const CanonicalFieldState& s, const SourceModel& src, FieldRhs& out);

enum class FieldScheme { Rk4, Verlet };

// Advances the state in place.  dt = 0 is the identity.  Steps violating
// c*dt <= h_min/sqrt(3) are refused with a CflError carrying a suggestion.
void field_step(CanonicalFieldState& s, const SourceModel& src, double dt,
                FieldScheme scheme = FieldScheme::Rk4, const Units& units = {});

void derive_EB(const CanonicalFieldState& s, VectorField& E, VectorField& B);

DiagnosticsReport maxwell_diagnostics(const CanonicalFieldState& s, const SourceModel& src);

// Admissible initial data for a static charge: W solves the discrete Poisson
// problem, Y = grad W, A = the divergence-free seed, chi = div A.  Requires
// zero net charge.  When snap_rho is set the source's charge is replaced by
// the exactly consistent -div(grad W), which differs from the requested one
// at the solver-roundoff level.
CanonicalFieldState admissible_state(SourceModel& src, const VectorField& A_seed,
                                     double t0 = 0.0, bool snap_rho = false);

// Traveling plane wave moving along +x, polarized along y:
// A_y = amplitude * cos(k x - c k t) with k = 2*pi*mode/L_x.
CanonicalFieldState plane_wave_state(const Grid3& g, int mode, double amplitude,
                                     const Units& units = {});
// The corresponding analytic state at time t (for convergence tests).
CanonicalFieldState plane_wave_reference(const Grid3& g, int mode, double amplitude, double t,
                                         const Units& units = {});

// --- retarded point-charge potentials --------------------------------------

struct LienardWiechert {
  double phi = 0.0;
  Vec3 A{};
  double t_retarded = 0.0;
};
// Solves |r - r_f(t')| = c (t - t') by bracketed bisection to 1e-12 and
// evaluates phi = xi_f / (R (1 - <n, u_f/c>)), A = phi u_f / c.
LienardWiechert lienard_wiechert(double t, const Vec3& r, const std::function<Vec3(double)>& r_f,
                                 const std::function<Vec3(double)>& u_f, double xi_f,
                                 const Units& units = {});

// --- advected volume integrals ---------------------------------------------

struct AdvectionSpec {
  std::function<double(double, const Vec3&)> integrand;
  std::function<Vec3(double, const Vec3&)> velocity;
  std::function<double(double, const Vec3&)> div_velocity;
  Vec3 box_lo{}, box_hi{};
  std::array<int, 3> nodes{8, 8, 8};
  double t0 = 0.0, t1 = 1.0;
  int steps = 100;
};
// Midpoint-rule quadrature nodes advected with dr/dt = u and Jacobian weights
// dJ/dt = div(u) J, both integrated by RK4.  Returns (t, integral) samples.
std::vector<std::pair<double, double>> advected_integral(const AdvectionSpec& spec);

// --- interference phase ------------------------------------------------------

// Aharonov-Bohm phase shift -flux(B) through a grid-aligned rectangular
// surface normal to `axis` at node plane `plane`, spanning node index ranges
// [lo, hi) on the two transverse axes (cyclic order axis+1, axis+2).
double aharonov_bohm_phase(const VectorField& B, int axis, int plane, std::array<int, 2> lo,
                           std::array<int, 2> hi);

// --- snapshots ----------------------------------------------------------------

// Writes basepath.bin (doubles: A, Y, W, chi in component-major order) and
// basepath.json (grid metadata + time + layout).
void export_snapshot(const CanonicalFieldState& s, const std::string& basepath);
CanonicalFieldState import_snapshot(const std::string& basepath);

}  // namespace vfw
