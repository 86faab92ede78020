#pragma once
#include <functional>
#include <string>
#include <vector>

#include "vfw/errors.hpp"
#include "vfw/units.hpp"
#include "vfw/vector3.hpp"

namespace vfw {

// Row-major 3x3 matrix; a[i][j].
struct Mat3 {
  double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  Vec3 mul(const Vec3& v) const {  // M v
    return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
            a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
            a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
  }
  Vec3 tmul(const Vec3& v) const {  // M^T v
    return {a[0][0] * v.x + a[1][0] * v.y + a[2][0] * v.z,
            a[0][1] * v.x + a[1][1] * v.y + a[2][1] * v.z,
            a[0][2] * v.x + a[1][2] * v.y + a[2][2] * v.z};
  }
};

// Kinematic state of a single point particle.  u is the laboratory velocity.
struct ParticleState {
  Vec3 r{};
  Vec3 u{};
  double t = 0.0;
  double tau = 0.0;
};

struct ParticleParams {
  double xi = 1.0;  // charge
  double m0 = 1.0;  // rest mass for the classical comparisons
  Units units{};
};

// Analytic external potential.  The inertial potential energy wbar is the
// particle charge times the source's scalar potential; the magnetic vector
// potential A is charge-independent and tied to the source velocity by
// xi * A = wbar * u_f / c, which the constructors enforce by construction.
class PotentialSource {
 public:
  enum class Kind { Uniform, StaticCoulomb, MovingCoulomb };

  // Constant wbar everywhere; optional constant source velocity gives a
  // constant vector potential A = wbar*u_f/(xi*c).
  static PotentialSource uniform(double wbar0, double xi = 1.0, Vec3 u_f = {},
                                 const Units& units = {});
  // wbar(r) = xi*xi_f/|r - center|, A = 0.
  static PotentialSource coulomb(double xi, double xi_f, Vec3 center, const Units& units = {});
  // Source in uniform motion r_f(t) = r0 + u_f t; boosted-static potential.
  static PotentialSource moving_coulomb(double xi, double xi_f, Vec3 r0, Vec3 u_f,
                                        const Units& units = {});

  Kind kind() const { return kind_; }
  double xi() const { return xi_; }
  Vec3 source_velocity() const { return u_f_; }
  Vec3 source_position(double t) const { return r0_ + u_f_ * t; }
  const Units& units() const { return units_; }

  double wbar(double t, const Vec3& r) const;
  Vec3 grad_wbar(double t, const Vec3& r) const;
  Vec3 vector_potential(double t, const Vec3& r) const;
  Vec3 dA_dt(double t, const Vec3& r) const;
  Mat3 jacobian_A(double t, const Vec3& r) const;  // [i][j] = dA_i/dx_j
  // Shortest distance scale of the source seen from r (step-size heuristics).
  double characteristic_length(double t, const Vec3& r) const;

 private:
  Kind kind_ = Kind::Uniform;
  double xi_ = 1.0;    // particle charge folded into wbar
  double xi_f_ = 0.0;  // source charge
  double wbar0_ = 0.0;
  Vec3 r0_{};
  Vec3 u_f_{};
  Units units_{};
};

// --- classical comparison quantities -------------------------------------

Vec3 classical_momentum(const Vec3& u, const ParticleParams& par);
double classical_mass(const Vec3& u, const ParticleParams& par);

// Lorentz force  xi E + xi (u/c) x B  with  E = -(1/c) dA/dt - grad(wbar/xi),
// B = curl A  from the source's analytic Jacobian.
Vec3 lorentz_force_classical(double t, const Vec3& r, const Vec3& u, const PotentialSource& src,
                             const ParticleParams& par);
// Classical force plus the correction  -grad <xi A, u - u_f>  (u, u_f frozen).
Vec3 lorentz_force_modified(double t, const Vec3& r, const Vec3& u, const PotentialSource& src,
                            const ParticleParams& par);
// The velocity-suppressed net force  -grad(wbar) (1 - |u_f/c|^2).
Vec3 total_force_suppressed(double t, const Vec3& r, const PotentialSource& src);

// du/dt for the free vacuum model d(-wbar u)/dt = -grad wbar with a static
// wbar; throws DomainError when |wbar| < 1e-12 (degenerate mass).
Vec3 free_vacuum_rhs(double t, const Vec3& r, const Vec3& u, const PotentialSource& src);

// --- Hamiltonians (natural units, c = 1) ----------------------------------

double hamiltonian_free(const Vec3& p, double wbar);
double hamiltonian_interaction(const Vec3& P, double wbar, const Vec3& xiA);
double hamiltonian_dual(const Vec3& P, double wbar, const Vec3& xiA);

// Both branches of the rest mass consistent with initial energy E0 and
// potential magnitude |xi A0|; the '+' branch is the physical one.
struct MassBranches {
  double plus;
  double minus;
};
MassBranches rest_mass_from_energy(double E0, double xiA0_norm);

// --- proper-time flows -----------------------------------------------------

enum class ParticleModel { Free, Interaction, Dual };
enum class ParticleScheme { Rk4, ImplicitMidpoint };

struct TrajectoryPoint {
  double tau = 0.0;
  double t = 0.0;
  Vec3 r{};
  Vec3 u{};
  Vec3 P{};      // canonical momentum of the chosen model
  Vec3 p_kin{};  // kinetic momentum -wbar*u (equals P - xiA for gauge models)
  double H = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  bool truncated = false;
  std::string note;
};

struct FlowSpec {
  ParticleModel model = ParticleModel::Free;
  ParticleScheme scheme = ParticleScheme::Rk4;
  double dtau = 0.0;  // <= 0: use suggested_dtau
  long steps = 0;
  long record_every = 1;
};

// Step heuristic: |u| dtau <= h_char/100.
double suggested_dtau(const PotentialSource& src, const ParticleState& s);

// Integrates the chosen Hamiltonian in proper time from (r, u, t).  The
// canonical momentum is inferred from u.  For the free and dual models lab
// time advances with dt/dtau = sqrt(1 + |dr/dtau|^2).  The interaction model
// evolves the coordinate relative to its uniformly moving source, where the
// dynamics is autonomous (the rest-chart energy -sqrt(wbar'^2 - |P|^2) is
// conserved and the kinetic momentum obeys lorentz_force_modified exactly),
// and composes lab time through the source frame:
// dt = gamma_f * sqrt(1 + |dq/dtau|^2) dtau.  Leaving the domain of validity
// truncates the trajectory and annotates it instead of producing NaNs.
Trajectory hamiltonian_flow(const ParticleState& s0, const PotentialSource& src,
                            const ParticleParams& par, const FlowSpec& spec);

}  // namespace vfw
