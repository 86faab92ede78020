#pragma once
#include <cstdint>
#include <vector>

#include "vfw/errors.hpp"
#include "vfw/rng.hpp"
#include "vfw/units.hpp"
#include "vfw/vector3.hpp"

namespace vfw {

// Rigid spherical charge distribution of total charge xi and radius a.
struct ChargeDistribution {
  enum class Shape { Shell, Ball };
  Shape shape = Shape::Shell;
  double a = 1.0;
  double xi = 1.0;

  ChargeDistribution(Shape s, double radius, double charge) : shape(s), a(radius), xi(charge) {
    if (!(a > 0.0)) throw DomainError("ChargeDistribution: radius must be positive");
  }
};

// Pair-sampling Monte Carlo control.  The same (seed, pairs) always yields
// the same estimate bit for bit.
struct MonteCarlo {
  std::uint64_t seed = 1;
  std::size_t pairs = 1000000;
};

// Electrostatic self energy (1/2) int rho rho' / |r-r'|; for the shell this
// is xi^2/(2a).
double self_energy(const ChargeDistribution& d, const MonteCarlo& mc);

// Distance moments I_m = int rho rho' |r-r'|^{m-1}; I_1 = xi^2 identically.
double distance_moment(const ChargeDistribution& d, int m, const MonteCarlo& mc);

// Rigid low-velocity trajectory with analytic time derivatives of u(t).
// Construction rejects |u| > 0.1 c anywhere on the stated window.
class RigidTrajectory {
 public:
  static RigidTrajectory polynomial(std::vector<Vec3> coeffs, double t_lo, double t_hi,
                                    const Units& units = {});
  static RigidTrajectory harmonic(Vec3 amplitude, double omega, double phase,
                                  const Units& units = {});
  Vec3 velocity(double t) const { return derivative(0, t); }
  Vec3 derivative(int order, double t) const;  // d^order u / dt^order

 private:
  RigidTrajectory() = default;
  bool harmonic_ = false;
  std::vector<Vec3> coeffs_;
  Vec3 amp_{};
  double omega_ = 0.0, phase_ = 0.0;
};

// One term of the retarded self-force expansion
//   F^(N) = (2/3) sum_{m=0..N} (-1)^{m+1} I_m / (m! c^{m+2}) d^{m+1}u/dt^{m+1}.
struct SelfForceTerm {
  int m = 0;
  double coefficient = 0.0;  // (2/3)(-1)^{m+1}/(m! c^{m+2}) * I_m
  double I_m = 0.0;
  Vec3 force{};
};
struct SelfForceSeries {
  std::vector<SelfForceTerm> terms;
  Vec3 total{};
};
SelfForceSeries self_force_series(const ChargeDistribution& d, const MonteCarlo& mc,
                                  const RigidTrajectory& traj, double t, int order,
                                  const Units& units = {});

// Electromagnetic mass E_es/c^2 and its velocity-dependent form.
double em_mass(const ChargeDistribution& d, const MonteCarlo& mc, const Units& units = {});
double em_mass_moving(const ChargeDistribution& d, const MonteCarlo& mc, const Vec3& u,
                      const Units& units = {});

// Total observed inertia m_g + (4/3) m_es(u); em_fraction flags the
// small-radius regime where the 1/a self-energy dominates.
struct ObservedMass {
  double value = 0.0;
  double em_fraction = 0.0;
  bool em_dominated = false;
};
ObservedMass observed_mass(double m_bare, const ChargeDistribution& d, const MonteCarlo& mc,
                           const Vec3& u, const Units& units = {});

}  // namespace vfw
