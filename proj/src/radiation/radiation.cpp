#include "vfw/radiation.hpp"

#include <cmath>

namespace vfw {

namespace {

// One point of the rigid distribution (uniform on the shell surface or in
// the ball volume).  Everything downstream is a plain average over
// independent pairs of these, so the whole quadrature is pinned by Rng.
Vec3 sample_point(const ChargeDistribution& d, Rng& rng) {
  double radius = d.a;
  if (d.shape == ChargeDistribution::Shape::Ball)
    radius *= std::cbrt(rng.uniform());  // volume-uniform radial law
  return rng.unit_vector() * radius;
}

// Mean of kernel(r - r') over `mc.pairs` independent pairs.
template <typename Kernel>
double pair_average(const ChargeDistribution& d, const MonteCarlo& mc, Kernel kernel) {
  if (mc.pairs == 0) throw DomainError("pair sampling needs at least one pair");
  Rng rng(mc.seed);
  double sum = 0.0;
  for (std::size_t i = 0; i < mc.pairs; ++i) {
    const Vec3 x = sample_point(d, rng);
    const Vec3 y = sample_point(d, rng);
    sum += kernel(x - y);
  }
  return sum / static_cast<double>(mc.pairs);
}

}  // namespace

double self_energy(const ChargeDistribution& d, const MonteCarlo& mc) {
  const double mean = pair_average(d, mc, [](const Vec3& diff) { return 1.0 / norm(diff); });
  return 0.5 * d.xi * d.xi * mean;
}

double distance_moment(const ChargeDistribution& d, int m, const MonteCarlo& mc) {
  if (m < 0) throw DomainError("distance moments are defined for m >= 0");
  const double expo = static_cast<double>(m - 1);
  const double mean =
      pair_average(d, mc, [expo](const Vec3& diff) { return std::pow(norm(diff), expo); });
  return d.xi * d.xi * mean;
}

// --- rigid trajectories ------------------------------------------------------

RigidTrajectory RigidTrajectory::polynomial(std::vector<Vec3> coeffs, double t_lo, double t_hi,
                                            const Units& units) {
  if (!(t_lo <= t_hi)) throw DomainError("RigidTrajectory: empty validity window");
  RigidTrajectory traj;
  traj.coeffs_ = std::move(coeffs);
  // The slow-motion regime is part of the model, not a soft warning; scan the
  // window densely enough for the low-degree polynomials used here.
  const int scan = 2048;
  for (int i = 0; i <= scan; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / scan;
    if (norm(traj.derivative(0, t)) > 0.1 * units.c)
      throw DomainError("RigidTrajectory: |u| exceeds 0.1 c on the validity window");
  }
  return traj;
}

RigidTrajectory RigidTrajectory::harmonic(Vec3 amplitude, double omega, double phase,
                                          const Units& units) {
  if (norm(amplitude) > 0.1 * units.c)
    throw DomainError("RigidTrajectory: |u| exceeds 0.1 c on the validity window");
  RigidTrajectory traj;
  traj.harmonic_ = true;
  traj.amp_ = amplitude;
  traj.omega_ = omega;
  traj.phase_ = phase;
  return traj;
}

Vec3 RigidTrajectory::derivative(int order, double t) const {
  if (order < 0) throw Error("RigidTrajectory: derivative order must be non-negative");
  if (harmonic_) {
    // d^k/dt^k sin(w t + p) = w^k sin(w t + p + k pi/2).
    return amp_ * (std::pow(omega_, order) *
                   std::sin(omega_ * t + phase_ + 0.5 * M_PI * static_cast<double>(order)));
  }
  Vec3 out{};
  double tp = 1.0;
  for (std::size_t j = static_cast<std::size_t>(order); j < coeffs_.size(); ++j) {
    double fall = 1.0;  // j (j-1) ... (j-order+1)
    for (int k = 0; k < order; ++k) fall *= static_cast<double>(j - k);
    out += coeffs_[j] * (fall * tp);
    tp *= t;
  }
  return out;
}

// --- self-force series -------------------------------------------------------

SelfForceSeries self_force_series(const ChargeDistribution& d, const MonteCarlo& mc,
                                  const RigidTrajectory& traj, double t, int order,
                                  const Units& units) {
  if (order < 0) throw DomainError("self-force series order must be non-negative");
  if (order > 30) throw Error("self-force series order too large for double factorials");
  if (norm(traj.velocity(t)) > 0.1 * units.c)
    throw DomainError("self-force series requires |u| <= 0.1 c at the evaluation time");

  SelfForceSeries series;
  series.terms.reserve(static_cast<std::size_t>(order) + 1);
  double factorial = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 0) factorial *= static_cast<double>(m);
    const double I_m = distance_moment(d, m, mc);
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^{m+1}
    const double coeff =
        (2.0 / 3.0) * sign * I_m / (factorial * std::pow(units.c, static_cast<double>(m + 2)));
    SelfForceTerm term;
    term.m = m;
    term.I_m = I_m;
    term.coefficient = coeff;
    term.force = traj.derivative(m + 1, t) * coeff;
    series.total += term.force;
    series.terms.push_back(term);
  }
  return series;
}

// --- masses ------------------------------------------------------------------

double em_mass(const ChargeDistribution& d, const MonteCarlo& mc, const Units& units) {
  return self_energy(d, mc) / (units.c * units.c);
}

double em_mass_moving(const ChargeDistribution& d, const MonteCarlo& mc, const Vec3& u,
                      const Units& units) {
  const double b2 = norm2(u) / (units.c * units.c);
  if (b2 >= 1.0) throw DomainError("em mass: velocity must stay below c");
  return em_mass(d, mc, units) / std::sqrt(1.0 - b2);
}

ObservedMass observed_mass(double m_bare, const ChargeDistribution& d, const MonteCarlo& mc,
                           const Vec3& u, const Units& units) {
  const double em = (4.0 / 3.0) * em_mass_moving(d, mc, u, units);
  ObservedMass out;
  out.value = m_bare + em;
  out.em_fraction = out.value != 0.0 ? em / out.value : 1.0;
  out.em_dominated = out.em_fraction > 0.5;  // the 1/a self-energy regime
  return out;
}

}  // namespace vfw
