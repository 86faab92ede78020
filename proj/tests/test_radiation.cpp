#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "vfw/radiation.hpp"

using namespace vfw;

namespace {

const MonteCarlo kMc{1, 1000000};  // fixed seed, one million pairs

ChargeDistribution shell(double a = 1.0, double xi = 1.0) {
  return {ChargeDistribution::Shape::Shell, a, xi};
}
ChargeDistribution ball(double a = 1.0, double xi = 1.0) {
  return {ChargeDistribution::Shape::Ball, a, xi};
}

}  // namespace

TEST_CASE("self energy of the unit shell and unit ball") {
  // Shell: xi^2/(2a) = 0.5.  Ball: (3/5) xi^2/a = 0.6 (volume average of
  // the 1/|r-r'| kernel, reduced analytically).
  CHECK(std::fabs(self_energy(shell(), kMc) - 0.5) < 0.005);
  CHECK(std::fabs(self_energy(ball(), kMc) - 0.6) < 0.006);
  CHECK_THROWS_AS(ChargeDistribution(ChargeDistribution::Shape::Shell, -1.0, 1.0), DomainError);
}

TEST_CASE("self energy scalings are exact for a shared seed") {
  // Doubling the radius rescales every sampled pair by exactly 2 (a power of
  // two), so the kernel mean halves bit for bit; the charge enters only as
  // the xi^2 prefactor.
  const double base = self_energy(shell(1.0, 1.0), kMc);
  CHECK(self_energy(shell(2.0, 1.0), kMc) == 0.5 * base);
  CHECK(self_energy(shell(1.0, 2.0), kMc) == 4.0 * base);
  CHECK(self_energy(ball(2.0, 1.0), kMc) == 0.5 * self_energy(ball(1.0, 1.0), kMc));
}

TEST_CASE("distance moments of the unit shell") {
  CHECK(distance_moment(shell(), 1, kMc) == 1.0);  // |d|^0 kernel: exact
  CHECK(std::fabs(distance_moment(shell(), 0, kMc) - 1.0) < 0.01);
  CHECK(std::fabs(distance_moment(shell(), 2, kMc) - 4.0 / 3.0) < 0.01 * 4.0 / 3.0);
  // I_0 uses the same kernel as the self energy, so with a shared seed the
  // relation I_0 = 2 E_es holds exactly, not just statistically.
  CHECK(distance_moment(shell(), 0, kMc) == 2.0 * self_energy(shell(), kMc));
  // Second moment of the shell separation: E|d|^2 = 2 a^2.
  CHECK(std::fabs(distance_moment(shell(), 3, kMc) - 2.0) < 0.01 * 2.0);
  CHECK_THROWS_AS(distance_moment(shell(), -1, kMc), DomainError);
  CHECK_THROWS_AS(distance_moment(shell(), 0, MonteCarlo{1, 0}), DomainError);
}

TEST_CASE("monte carlo estimates are reproducible and converge as 1/sqrt(pairs)") {
  const double once = distance_moment(shell(), 0, kMc);
  const double again = distance_moment(shell(), 0, kMc);
  CHECK(once == again);
  CHECK(distance_moment(shell(), 0, MonteCarlo{7, 1000000}) != once);

  // RMS error over several seeds against the analytic value 1.0 should drop
  // by about 4x when the pair count grows 16x.
  auto rms_err = [](std::size_t pairs) {
    double acc = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const double err = distance_moment(shell(), 0, MonteCarlo{seed, pairs}) - 1.0;
      acc += err * err;
    }
    return std::sqrt(acc / 8.0);
  };
  const double coarse = rms_err(2000);
  const double fine = rms_err(32000);
  CHECK(coarse / fine > 2.0);
  CHECK(coarse / fine < 8.0);
}

TEST_CASE("spherical-average identities behind the 2/3 angular factor") {
  // For a spherically symmetric distribution the squared projection of the
  // pair separation onto any axis averages to 1/3, and the mean separation
  // direction vanishes; both are checked by direct quadrature once.
  Rng rng(42);
  const std::size_t n = 200000;
  double cos2 = 0.0;
  Vec3 dir{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 d = rng.unit_vector() - rng.unit_vector();
    cos2 += d.z * d.z / norm2(d);
    dir += d / norm(d);
  }
  cos2 /= static_cast<double>(n);
  dir = dir / static_cast<double>(n);
  CHECK(std::fabs(cos2 - 1.0 / 3.0) < 0.01 / 3.0);
  CHECK(norm(dir) < 0.01);
}

TEST_CASE("rigid trajectories: analytic derivatives and the slow-motion bound") {
  const Vec3 c0{0.01, 0.0, 0.02}, c1{0.0, 0.03, 0.0}, c2{0.005, 0.0, 0.0};
  RigidTrajectory poly = RigidTrajectory::polynomial({c0, c1, c2}, 0.0, 1.0);
  const double t = 0.7;
  CHECK(norm(poly.velocity(t) - (c0 + c1 * t + c2 * (t * t))) < 1e-15);
  CHECK(norm(poly.derivative(1, t) - (c1 + c2 * (2.0 * t))) < 1e-15);
  CHECK(norm(poly.derivative(2, t) - c2 * 2.0) < 1e-15);
  CHECK(norm(poly.derivative(3, t)) == 0.0);
  CHECK_THROWS_AS(poly.derivative(-1, t), Error);

  RigidTrajectory osc = RigidTrajectory::harmonic({0.05, 0.0, 0.0}, 2.0, 0.3);
  // d^2 u/dt^2 = -omega^2 u for every phase.
  CHECK(norm(osc.derivative(2, t) + osc.velocity(t) * 4.0) < 1e-15);
  CHECK(norm(osc.derivative(1, 0.0) - Vec3{0.05 * 2.0 * std::cos(0.3), 0.0, 0.0}) < 1e-15);

  CHECK_THROWS_AS(RigidTrajectory::harmonic({0.2, 0.0, 0.0}, 1.0, 0.0), DomainError);
  // u = (0.05 + 0.2 t) x exceeds 0.1c inside [0, 1] but not on [0, 0.1].
  CHECK_THROWS_AS(RigidTrajectory::polynomial({{0.05, 0, 0}, {0.2, 0, 0}}, 0.0, 1.0), DomainError);
  CHECK_NOTHROW(RigidTrajectory::polynomial({{0.05, 0, 0}, {0.2, 0, 0}}, 0.0, 0.1));
}

TEST_CASE("self-force series: null test, leading terms, charge scaling") {
  const ChargeDistribution d = shell();
  RigidTrajectory uniform = RigidTrajectory::polynomial({{0.05, 0.02, -0.01}}, -10.0, 10.0);
  for (int order = 0; order <= 4; ++order) {
    const SelfForceSeries s = self_force_series(d, kMc, uniform, 1.3, order);
    CHECK(norm(s.total) == 0.0);  // constant u: every derivative vanishes
    for (const auto& term : s.terms) CHECK(norm(term.force) == 0.0);
  }

  RigidTrajectory osc = RigidTrajectory::harmonic({0.01, 0.0, 0.0}, 1.0, 0.3);
  const double t = 0.4;
  const SelfForceSeries s = self_force_series(d, kMc, osc, t, 3);
  REQUIRE(s.terms.size() == 4);
  // Electromagnetic-mass term: -(4 E_es / 3 c^2) du/dt, exact for a shared
  // seed because I_0 = 2 E_es bit for bit.
  const double e_es = self_energy(d, kMc);
  CHECK(norm(s.terms[0].force - osc.derivative(1, t) * (-4.0 * e_es / 3.0)) < 1e-15);
  // Radiation term: +(2 xi^2 / 3 c^3) d^2u/dt^2 with I_1 = xi^2 exact.
  CHECK(norm(s.terms[1].force - osc.derivative(2, t) * (2.0 / 3.0)) < 1e-16);
  // Every term carries xi^2.
  const SelfForceSeries s2 = self_force_series(shell(1.0, 2.0), kMc, osc, t, 3);
  for (std::size_t i = 0; i < s.terms.size(); ++i)
    CHECK(norm(s2.terms[i].force - s.terms[i].force * 4.0) < 1e-18);

  CHECK_THROWS_AS(self_force_series(d, kMc, osc, t, -1), DomainError);
  // Slow-motion bound is enforced at the evaluation time.
  RigidTrajectory edge = RigidTrajectory::polynomial({{0.0, 0, 0}, {0.09, 0, 0}}, 0.0, 1.0);
  CHECK_NOTHROW(self_force_series(d, kMc, edge, 1.0, 1));
  CHECK_THROWS_AS(self_force_series(d, kMc, edge, 2.0, 1), DomainError);
}

TEST_CASE("truncated series against the resummed force") {
  // With N = 1 the difference from -d/dt((4/3) m_es u) + (2 xi^2/3c^3) u''
  // is exactly the relativistic correction of the mass term; with N = 2 the
  // extra piece is the I_2 term, which scales linearly in the radius (shared
  // seed makes the halving ratio sharp).
  RigidTrajectory osc = RigidTrajectory::harmonic({0.01, 0.0, 0.0}, 1.0, 0.3);
  const double t = 0.4;

  auto resummed = [&](const ChargeDistribution& d) {
    const double m0 = em_mass(d, kMc);
    const Vec3 u = osc.velocity(t);
    const Vec3 du = osc.derivative(1, t);
    const double g = 1.0 / std::sqrt(1.0 - norm2(u));
    // d/dt(gamma u) = gamma du + gamma^3 <u, du> u.
    const Vec3 ddt_gu = du * g + u * (g * g * g * dot(u, du));
    return ddt_gu * (-4.0 * m0 / 3.0) + osc.derivative(2, t) * (2.0 / 3.0);
  };

  const ChargeDistribution d1 = shell(1.0), dh = shell(0.5);
  const Vec3 r1 = self_force_series(d1, kMc, osc, t, 1).total - resummed(d1);
  {
    const double m0 = em_mass(d1, kMc);
    const Vec3 u = osc.velocity(t);
    const Vec3 du = osc.derivative(1, t);
    const double g = 1.0 / std::sqrt(1.0 - norm2(u));
    const Vec3 mass_correction = (du * g + u * (g * g * g * dot(u, du)) - du) * (4.0 * m0 / 3.0);
    CHECK(norm(r1 - mass_correction) < 1e-18);
  }

  const Vec3 r2a = self_force_series(d1, kMc, osc, t, 2).total - resummed(d1);
  const Vec3 r2h = self_force_series(dh, kMc, osc, t, 2).total - resummed(dh);
  const double ratio = norm(r2a) / norm(r2h);
  CHECK(ratio > 1.9);
  CHECK(ratio < 2.1);
}

TEST_CASE("electromagnetic and observed masses") {
  const ChargeDistribution d = shell();
  const double m0 = em_mass(d, kMc);
  CHECK(std::fabs(m0 - 0.5) < 0.005);
  CHECK(em_mass_moving(d, kMc, {0, 0, 0}) == m0);
  CHECK(std::fabs(em_mass_moving(d, kMc, {0.6, 0, 0}) - 1.25 * m0) < 1e-15);
  CHECK_THROWS_AS(em_mass_moving(d, kMc, {1.0, 0, 0}), DomainError);

  const ObservedMass rest = observed_mass(1.0, d, kMc, {0, 0, 0});
  CHECK(std::fabs(rest.value - (1.0 + 2.0 / 3.0)) < 0.007);
  CHECK(!rest.em_dominated);
  const ObservedMass bare0 = observed_mass(0.0, d, kMc, {0, 0, 0});
  CHECK(std::fabs(bare0.value - (4.0 / 3.0) * m0) < 1e-15);
  CHECK(bare0.em_fraction == 1.0);
  CHECK(bare0.em_dominated);
  // Point limit: halving the radius doubles the electromagnetic part.
  const ObservedMass fine = observed_mass(1.0, shell(0.5), kMc, {0, 0, 0});
  CHECK(std::fabs((fine.value - 1.0) - 2.0 * (rest.value - 1.0)) < 1e-15);
  CHECK(observed_mass(0.01, shell(1e-4), kMc, {0, 0, 0}).em_dominated);
}
