#include "vfw/particle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vfw {

namespace {

double gamma_of(const Vec3& u, double c) {
  const double b2 = norm2(u) / (c * c);
  if (b2 >= 1.0) throw DomainError("velocity must stay below c");
  return 1.0 / std::sqrt(1.0 - b2);
}

}  // namespace

// --- potential sources ------------------------------------------------------

PotentialSource PotentialSource::uniform(double wbar0, double xi, Vec3 u_f, const Units& units) {
  if (norm(u_f) >= units.c) throw DomainError("source velocity must stay below c");
  if (norm(u_f) > 0.0 && xi == 0.0)
    throw DomainError("a moving uniform source needs a nonzero charge to define A");
  PotentialSource s;
  s.kind_ = Kind::Uniform;
  s.xi_ = xi;
  s.wbar0_ = wbar0;
  s.u_f_ = u_f;
  s.units_ = units;
  return s;
}

PotentialSource PotentialSource::coulomb(double xi, double xi_f, Vec3 center, const Units& units) {
  PotentialSource s;
  s.kind_ = Kind::StaticCoulomb;
  s.xi_ = xi;
  s.xi_f_ = xi_f;
  s.r0_ = center;
  s.units_ = units;
  return s;
}

PotentialSource PotentialSource::moving_coulomb(double xi, double xi_f, Vec3 r0, Vec3 u_f,
                                                const Units& units) {
  if (norm(u_f) >= units.c) throw DomainError("source velocity must stay below c");
  PotentialSource s;
  s.kind_ = Kind::MovingCoulomb;
  s.xi_ = xi;
  s.xi_f_ = xi_f;
  s.r0_ = r0;
  s.u_f_ = u_f;
  s.units_ = units;
  return s;
}

double PotentialSource::wbar(double t, const Vec3& r) const {
  switch (kind_) {
    case Kind::Uniform:
      return wbar0_;
    case Kind::StaticCoulomb: {
      const double d = norm(r - r0_);
      if (d == 0.0) throw DomainError("Coulomb potential evaluated at its center");
      return xi_ * xi_f_ / d;
    }
    case Kind::MovingCoulomb: {
      // Potential of a uniformly moving point charge, written with the
      // present-position separation: the parallel component is stretched by
      // gamma in the source rest frame.
      const Vec3 d = r - source_position(t);
      const double uf2 = norm2(u_f_) / (units_.c * units_.c);
      if (uf2 == 0.0) {
        const double dist = norm(d);
        if (dist == 0.0) throw DomainError("Coulomb potential evaluated at its center");
        return xi_ * xi_f_ / dist;
      }
      const double g2 = 1.0 / (1.0 - uf2);
      const double dpar = dot(d, u_f_) / norm(u_f_);
      const double s2 = norm2(d) + (g2 - 1.0) * dpar * dpar;
      if (s2 == 0.0) throw DomainError("Coulomb potential evaluated at its center");
      return xi_ * xi_f_ * std::sqrt(g2 / s2);
    }
  }
  return 0.0;
}

Vec3 PotentialSource::grad_wbar(double t, const Vec3& r) const {
  switch (kind_) {
    case Kind::Uniform:
      return {};
    case Kind::StaticCoulomb: {
      const Vec3 d = r - r0_;
      const double dist = norm(d);
      if (dist == 0.0) throw DomainError("Coulomb potential evaluated at its center");
      return d * (-xi_ * xi_f_ / (dist * dist * dist));
    }
    case Kind::MovingCoulomb: {
      const Vec3 d = r - source_position(t);
      const double uf2 = norm2(u_f_) / (units_.c * units_.c);
      if (uf2 == 0.0) {
        const double dist = norm(d);
        if (dist == 0.0) throw DomainError("Coulomb potential evaluated at its center");
        return d * (-xi_ * xi_f_ / (dist * dist * dist));
      }
      const double g2 = 1.0 / (1.0 - uf2);
      const Vec3 uhat = u_f_ / norm(u_f_);
      const double dpar = dot(d, uhat);
      const double s2 = norm2(d) + (g2 - 1.0) * dpar * dpar;
      if (s2 == 0.0) throw DomainError("Coulomb potential evaluated at its center");
      const Vec3 ds = d + uhat * ((g2 - 1.0) * dpar);  // s * grad(s)
      return ds * (-xi_ * xi_f_ * std::sqrt(g2) / (s2 * std::sqrt(s2)));
    }
  }
  return {};
}

Vec3 PotentialSource::vector_potential(double t, const Vec3& r) const {
  if (norm2(u_f_) == 0.0) return {};
  // xi A = wbar u_f / c, so A itself is independent of the probe charge.
  return u_f_ * (wbar(t, r) / (xi_ * units_.c));
}

Vec3 PotentialSource::dA_dt(double t, const Vec3& r) const {
  if (kind_ != Kind::MovingCoulomb || norm2(u_f_) == 0.0) return {};
  // wbar depends on time only through r - u_f t, so d(wbar)/dt = -u_f.grad.
  const double dwdt = -dot(u_f_, grad_wbar(t, r));
  return u_f_ * (dwdt / (xi_ * units_.c));
}

Mat3 PotentialSource::jacobian_A(double t, const Vec3& r) const {
  Mat3 J;
  if (kind_ != Kind::MovingCoulomb || norm2(u_f_) == 0.0) return J;
  const Vec3 g = grad_wbar(t, r) / (xi_ * units_.c);  // grad of |A| direction factor
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) J.a[i][j] = u_f_[i] * g[j];
  return J;
}

double PotentialSource::characteristic_length(double t, const Vec3& r) const {
  switch (kind_) {
    case Kind::Uniform:
      return 1.0;
    case Kind::StaticCoulomb:
    case Kind::MovingCoulomb:
      return std::max(norm(r - source_position(t)), 1e-12);
  }
  return 1.0;
}

// --- classical comparison quantities ----------------------------------------

Vec3 classical_momentum(const Vec3& u, const ParticleParams& par) {
  return u * (par.m0 * gamma_of(u, par.units.c));
}

double classical_mass(const Vec3& u, const ParticleParams& par) {
  return par.m0 * gamma_of(u, par.units.c);
}

Vec3 lorentz_force_classical(double t, const Vec3& r, const Vec3& u, const PotentialSource& src,
                             const ParticleParams& par) {
  const double c = par.units.c;
  // Fields from the source potentials; wbar already carries the source-side
  // charge pairing, so rescale by the probe charge actually asked for.
  const double ratio = src.xi() == 0.0 ? 1.0 : par.xi / src.xi();
  const Vec3 xiE = src.dA_dt(t, r) * (-par.xi / c) - src.grad_wbar(t, r) * ratio;
  const Mat3 J = src.jacobian_A(t, r);
  const Vec3 B{J.a[2][1] - J.a[1][2], J.a[0][2] - J.a[2][0], J.a[1][0] - J.a[0][1]};
  return xiE + cross(u / c, B) * par.xi;
}

Vec3 lorentz_force_modified(double t, const Vec3& r, const Vec3& u, const PotentialSource& src,
                            const ParticleParams& par) {
  // Correction -grad <xi A, u - u_f> with both velocities held fixed:
  // grad(A.w) = J^T w for frozen w.
  const Vec3 w = u - src.source_velocity();
  const Vec3 corr = src.jacobian_A(t, r).tmul(w) * (-par.xi);
  return lorentz_force_classical(t, r, u, src, par) + corr;
}

Vec3 total_force_suppressed(double t, const Vec3& r, const PotentialSource& src) {
  const double c = src.units().c;
  const double suppress = 1.0 - norm2(src.source_velocity()) / (c * c);
  return src.grad_wbar(t, r) * (-suppress);
}

Vec3 free_vacuum_rhs(double t, const Vec3& r, const Vec3& u, const PotentialSource& src) {
  const double c = src.units().c;
  if (norm(u) >= c) throw DomainError("velocity must stay below c");
  const double wb = src.wbar(t, r);
  if (std::fabs(wb) < 1e-12)
    throw DomainError("degenerate inertial mass: |wbar| below 1e-12");
  // d(-wbar u / c^2)/dt = -grad wbar with wbar carried along the trajectory.
  const Vec3 gw = src.grad_wbar(t, r);
  return (gw * (c * c) - u * dot(u, gw)) / wb;
}

// --- Hamiltonians ------------------------------------------------------------

namespace {
double mass_shell(double wbar2, double p2) {
  const double d2 = wbar2 - p2;
  if (d2 <= 0.0)
    throw DomainError("momentum magnitude reached the inertial potential (no mass shell)");
  return std::sqrt(d2);
}
}  // namespace

double hamiltonian_free(const Vec3& p, double wbar) {
  return -mass_shell(wbar * wbar, norm2(p));
}

double hamiltonian_interaction(const Vec3& P, double wbar, const Vec3& xiA) {
  const double D = mass_shell(wbar * wbar, norm2(P));
  return -D - dot(xiA, P) / D;
}

double hamiltonian_dual(const Vec3& P, double wbar, const Vec3& xiA) {
  return -mass_shell(wbar * wbar, norm2(P - xiA));
}

MassBranches rest_mass_from_energy(double E0, double xiA0_norm) {
  if (E0 <= 0.0) throw DomainError("initial energy must be positive");
  if (xiA0_norm < 0.0) throw DomainError("|xi A| must be non-negative");
  if (xiA0_norm == 0.0) return {E0, 0.0};
  const double a2 = xiA0_norm * xiA0_norm;
  const double E2 = E0 * E0;
  // With t = (xiA/m)^2 the energy relation becomes
  //   (a^2 + 2 E^2) t^2 - (2 a^2 + E^2) t + a^2 = 0,
  // whose discriminant E^2 (E^2 - 4 a^2) demands E >= 2 |xi A|.
  const double disc = E2 * (E2 - 4.0 * a2);
  if (disc < 0.0)
    throw DomainError("no rest mass exists: initial energy below 2 |xi A|");
  const double root = std::sqrt(disc);
  const double den = 2.0 * (a2 + 2.0 * E2);
  const double t_lo = (2.0 * a2 + E2 - root) / den;  // small t -> heavy branch
  const double t_hi = (2.0 * a2 + E2 + root) / den;
  return {xiA0_norm / std::sqrt(t_lo), xiA0_norm / std::sqrt(t_hi)};
}

// --- proper-time flows --------------------------------------------------------

namespace {

// Raised when a flow step crosses |P| -> |wbar|; converted into a truncated
// trajectory by the driver rather than leaking NaNs.
struct MassShellExit {
  double tau;
};

struct State7 {
  Vec3 r{};
  Vec3 P{};
  double t = 0.0;
};

State7 axpy(const State7& z, const State7& d, double s) {
  return {z.r + d.r * s, z.P + d.P * s, z.t + d.t * s};
}

struct FlowContext {
  const PotentialSource* src;
  ParticleModel model;
  double xi;  // charge used to pair A with wbar
  // Interaction-model chart: the state position is q = r - r_f(t), where the
  // source-frame potential is static and the Hamiltonian autonomous.  The
  // chart anchor is the source position at t = 0.
  double gamma_f = 1.0;
  Vec3 u_f{};
  Vec3 anchor{};
};

struct Derivs {
  Vec3 dr{};
  Vec3 dP{};
  double dt = 0.0;
};

Derivs flow_rhs(const FlowContext& ctx, const State7& z, double tau) {
  const PotentialSource& src = *ctx.src;
  Derivs d;
  if (ctx.model == ParticleModel::Free) {
    const double wb = src.wbar(z.t, z.r);
    const Vec3 gw = src.grad_wbar(z.t, z.r);
    const double D2 = wb * wb - norm2(z.P);
    if (!(D2 > 0.0) || !std::isfinite(D2)) throw MassShellExit{tau};
    const double D = std::sqrt(D2);
    d.dr = z.P / D;
    d.dP = gw * (wb / D);
    d.dt = std::sqrt(1.0 + norm2(d.dr));
  } else if (ctx.model == ParticleModel::Interaction) {
    // The model is the free flow of the relative coordinate q = r - r_f in
    // the source-frame potential wp (static there); the source's own motion
    // enters only through the chart and the time composition
    // dt'^2 = dtau^2 + |dq|^2, dt = gamma_f dt'.
    const Vec3 lab = z.r + ctx.anchor;
    const double wp = src.wbar(0.0, lab) / ctx.gamma_f;
    const Vec3 gwp = src.grad_wbar(0.0, lab) / ctx.gamma_f;
    const double D2 = wp * wp - norm2(z.P);
    if (!(D2 > 0.0) || !std::isfinite(D2)) throw MassShellExit{tau};
    const double D = std::sqrt(D2);
    d.dr = z.P / D;
    d.dP = gwp * (wp / D);
    d.dt = ctx.gamma_f * std::sqrt(1.0 + norm2(d.dr));
  } else {  // Dual
    const Vec3 xiA = src.vector_potential(z.t, z.r) * ctx.xi;
    const Mat3 J = src.jacobian_A(z.t, z.r);
    const double wb = src.wbar(z.t, z.r);
    const Vec3 gw = src.grad_wbar(z.t, z.r);
    const Vec3 pk = z.P - xiA;
    const double D2 = wb * wb - norm2(pk);
    if (!(D2 > 0.0) || !std::isfinite(D2)) throw MassShellExit{tau};
    const double D = std::sqrt(D2);
    d.dr = pk / D;
    d.dP = (gw * wb + J.tmul(pk) * ctx.xi) / D;
    d.dt = std::sqrt(1.0 + norm2(d.dr));
  }
  return d;
}

TrajectoryPoint observe(const FlowContext& ctx, const State7& z, double tau) {
  const PotentialSource& src = *ctx.src;
  TrajectoryPoint pt;
  pt.tau = tau;
  pt.t = z.t;
  pt.P = z.P;
  const Derivs d = flow_rhs(ctx, z, tau);
  if (ctx.model == ParticleModel::Interaction) {
    const Vec3 lab = z.r + ctx.anchor;
    const double wlab = src.wbar(0.0, lab);
    const Vec3 xiA = ctx.u_f * wlab;
    pt.r = z.r + src.source_position(z.t);
    pt.p_kin = z.P - xiA;
    pt.H = hamiltonian_interaction(z.P, wlab / ctx.gamma_f, xiA);
    pt.u = d.dr / d.dt + ctx.u_f;
  } else {
    const double wb = src.wbar(z.t, z.r);
    const Vec3 xiA = ctx.model == ParticleModel::Free
                         ? Vec3{}
                         : src.vector_potential(z.t, z.r) * ctx.xi;
    pt.r = z.r;
    pt.p_kin = z.P - xiA;
    pt.H = ctx.model == ParticleModel::Free ? hamiltonian_free(z.P, wb)
                                            : hamiltonian_dual(z.P, wb, xiA);
    pt.u = d.dr / d.dt;
  }
  if (!std::isfinite(pt.H) || !std::isfinite(pt.u.x) || !std::isfinite(pt.u.y) ||
      !std::isfinite(pt.u.z))
    throw MassShellExit{tau};
  return pt;
}

State7 rk4_step(const FlowContext& ctx, const State7& z, double tau, double dtau) {
  const Derivs k1 = flow_rhs(ctx, z, tau);
  const Derivs k2 = flow_rhs(ctx, axpy(z, {k1.dr, k1.dP, k1.dt}, 0.5 * dtau), tau + 0.5 * dtau);
  const Derivs k3 = flow_rhs(ctx, axpy(z, {k2.dr, k2.dP, k2.dt}, 0.5 * dtau), tau + 0.5 * dtau);
  const Derivs k4 = flow_rhs(ctx, axpy(z, {k3.dr, k3.dP, k3.dt}, dtau), tau + dtau);
  State7 out = z;
  out.r += (k1.dr + (k2.dr + k3.dr) * 2.0 + k4.dr) * (dtau / 6.0);
  out.P += (k1.dP + (k2.dP + k3.dP) * 2.0 + k4.dP) * (dtau / 6.0);
  out.t += (k1.dt + (k2.dt + k3.dt) * 2.0 + k4.dt) * (dtau / 6.0);
  return out;
}

State7 midpoint_step(const FlowContext& ctx, const State7& z, double tau, double dtau) {
  // Fixed-point iteration on z' = z + dtau f((z + z')/2, tau + dtau/2).
  const Derivs k0 = flow_rhs(ctx, z, tau);
  State7 zn = axpy(z, {k0.dr, k0.dP, k0.dt}, dtau);
  for (int it = 0; it < 200; ++it) {
    const State7 mid = {(z.r + zn.r) * 0.5, (z.P + zn.P) * 0.5, 0.5 * (z.t + zn.t)};
    const Derivs k = flow_rhs(ctx, mid, tau + 0.5 * dtau);
    const State7 next = axpy(z, {k.dr, k.dP, k.dt}, dtau);
    const double delta = norm(next.r - zn.r) + norm(next.P - zn.P) + std::fabs(next.t - zn.t);
    zn = next;
    const double scale = 1.0 + norm(zn.r) + norm(zn.P) + std::fabs(zn.t);
    if (delta < 1e-14 * scale) return zn;
  }
  throw Error("implicit midpoint iteration failed to converge");
}

}  // namespace

double suggested_dtau(const PotentialSource& src, const ParticleState& s) {
  const double h = src.characteristic_length(s.t, s.r);
  const double speed = std::max(norm(s.u), 0.01 * src.units().c);
  return h / (100.0 * speed);
}

Trajectory hamiltonian_flow(const ParticleState& s0, const PotentialSource& src,
                            const ParticleParams& par, const FlowSpec& spec) {
  if (par.units.c != 1.0 || src.units().c != 1.0)
    throw DomainError("proper-time flows are formulated in natural units (c = 1)");
  if (spec.steps < 1) throw Error("flow needs at least one step");
  if (norm(s0.u) >= 1.0) throw DomainError("initial velocity must stay below c");

  const double wb0 = src.wbar(s0.t, s0.r);
  if (!(wb0 < 0.0))
    throw DomainError("the inertial potential must be negative at the starting point");

  FlowContext ctx{&src, spec.model, src.xi()};
  State7 z;
  z.r = s0.r;
  z.t = s0.t;
  switch (spec.model) {
    case ParticleModel::Free:
      z.P = s0.u * (-wb0);
      break;
    case ParticleModel::Dual:
      z.P = s0.u * (-wb0) + src.vector_potential(s0.t, s0.r) * src.xi();
      break;
    case ParticleModel::Interaction: {
      const Vec3 uf = src.source_velocity();
      ctx.gamma_f = 1.0 / std::sqrt(1.0 - norm2(uf));
      ctx.u_f = uf;
      ctx.anchor = src.source_position(0.0);
      // Kinematic cone of the relative motion: |u - u_f| gamma_f < 1.
      const Vec3 w = s0.u - uf;
      const double g2w2 = ctx.gamma_f * ctx.gamma_f * norm2(w);
      if (g2w2 >= 1.0)
        throw DomainError("relative velocity outside the interaction model's kinematic cone");
      z.r = s0.r - src.source_position(s0.t);  // state position is q = r - r_f
      const Vec3 qdot0 = w * (ctx.gamma_f / std::sqrt(1.0 - g2w2));
      const double wp0 = wb0 / ctx.gamma_f;
      z.P = qdot0 * (-wp0 / std::sqrt(1.0 + norm2(qdot0)));
      break;
    }
  }

  const double dtau = spec.dtau > 0.0 ? spec.dtau : suggested_dtau(src, s0);
  const long every = std::max<long>(1, spec.record_every);

  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(spec.steps / every) + 2);
  double tau = s0.tau;
  traj.points.push_back(observe(ctx, z, tau));

  for (long step = 1; step <= spec.steps; ++step) {
    try {
      z = spec.scheme == ParticleScheme::Rk4 ? rk4_step(ctx, z, tau, dtau)
                                             : midpoint_step(ctx, z, tau, dtau);
      tau += dtau;
      if (step % every == 0 || step == spec.steps)
        traj.points.push_back(observe(ctx, z, tau));
    } catch (const MassShellExit&) {
      traj.truncated = true;
      std::ostringstream note;
      note << "flow truncated after " << (step - 1) << " of " << spec.steps
           << " steps: momentum reached the inertial potential near tau = " << tau;
      traj.note = note.str();
      break;
    }
  }
  return traj;
}

}  // namespace vfw
