#include "vfw/fields.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <utility>

#include "json.hpp"
#include "vfw/errors.hpp"

namespace vfw {

namespace {

// y[i] = -x[i], reusing y's storage.
void assign_negated(std::vector<double>& y, const std::vector<double>& x) {
  y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
}

}  // namespace

// --- sources -----------------------------------------------------------------

SourceModel::SourceModel(const Grid3& g) : grid_(g), vacuum_(true), rho0_(g), j0_(g) {}

SourceModel::SourceModel(ScalarField rho0, VectorField j0, double omega)
    : grid_(rho0.grid),
      vacuum_(false),
      rho0_(std::move(rho0)),
      j0_(std::move(j0)),
      omega_(omega) {
  require_same_grid(rho0_.grid, j0_.grid, "SourceModel");
  require_periodic(grid_, "SourceModel");
  // The charge is static, so continuity reduces to div j(t) = 0 for every t,
  // i.e. the current profile itself must be discretely solenoidal.
  const ScalarField d = divergence(j0_);
  if (max_abs(d) > 1e-10 * std::max(1.0, max_abs(j0_)))
    throw ConstraintViolationError(
        "SourceModel: current profile is not divergence-free, continuity would fail");
}

SourceModel::SourceModel(const Grid3& g, std::function<ScalarField(double)> rho,
                         std::function<ScalarField(double)> drho_dt,
                         std::function<VectorField(double)> j,
                         const std::vector<double>& check_times)
    : grid_(g),
      vacuum_(false),
      analytic_(true),
      rho0_(g),
      j0_(g),
      rho_fn_(std::move(rho)),
      j_fn_(std::move(j)) {
  if (!rho_fn_ || !drho_dt || !j_fn_)
    throw DomainError("SourceModel: rho, drho_dt and j callbacks are all required");
  require_periodic(grid_, "SourceModel");
  for (double t : check_times) {
    ScalarField r = drho_dt(t);
    const VectorField jt = j_fn_(t);
    require_same_grid(r.grid, grid_, "SourceModel");
    require_same_grid(jt.grid, grid_, "SourceModel");
    const ScalarField dj = divergence(jt);
    scale_add(r, 1.0, dj);
    const double scale = std::max(1.0, std::max(max_abs(jt), max_abs(rho_fn_(t))));
    if (max_abs(r) > 1e-10 * scale)
      throw ConstraintViolationError("SourceModel: drho/dt + div j != 0 at t = " +
                                     std::to_string(t));
  }
}

ScalarField SourceModel::rho(double t) const {
  if (analytic_) {
    ScalarField r = rho_fn_(t);
    require_same_grid(r.grid, grid_, "SourceModel::rho");
    return r;
  }
  return rho0_;
}

VectorField SourceModel::j(double t) const {
  if (analytic_) {
    VectorField jt = j_fn_(t);
    require_same_grid(jt.grid, grid_, "SourceModel::j");
    return jt;
  }
  VectorField out(grid_);
  const double f = std::cos(omega_ * t);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = f * j0_.v[i];
  return out;
}

void SourceModel::accumulate_j(double t, double scale, VectorField& into) const {
  require_same_grid(into.grid, grid_, "SourceModel::accumulate_j");
  if (vacuum_) return;
  if (analytic_) {
    const VectorField jt = j(t);
    scale_add(into, scale, jt);
    return;
  }
  scale_add(into, scale * std::cos(omega_ * t), j0_);
}

void SourceModel::set_rho(ScalarField rho) {
  if (analytic_)
    throw DomainError("SourceModel::set_rho: cannot replace the charge of a callback source");
  require_same_grid(rho.grid, grid_, "SourceModel::set_rho");
  rho0_ = std::move(rho);
  vacuum_ = vacuum_ && max_abs(rho0_) == 0.0;
}

// --- energy and flow ----------------------------------------------------------

double field_hamiltonian(const CanonicalFieldState& s, const SourceModel& src) {
  const Grid3& g = s.grid();
  require_periodic(g, "field_hamiltonian");
  require_same_grid(g, src.grid(), "field_hamiltonian");
  VectorField T = s.Y;  // transverse/electric part Y - grad W
  const VectorField GW = gradient(s.W);
  scale_add(T, -1.0, GW);
  const VectorField B = curl(s.A);
  double H = 0.5 * (inner(T, T) + inner(B, B) + inner(s.chi, s.chi));
  if (!src.vacuum()) H -= inner(src.j(s.time), s.A);
  return H;
}

void field_rhs(const CanonicalFieldState& s, const SourceModel& src, FieldRhs& out) {
  const Grid3& g = s.grid();
  require_periodic(g, "field_rhs");
  require_same_grid(g, src.grid(), "field_rhs");
  require_same_grid(g, out.dA.grid, "field_rhs");

  // dA = Y - grad W
  out.dA.v = s.Y.v;
  const VectorField GW = gradient(s.W);
  scale_add(out.dA, -1.0, GW);

  // dY = -curl curl A + j
  const VectorField C = curl(s.A);
  const VectorField CC = curl(C);
  assign_negated(out.dY.v, CC.v);
  src.accumulate_j(s.time, 1.0, out.dY);

  // dchi is the divergence of the very same dA samples that advance A, so the
  // tracked gauge functional -chi + div A has an identically zero derivative.
  out.dchi = divergence(out.dA);

  // dW = -chi
  assign_negated(out.dW.v, s.chi.v);
}

namespace {

// dst = base + a * k, with dst.time = base.time + a.
void place_stage(CanonicalFieldState& dst, const CanonicalFieldState& base, double a,
                 const FieldRhs& k) {
  dst.A.v = base.A.v;
  dst.Y.v = base.Y.v;
  dst.W.v = base.W.v;
  dst.chi.v = base.chi.v;
  scale_add(dst.A, a, k.dA);
  scale_add(dst.Y, a, k.dY);
  scale_add(dst.W, a, k.dW);
  scale_add(dst.chi, a, k.dchi);
  dst.time = base.time + a;
}

void accumulate(CanonicalFieldState& s, double a, const FieldRhs& k) {
  scale_add(s.A, a, k.dA);
  scale_add(s.Y, a, k.dY);
  scale_add(s.W, a, k.dW);
  scale_add(s.chi, a, k.dchi);
}

void step_rk4(CanonicalFieldState& s, const SourceModel& src, double dt) {
  const Grid3& g = s.grid();
  FieldRhs k1(g), k2(g), k3(g), k4(g);
  CanonicalFieldState stage(g);
  field_rhs(s, src, k1);
  place_stage(stage, s, 0.5 * dt, k1);
  field_rhs(stage, src, k2);
  place_stage(stage, s, 0.5 * dt, k2);
  field_rhs(stage, src, k3);
  place_stage(stage, s, dt, k3);
  field_rhs(stage, src, k4);
  accumulate(s, dt / 6.0, k1);
  accumulate(s, dt / 3.0, k2);
  accumulate(s, dt / 3.0, k3);
  accumulate(s, dt / 6.0, k4);
  s.time += dt;
}

// Strang splitting for the separable Hamiltonian: the kinetic half depends
// only on (Y, W) and moves (A, chi); the potential half depends only on
// (A, chi) and moves (Y, W).  Each half-flow is integrated exactly, so the
// composition is time-reversible and second order.
void step_verlet(CanonicalFieldState& s, const SourceModel& src, double dt) {
  const auto drift = [&](double a) {
    VectorField dA = s.Y;
    const VectorField GW = gradient(s.W);
    scale_add(dA, -1.0, GW);
    const ScalarField dchi = divergence(dA);
    scale_add(s.A, a, dA);
    scale_add(s.chi, a, dchi);
  };
  const auto kick = [&](double a, double tj) {
    const VectorField C = curl(s.A);
    const VectorField CC = curl(C);
    scale_add(s.Y, -a, CC);
    src.accumulate_j(tj, a, s.Y);
    scale_add(s.W, -a, s.chi);
  };
  drift(0.5 * dt);
  kick(dt, s.time + 0.5 * dt);
  drift(0.5 * dt);
  s.time += dt;
}

}  // namespace

void field_step(CanonicalFieldState& s, const SourceModel& src, double dt, FieldScheme scheme,
                const Units& units) {
  const Grid3& g = s.grid();
  require_periodic(g, "field_step");
  require_same_grid(g, src.grid(), "field_step");
  if (!(dt >= 0.0)) throw DomainError("field_step: dt must be nonnegative");
  if (dt == 0.0) return;
  const double bound = g.min_spacing() / std::sqrt(3.0);
  if (units.c * dt > bound)
    throw CflError("field_step: c*dt exceeds h_min/sqrt(3)", bound / units.c);
  if (scheme == FieldScheme::Rk4)
    step_rk4(s, src, dt);
  else
    step_verlet(s, src, dt);
}

void derive_EB(const CanonicalFieldState& s, VectorField& E, VectorField& B) {
  require_periodic(s.grid(), "derive_EB");
  E.grid = s.grid();
  assign_negated(E.v, s.Y.v);
  B = curl(s.A);
}

DiagnosticsReport maxwell_diagnostics(const CanonicalFieldState& s, const SourceModel& src) {
  const Grid3& g = s.grid();
  DiagnosticsReport rep;
  rep.time = s.time;

  FieldRhs k(g);
  field_rhs(s, src, k);
  VectorField E(g), B(g);
  derive_EB(s, E, B);

  // dB/dt + curl E, with dB/dt = curl dA
  VectorField F = curl(k.dA);
  const VectorField CE = curl(E);
  scale_add(F, 1.0, CE);
  rep.faraday = max_abs(F);

  // dE/dt - curl B + j, with dE/dt = -dY
  VectorField R(g);
  const VectorField CB = curl(B);
  for (std::size_t i = 0; i < R.v.size(); ++i) R.v[i] = -k.dY.v[i] - CB.v[i];
  src.accumulate_j(s.time, 1.0, R);
  rep.ampere = max_abs(R);

  // div E - rho
  ScalarField DE = divergence(E);
  const ScalarField rho = src.rho(s.time);
  scale_add(DE, -1.0, rho);
  rep.gauss = max_abs(DE);

  rep.div_b = max_abs(divergence(B));

  // -chi + div A
  ScalarField L = divergence(s.A);
  scale_add(L, -1.0, s.chi);
  rep.lorenz = max_abs(L);

  rep.energy = field_hamiltonian(s, src);
  return rep;
}

CanonicalFieldState admissible_state(SourceModel& src, const VectorField& A_seed, double t0,
                                     bool snap_rho) {
  const Grid3& g = src.grid();
  require_periodic(g, "admissible_state");
  require_same_grid(g, A_seed.grid, "admissible_state");
  CanonicalFieldState s(g);
  s.W = poisson_solve(src.rho(t0));
  s.Y = gradient(s.W);
  s.A = A_seed;
  s.chi = divergence(A_seed);
  s.time = t0;
  if (snap_rho) {
    // -div Y evaluated on the grid: makes -div Y - rho vanish bitwise.
    ScalarField snapped(g);
    const ScalarField divY = divergence(s.Y);
    assign_negated(snapped.v, divY.v);
    src.set_rho(std::move(snapped));
  }
  return s;
}

CanonicalFieldState plane_wave_reference(const Grid3& g, int mode, double amplitude, double t,
                                         const Units& units) {
  require_periodic(g, "plane_wave_reference");
  const double k = 2.0 * M_PI * static_cast<double>(mode) / g.extent(0);
  const double omega = units.c * k;
  CanonicalFieldState s(g);
  for (int kk = 0; kk < g.n[2]; ++kk)
    for (int jj = 0; jj < g.n[1]; ++jj)
      for (int ii = 0; ii < g.n[0]; ++ii) {
        const double phase = k * (g.origin[0] + ii * g.h[0]) - omega * t;
        s.A(1, ii, jj, kk) = amplitude * std::cos(phase);
        s.Y(1, ii, jj, kk) = amplitude * omega * std::sin(phase);
      }
  s.chi = divergence(s.A);  // identically zero: A_y depends on x only
  s.time = t;
  return s;
}

CanonicalFieldState plane_wave_state(const Grid3& g, int mode, double amplitude,
                                     const Units& units) {
  return plane_wave_reference(g, mode, amplitude, 0.0, units);
}

// --- retarded point-charge potentials ------------------------------------------

LienardWiechert lienard_wiechert(double t, const Vec3& r, const std::function<Vec3(double)>& r_f,
                                 const std::function<Vec3(double)>& u_f, double xi_f,
                                 const Units& units) {
  if (!r_f || !u_f) throw DomainError("lienard_wiechert: trajectory callbacks are required");
  const double c = units.c;
  const auto gap = [&](double tp) { return norm(r - r_f(tp)) - c * (t - tp); };

  // gap is strictly increasing in t' for subluminal sources and nonnegative
  // at t' = t, so march the bracket backwards until it changes sign.
  double hi = t;
  double span = 1.0;
  double lo = t - span;
  int doublings = 0;
  while (gap(lo) > 0.0) {
    if (++doublings > 60)
      throw DomainError("lienard_wiechert: no retarded root in search window");
    hi = lo;
    span *= 2.0;
    lo = t - span;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? hi : lo) = mid;
  }

  LienardWiechert out;
  out.t_retarded = 0.5 * (lo + hi);
  const Vec3 sep = r - r_f(out.t_retarded);
  const double R = norm(sep);
  const Vec3 beta = u_f(out.t_retarded) / c;
  if (norm(beta) >= 1.0)
    throw DomainError("lienard_wiechert: source reaches light speed at the retarded time");
  const double doppler = R - dot(sep, beta);  // R (1 - <n, beta>)
  if (!(doppler > 0.0))
    throw DomainError("lienard_wiechert: evaluation point lies on the retarded trajectory");
  out.phi = xi_f / doppler;
  out.A = out.phi * beta;
  return out;
}

// --- advected volume integrals --------------------------------------------------

std::vector<std::pair<double, double>> advected_integral(const AdvectionSpec& spec) {
  if (!spec.integrand || !spec.velocity || !spec.div_velocity)
    throw DomainError("advected_integral: integrand, velocity and div_velocity are required");
  if (spec.steps < 1) throw DomainError("advected_integral: need at least one step");
  if (!(spec.t1 > spec.t0)) throw DomainError("advected_integral: need t1 > t0");
  for (int a = 0; a < 3; ++a) {
    if (spec.nodes[a] < 1) throw DomainError("advected_integral: need at least one node per axis");
    if (!(spec.box_hi[a] > spec.box_lo[a]))
      throw DomainError("advected_integral: box must have positive extent");
  }

  // Midpoint-rule nodes; each carries its position and Jacobian factor.
  std::vector<Vec3> pos;
  pos.reserve(static_cast<std::size_t>(spec.nodes[0]) * spec.nodes[1] * spec.nodes[2]);
  Vec3 delta;
  for (int a = 0; a < 3; ++a) delta[a] = (spec.box_hi[a] - spec.box_lo[a]) / spec.nodes[a];
  for (int kz = 0; kz < spec.nodes[2]; ++kz)
    for (int ky = 0; ky < spec.nodes[1]; ++ky)
      for (int kx = 0; kx < spec.nodes[0]; ++kx)
        pos.push_back({spec.box_lo[0] + (kx + 0.5) * delta[0],
                       spec.box_lo[1] + (ky + 0.5) * delta[1],
                       spec.box_lo[2] + (kz + 0.5) * delta[2]});
  std::vector<double> jac(pos.size(), 1.0);
  const double w0 = delta[0] * delta[1] * delta[2];

  const auto sample = [&](double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) acc += spec.integrand(t, pos[i]) * jac[i];
    acc *= w0;
    if (!std::isfinite(acc))
      throw DomainError("advected_integral: a node left the evaluable region");
    return acc;
  };

  std::vector<std::pair<double, double>> series;
  series.reserve(static_cast<std::size_t>(spec.steps) + 1);
  double t = spec.t0;
  series.emplace_back(t, sample(t));
  const double dt = (spec.t1 - spec.t0) / spec.steps;
  for (int step = 0; step < spec.steps; ++step) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const Vec3 r1 = pos[i];
      const double J1 = jac[i];
      const Vec3 ur1 = spec.velocity(t, r1);
      const double uj1 = spec.div_velocity(t, r1) * J1;
      const Vec3 r2 = r1 + 0.5 * dt * ur1;
      const double J2 = J1 + 0.5 * dt * uj1;
      const Vec3 ur2 = spec.velocity(t + 0.5 * dt, r2);
      const double uj2 = spec.div_velocity(t + 0.5 * dt, r2) * J2;
      const Vec3 r3 = r1 + 0.5 * dt * ur2;
      const double J3 = J1 + 0.5 * dt * uj2;
      const Vec3 ur3 = spec.velocity(t + 0.5 * dt, r3);
      const double uj3 = spec.div_velocity(t + 0.5 * dt, r3) * J3;
      const Vec3 r4 = r1 + dt * ur3;
      const double J4 = J1 + dt * uj3;
      const Vec3 ur4 = spec.velocity(t + dt, r4);
      const double uj4 = spec.div_velocity(t + dt, r4) * J4;
      pos[i] = r1 + (dt / 6.0) * (ur1 + 2.0 * ur2 + 2.0 * ur3 + ur4);
      jac[i] = J1 + (dt / 6.0) * (uj1 + 2.0 * uj2 + 2.0 * uj3 + uj4);
      if (!std::isfinite(jac[i]) || !std::isfinite(pos[i].x + pos[i].y + pos[i].z))
        throw DomainError("advected_integral: a node left the evaluable region");
    }
    t = spec.t0 + (step + 1) * dt;
    series.emplace_back(t, sample(t));
  }
  return series;
}

// --- interference phase ----------------------------------------------------------

double aharonov_bohm_phase(const VectorField& B, int axis, int plane, std::array<int, 2> lo,
                           std::array<int, 2> hi) {
  const Grid3& g = B.grid;
  if (axis < 0 || axis > 2) throw DomainError("aharonov_bohm_phase: axis must be 0, 1 or 2");
  if (plane < 0 || plane >= g.n[axis])
    throw DomainError("aharonov_bohm_phase: surface plane is off-grid");
  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  if (lo[0] < 0 || lo[1] < 0 || hi[0] > g.n[a1] || hi[1] > g.n[a2] || lo[0] >= hi[0] ||
      lo[1] >= hi[1])
    throw DomainError("aharonov_bohm_phase: surface rectangle is off-grid");
  const double cell = g.h[a1] * g.h[a2];
  double flux = 0.0;
  int c[3];
  c[axis] = plane;
  for (int i2 = lo[1]; i2 < hi[1]; ++i2)
    for (int i1 = lo[0]; i1 < hi[0]; ++i1) {
      c[a1] = i1;
      c[a2] = i2;
      flux += B(axis, c[0], c[1], c[2]);
    }
  return -flux * cell;
}

// --- snapshots --------------------------------------------------------------------

void export_snapshot(const CanonicalFieldState& s, const std::string& basepath) {
  const Grid3& g = s.grid();
  nlohmann::json meta;
  meta["n"] = {g.n[0], g.n[1], g.n[2]};
  meta["h"] = {g.h[0], g.h[1], g.h[2]};
  meta["origin"] = {g.origin[0], g.origin[1], g.origin[2]};
  meta["periodic"] = g.periodic;
  meta["time"] = s.time;
  meta["layout"] = {"A", "Y", "W", "chi"};
  meta["doubles"] = 8 * g.size();

  std::ofstream jf(basepath + ".json");
  if (!jf) throw DomainError("export_snapshot: cannot open " + basepath + ".json");
  jf << meta.dump(2) << "\n";

  std::ofstream bf(basepath + ".bin", std::ios::binary);
  if (!bf) throw DomainError("export_snapshot: cannot open " + basepath + ".bin");
  const auto dump = [&](const std::vector<double>& v) {
    bf.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  dump(s.A.v);
  dump(s.Y.v);
  dump(s.W.v);
  dump(s.chi.v);
  if (!bf) throw DomainError("export_snapshot: short write to " + basepath + ".bin");
}

CanonicalFieldState import_snapshot(const std::string& basepath) {
  std::ifstream jf(basepath + ".json");
  if (!jf) throw DomainError("import_snapshot: cannot open " + basepath + ".json");
  nlohmann::json meta;
  try {
    jf >> meta;
    std::array<int, 3> n{};
    std::array<double, 3> h{}, origin{};
    for (int a = 0; a < 3; ++a) {
      n[a] = meta.at("n").at(a).get<int>();
      h[a] = meta.at("h").at(a).get<double>();
      origin[a] = meta.at("origin").at(a).get<double>();
    }
    const Grid3 g(n, h, origin, meta.at("periodic").get<bool>());
    CanonicalFieldState s(g);
    s.time = meta.at("time").get<double>();

    std::ifstream bf(basepath + ".bin", std::ios::binary);
    if (!bf) throw DomainError("import_snapshot: cannot open " + basepath + ".bin");
    const auto slurp = [&](std::vector<double>& v) {
      bf.read(reinterpret_cast<char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
      if (bf.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
        throw DomainError("import_snapshot: " + basepath + ".bin is truncated");
    };
    slurp(s.A.v);
    slurp(s.Y.v);
    slurp(s.W.v);
    slurp(s.chi.v);
    bf.peek();
    if (!bf.eof())
      throw DomainError("import_snapshot: " + basepath + ".bin has trailing data");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("import_snapshot: malformed metadata in " + basepath + ".json: " +
                      e.what());
  }
}

}  // namespace vfw
