#include "vfw/quantum.hpp"

#include <cmath>
#include <complex>
#include <utility>

namespace vfw {

namespace {

using Cd = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecD = Eigen::VectorXd;

// Centered first difference on the periodic grid.
VecC d1(const VecC& f, double h) {
  const Eigen::Index n = f.size();
  VecC g(n);
  for (Eigen::Index i = 0; i < n; ++i)
    g[i] = (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * h);
  return g;
}

// 3-point second difference on the periodic grid.
VecC d2(const VecC& f, double h) {
  const Eigen::Index n = f.size();
  VecC g(n);
  for (Eigen::Index i = 0; i < n; ++i)
    g[i] = (f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n]) / (h * h);
  return g;
}

}  // namespace

QuantumModel::QuantumModel(QuantumVariant v, int n_, double h_, double mass_, double xi_,
                           Eigen::VectorXd wbar_, Eigen::VectorXd A_, const Units& un, double x0_)
    : variant(v),
      mass(mass_),
      xi(xi_),
      units(un),
      n(n_),
      h(h_),
      x0(x0_),
      wbar(std::move(wbar_)),
      A(std::move(A_)) {
  if (n < 4) throw DomainError("QuantumModel: need at least 4 nodes");
  if (!(h > 0.0)) throw DomainError("QuantumModel: spacing must be positive");
  if (!(mass > 0.0)) throw DomainError("QuantumModel: mass must be positive");
  if (wbar.size() != n) throw GridMismatchError("QuantumModel: potential samples do not match the grid");
  if (A.size() != n) throw GridMismatchError("QuantumModel: vector-potential samples do not match the grid");
}

QuantumModel remap_to_lab(const QuantumModel& proper, double m0) {
  if (!(m0 > 0.0)) throw DomainError("remap_to_lab: rest mass must be positive");
  QuantumModel lab = proper;
  lab.mass = proper.mass * proper.mass / m0;  // kinetic prefactor m0/m^2
  lab.wbar = Eigen::VectorXd::Constant(proper.n, -m0);
  return lab;
}

Eigen::VectorXcd apply_hamiltonian(const QuantumModel& m, const Eigen::VectorXcd& psi) {
  if (psi.size() != m.n) throw GridMismatchError("apply_hamiltonian: state does not match the grid");
  const double hb = m.units.hbar;

  VecC out = (-hb * hb / (2.0 * m.mass)) * d2(psi, m.h);
  out += m.wbar.cast<Cd>().cwiseProduct(psi);
  if (m.variant == QuantumVariant::Free) return out;

  // Gauge coupling, expanded so every block is Hermitian on its own:
  // i hbar xi (D(A psi) + A D(psi)) / 2m  +  xi^2 A^2 psi / 2m.
  const VecC a_psi = m.A.cast<Cd>().cwiseProduct(psi);
  const VecC cross = d1(a_psi, m.h) + m.A.cast<Cd>().cwiseProduct(d1(psi, m.h));
  out += (Cd(0.0, 1.0) * hb * m.xi / (2.0 * m.mass)) * cross;
  const VecC a2_psi = m.A.cwiseAbs2().cast<Cd>().cwiseProduct(psi);
  out += (m.xi * m.xi / (2.0 * m.mass)) * a2_psi;
  if (m.variant == QuantumVariant::Minimal) return out;

  // The two corrections of the factorized square: drop the quadratic
  // potential term again and add the symmetric sandwich A D(D(A psi)),
  // self-adjoint because D is antisymmetric and A is a real multiplier.
  out -= (m.xi * m.xi / (2.0 * m.mass)) * a2_psi;
  const double m3 = m.mass * m.mass * m.mass;
  out += (hb * hb * m.xi * m.xi / (2.0 * m3)) *
         m.A.cast<Cd>().cwiseProduct(d1(d1(a_psi, m.h), m.h));
  return out;
}

double energy(const QuantumModel& m, const WaveFunction1D& w) {
  if (w.n != m.n || w.psi.size() != m.n)
    throw GridMismatchError("energy: state does not match the model grid");
  const double n2 = w.norm2();
  if (!(n2 > 0.0)) throw DomainError("energy: state has zero norm");
  const Cd e = w.psi.dot(apply_hamiltonian(m, w.psi)) * w.h;
  return e.real() / n2;
}

double expectation_x(const WaveFunction1D& w) {
  const double n2 = w.norm2();
  if (!(n2 > 0.0)) throw DomainError("expectation_x: state has zero norm");
  double acc = 0.0;
  for (int i = 0; i < w.n; ++i) acc += w.x(i) * std::norm(w.psi[i]) * w.h;
  return acc / n2;
}

double variance_x(const WaveFunction1D& w) {
  const double n2 = w.norm2();
  if (!(n2 > 0.0)) throw DomainError("variance_x: state has zero norm");
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < w.n; ++i) {
    const double p = std::norm(w.psi[i]) * w.h;
    m1 += w.x(i) * p;
    m2 += w.x(i) * w.x(i) * p;
  }
  m1 /= n2;
  m2 /= n2;
  return m2 - m1 * m1;
}

CrankNicolson::CrankNicolson(const QuantumModel& m, double dtau) : model_(m), dtau_(dtau) {
  if (dtau < 0.0) throw DomainError("CrankNicolson: step must be non-negative");
  const int n = m.n;
  // Assemble the dense operator column by column through the one true
  // definition above, so the step can never drift from apply_hamiltonian.
  Eigen::MatrixXcd H(n, n);
  VecC e = VecC::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = Cd(1.0, 0.0);
    H.col(j) = apply_hamiltonian(m, e);
    e[j] = Cd(0.0, 0.0);
  }
  const Cd a = Cd(0.0, 1.0) * dtau / (2.0 * m.units.hbar);
  backward_ = Eigen::MatrixXcd::Identity(n, n) + a * H;
  forward_ = Eigen::MatrixXcd::Identity(n, n) - a * H;
  lu_.compute(backward_);
}

void CrankNicolson::step(WaveFunction1D& w) {
  if (w.n != model_.n || w.psi.size() != model_.n)
    throw GridMismatchError("CrankNicolson::step: state does not match the model grid");
  if (w.h != model_.h)
    throw GridMismatchError("CrankNicolson::step: state spacing does not match the model grid");

  const VecC rhs = forward_ * w.psi;
  VecC x = lu_.solve(rhs);
  const double scale = rhs.norm();
  if (scale == 0.0) {  // the zero state is a fixed point
    last_residual_ = 0.0;
    w.psi = x;
    return;
  }
  double rel = (rhs - backward_ * x).norm() / scale;
  int sweeps = 0;
  while (!(rel <= 1e-12)) {  // negated so a NaN residual cannot pass
    if (++sweeps > 20)
      throw CflError("CrankNicolson::step: linear solve stalled above residual 1e-12",
                     dtau_ / 2.0);
    x += lu_.solve(rhs - backward_ * x);
    rel = (rhs - backward_ * x).norm() / scale;
  }
  last_residual_ = rel;
  w.psi = x;
}

WaveFunction1D gaussian_packet(int n, double h, double xc, double sigma, double k, double x0) {
  if (!(sigma > 0.0)) throw DomainError("gaussian_packet: width must be positive");
  WaveFunction1D w(n, h, x0);
  for (int i = 0; i < n; ++i) {
    const double dx = w.x(i) - xc;
    w.psi[i] = std::exp(Cd(0.0, 1.0) * (k * dx)) * std::exp(-dx * dx / (4.0 * sigma * sigma));
  }
  w.psi /= std::sqrt(w.norm2());
  return w;
}

}  // namespace vfw
