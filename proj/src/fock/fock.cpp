#include "vfw/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace vfw {

namespace {

using Cd = std::complex<double>;
using SpMatC = Eigen::SparseMatrix<Cd>;
using DenseMat = Eigen::MatrixXd;

// Compositions of `total` into `modes` parts, appended in lexicographic order.
void enumerate_shell(int modes, int total, std::vector<int>& prefix,
                     std::vector<std::vector<int>>& out) {
  if (modes == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int head = 0; head <= total; ++head) {
    prefix.push_back(head);
    enumerate_shell(modes - 1, total - head, prefix, out);
    prefix.pop_back();
  }
}

// True when the generator's vacuum row carries no entries; the evolution then
// leaves component 0 untouched and the exponential's first row is exactly e0.
bool vacuum_row_empty(const SpMat& K) {
  for (int outer = 0; outer < K.outerSize(); ++outer)
    for (SpMat::InnerIterator it(K, outer); it; ++it)
      if (it.row() == 0 && it.value() != 0.0) return false;
  return true;
}

CVec rk4_propagate(const SpMat& K, const CVec& psi0, double t, int substeps) {
  // Step count follows the generator's scale so that h*||K|| stays small.
  int steps = substeps;
  if (steps <= 0) {
    const double scale = t * K.norm();
    steps = std::max(1, static_cast<int>(std::ceil(scale / 0.05)));
  }
  const SpMatC Kc = K.cast<Cd>();
  const double h = t / steps;
  CVec psi = psi0;
  for (int n = 0; n < steps; ++n) {
    const CVec k1 = Kc * psi;
    const CVec k2 = Kc * (psi + (0.5 * h) * k1).eval();
    const CVec k3 = Kc * (psi + (0.5 * h) * k2).eval();
    const CVec k4 = Kc * (psi + h * k3).eval();
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

}  // namespace

FockBasis::FockBasis(int modes, int max_total) : s_(modes), N_(max_total) {
  if (modes < 1) throw DomainError("FockBasis: need at least one mode");
  if (max_total < 0) throw DomainError("FockBasis: maximum total occupation must be >= 0");
  std::vector<int> prefix;
  for (int total = 0; total <= N_; ++total) enumerate_shell(s_, total, prefix, states_);
  totals_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    int sum = 0;
    for (int n : states_[i]) sum += n;
    totals_.push_back(sum);
    index_[states_[i]] = static_cast<long>(i);
  }
}

long FockBasis::find(const std::vector<int>& occ) const {
  if (static_cast<int>(occ.size()) != s_)
    throw GridMismatchError("FockBasis::find: multi-index has wrong mode count");
  const auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

SpMat annihilator(const FockBasis& b, int j) {
  if (j < 0 || j >= b.modes()) throw DomainError("annihilator: mode out of range");
  const int n = static_cast<int>(b.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < n; ++col) {
    std::vector<int> occ = b.occupation(col);
    if (occ[j] == 0) continue;
    const double w = std::sqrt(static_cast<double>(occ[j]));
    occ[j] -= 1;
    trips.emplace_back(static_cast<int>(b.find(occ)), col, w);
  }
  SpMat A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

SpMat creator(const FockBasis& b, int j) {
  if (j < 0 || j >= b.modes()) throw DomainError("creator: mode out of range");
  const int n = static_cast<int>(b.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < n; ++col) {
    if (b.total(col) >= b.max_total()) continue;  // top shell maps to zero
    std::vector<int> occ = b.occupation(col);
    const double w = std::sqrt(static_cast<double>(occ[j] + 1));
    occ[j] += 1;
    trips.emplace_back(static_cast<int>(b.find(occ)), col, w);
  }
  SpMat C(n, n);
  C.setFromTriplets(trips.begin(), trips.end());
  return C;
}

TruncatedFockVector coherent_embed(const FockBasis& b, const CVec& u) {
  if (u.size() != b.modes())
    throw GridMismatchError("coherent_embed: parameter vector has wrong mode count");
  // 1/sqrt(n!) built incrementally to stay finite for any usable truncation.
  std::vector<double> inv_sqrt_fact(b.max_total() + 1, 1.0);
  for (int n = 1; n <= b.max_total(); ++n)
    inv_sqrt_fact[n] = inv_sqrt_fact[n - 1] / std::sqrt(static_cast<double>(n));
  TruncatedFockVector v;
  v.c = CVec(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::vector<int>& occ = b.occupation(i);
    Cd coeff(1.0, 0.0);
    for (int j = 0; j < b.modes(); ++j) {
      if (occ[j] == 0) continue;
      coeff *= std::pow(u[j], occ[j]) * inv_sqrt_fact[occ[j]];
    }
    v.c[static_cast<Eigen::Index>(i)] = coeff;
  }
  return v;
}

CVec PolynomialSystem::eval(const CVec& u) const {
  if (u.size() != modes || static_cast<int>(rhs.size()) != modes)
    throw GridMismatchError("PolynomialSystem::eval: mode count mismatch");
  CVec out = CVec::Zero(modes);
  for (int j = 0; j < modes; ++j)
    for (const Monomial& m : rhs[j]) {
      if (static_cast<int>(m.powers.size()) != modes)
        throw GridMismatchError("PolynomialSystem::eval: monomial has wrong mode count");
      Cd term(m.coeff, 0.0);
      for (int k = 0; k < modes; ++k) {
        if (m.powers[k] < 0) throw DomainError("PolynomialSystem::eval: negative power");
        if (m.powers[k] > 0) term *= std::pow(u[k], m.powers[k]);
      }
      out[j] += term;
    }
  return out;
}

PolynomialSystem PolynomialSystem::logistic() {
  PolynomialSystem sys;
  sys.modes = 1;
  sys.rhs = {{Monomial{1.0, {1}}, Monomial{-1.0, {2}}}};
  return sys;
}

PolynomialSystem PolynomialSystem::linear(std::vector<double> lambda) {
  PolynomialSystem sys;
  sys.modes = static_cast<int>(lambda.size());
  sys.rhs.resize(sys.modes);
  for (int j = 0; j < sys.modes; ++j) {
    std::vector<int> powers(sys.modes, 0);
    powers[j] = 1;
    sys.rhs[j] = {Monomial{lambda[j], powers}};
  }
  return sys;
}

PolynomialSystem PolynomialSystem::two_mode() {
  PolynomialSystem sys;
  sys.modes = 2;
  sys.rhs = {{Monomial{1.0, {0, 2}}}, {Monomial{-1.0, {1, 1}}}};
  return sys;
}

SpMat liouvillian(const FockBasis& b, const PolynomialSystem& sys) {
  if (sys.modes != b.modes() || static_cast<int>(sys.rhs.size()) != sys.modes)
    throw GridMismatchError("liouvillian: system and basis mode counts differ");
  const int n = static_cast<int>(b.size());
  SpMat eye(n, n);
  eye.setIdentity();
  SpMat K(n, n);
  for (int j = 0; j < sys.modes; ++j) {
    SpMat Mj(n, n);
    for (const PolynomialSystem::Monomial& m : sys.rhs[j]) {
      if (static_cast<int>(m.powers.size()) != sys.modes)
        throw GridMismatchError("liouvillian: monomial has wrong mode count");
      SpMat term = eye;
      for (int k = 0; k < sys.modes; ++k) {
        if (m.powers[k] < 0) throw DomainError("liouvillian: negative power");
        const SpMat ak = annihilator(b, k);
        for (int p = 0; p < m.powers[k]; ++p) term = (term * ak).pruned();
      }
      Mj += m.coeff * term;
    }
    K += SpMat(creator(b, j) * Mj);
  }
  K.prune(0.0);
  return K;
}

TruncatedFockVector evolve(const FockBasis& b, const SpMat& K, const TruncatedFockVector& psi0,
                           double t, EvolveScheme scheme, int rk4_substeps) {
  const int n = static_cast<int>(b.size());
  if (K.rows() != n || K.cols() != n)
    throw GridMismatchError("evolve: operator does not match the basis");
  if (psi0.c.size() != n) throw GridMismatchError("evolve: state does not match the basis");
  if (t < 0.0) throw DomainError("evolve: negative time");
  if (t == 0.0) return psi0;

  const bool preserve_vacuum = vacuum_row_empty(K);
  TruncatedFockVector out;
  if (scheme == EvolveScheme::Rk4) {
    out.c = rk4_propagate(K, psi0.c, t, rk4_substeps);
  } else {
    DenseMat E = (DenseMat(K) * t).exp();
    if (preserve_vacuum) {
      // The vacuum row of the exponential is exactly e0; pin it against
      // round-off from the rational approximation.
      E.row(0).setZero();
      E(0, 0) = 1.0;
    }
    out.c = E.cast<Cd>() * psi0.c;
  }
  if (preserve_vacuum) out.c[0] = psi0.c[0];
  if (!out.c.allFinite())
    throw DomainError("evolve: state overflowed; rescale the system (smaller data or time)");
  return out;
}

CVec extract(const FockBasis& b, const TruncatedFockVector& psi) {
  if (psi.c.size() != static_cast<Eigen::Index>(b.size()))
    throw GridMismatchError("extract: state does not match the basis");
  const Cd vac = psi.c[0];
  if (std::abs(vac) == 0.0) throw DomainError("extract: vanishing vacuum amplitude");
  CVec u(b.modes());
  std::vector<int> occ(b.modes(), 0);
  for (int j = 0; j < b.modes(); ++j) {
    occ[j] = 1;
    u[j] = psi.c[b.find(occ)] / vac;
    occ[j] = 0;
  }
  return u;
}

std::vector<std::complex<double>> conservation_pairing(const FockBasis& b, const SpMat& K,
                                                       const TruncatedFockVector& psi0,
                                                       const CVec& gamma0,
                                                       const std::vector<double>& times,
                                                       EvolveScheme scheme) {
  if (gamma0.size() != static_cast<Eigen::Index>(b.size()))
    throw GridMismatchError("conservation_pairing: dual vector does not match the basis");
  const SpMat Kt = SpMat(-K.transpose());
  TruncatedFockVector g0;
  g0.c = gamma0;
  std::vector<Cd> samples;
  samples.reserve(times.size());
  for (double t : times) {
    const TruncatedFockVector psi = evolve(b, K, psi0, t, scheme);
    const TruncatedFockVector gam = evolve(b, Kt, g0, t, scheme);
    samples.push_back(gam.c.dot(psi.c));
  }
  return samples;
}

std::complex<double> bogolubov_poisson(const std::vector<double>& f, double rho_bar,
                                       double cell) {
  if (rho_bar <= 0.0) throw DomainError("bogolubov_poisson: density parameter must be positive");
  if (cell <= 0.0) throw DomainError("bogolubov_poisson: cell volume must be positive");
  Cd sum(0.0, 0.0);
  for (double value : f) sum += (std::exp(Cd(0.0, value)) - 1.0) * cell;
  return std::exp(rho_bar * sum);
}

}  // namespace vfw
