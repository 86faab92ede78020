#pragma once
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <map>
#include <vector>

#include "vfw/errors.hpp"

namespace vfw {

using SpMat = Eigen::SparseMatrix<double>;
using CVec = Eigen::VectorXcd;

// Bosonic occupation basis truncated by total occupation: all multi-indices
// (n_1..n_s) with sum n_j <= N, enumerated in graded lexicographic order
// (by total occupation, then lexicographically).  Size C(N+s, s).
class FockBasis {
 public:
  FockBasis(int modes, int max_total);
  int modes() const { return s_; }
  int max_total() const { return N_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<int>& occupation(std::size_t i) const { return states_[i]; }
  int total(std::size_t i) const { return totals_[i]; }
  // Index of a multi-index, or -1 when it exceeds the truncation.
  long find(const std::vector<int>& occ) const;

 private:
  int s_ = 0, N_ = 0;
  std::vector<std::vector<int>> states_;
  std::vector<int> totals_;
  std::map<std::vector<int>, long> index_;
};

struct TruncatedFockVector {
  CVec c;
};

// Annihilator a_j and creator a_j^+ with matrix elements sqrt(n); the
// creator annihilates the top shell (truncation).
SpMat annihilator(const FockBasis& b, int j);
SpMat creator(const FockBasis& b, int j);

// Coherent vector: coefficient at (n_1..n_s) is prod u_j^{n_j} / sqrt(n_j!).
TruncatedFockVector coherent_embed(const FockBasis& b, const CVec& u);

// Polynomial first-order system du_j/dt = sum_monomials coeff * prod u_k^{e_k}.
struct PolynomialSystem {
  struct Monomial {
    double coeff = 0.0;
    std::vector<int> powers;
  };
  int modes = 0;
  std::vector<std::vector<Monomial>> rhs;  // one monomial list per mode

  CVec eval(const CVec& u) const;
  static PolynomialSystem logistic();                    // u' = u - u^2
  static PolynomialSystem linear(std::vector<double> lambda);
  static PolynomialSystem two_mode();                    // u1' = u2^2, u2' = -u1 u2
};

// Carleman generator K = sum_j a_j^+ K_j(a) with K_j the rhs polynomial in
// annihilators; row 0 (the vacuum row) is identically empty, which makes the
// vacuum amplitude an exact constant of the flow.
SpMat liouvillian(const FockBasis& b, const PolynomialSystem& sys);

enum class EvolveScheme { Rk4, Expm };

// Propagates psi0 over time t.  Rk4 uses fixed substeps sized by the
// generator's norm; Expm uses the scaling-and-squaring matrix exponential.
// Component 0 is carried through untouched (row-0 nullity).
TruncatedFockVector evolve(const FockBasis& b, const SpMat& K, const TruncatedFockVector& psi0,
                           double t, EvolveScheme scheme = EvolveScheme::Expm, int rk4_substeps = 0);

// u_j = <vac| a_j |psi> / <vac|psi>.
CVec extract(const FockBasis& b, const TruncatedFockVector& psi);

// Pairing <gamma(t), psi(t)> with gamma evolved by -K^T; constant when both
// sides are integrated exactly.  Returns samples at the given times.
std::vector<std::complex<double>> conservation_pairing(const FockBasis& b, const SpMat& K,
                                                       const TruncatedFockVector& psi0,
                                                       const CVec& gamma0,
                                                       const std::vector<double>& times,
                                                       EvolveScheme scheme = EvolveScheme::Expm);

// Generating functional of a spatially homogeneous Poisson charge
// configuration: L(f) = exp(rho_bar * sum_x (e^{i f(x)} - 1) * cell).
std::complex<double> bogolubov_poisson(const std::vector<double>& f, double rho_bar, double cell);

}  // namespace vfw
