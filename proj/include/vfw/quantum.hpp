#pragma once
#include <Eigen/Dense>
#include <complex>
#include <memory>

#include "vfw/errors.hpp"
#include "vfw/units.hpp"

namespace vfw {

// Periodic 1-D wave function; norm^2 = sum |psi_i|^2 h.
struct WaveFunction1D {
  int n = 0;
  double h = 0.0;
  double x0 = 0.0;
  Eigen::VectorXcd psi;

  WaveFunction1D() = default;
  WaveFunction1D(int n_, double h_, double x0_ = 0.0)
      : n(n_), h(h_), x0(x0_), psi(Eigen::VectorXcd::Zero(n_)) {
    if (n < 4) throw DomainError("WaveFunction1D: need at least 4 nodes");
    if (!(h > 0.0)) throw DomainError("WaveFunction1D: spacing must be positive");
  }
  double x(int i) const { return x0 + i * h; }
  double norm2() const { return psi.squaredNorm() * h; }
};

enum class QuantumVariant { Free, Minimal, Modified };

// Hamiltonians (D = centered first difference, D2 = 3-point second difference):
//   Free:     -hbar^2/(2m) D2 + wbar
//   Minimal:  [-hbar^2 D2 + i hbar xi (D A. + A D) + xi^2 A^2]/(2m) + wbar
//   Modified: Minimal - xi^2 A^2/(2m) + (hbar^2 xi^2)/(2 m^3) A D(D(A .))
// All three are Hermitian under the discrete inner product.
struct QuantumModel {
  QuantumVariant variant = QuantumVariant::Free;
  double mass = 1.0;
  double xi = 1.0;
  Units units{};
  int n = 0;
  double h = 0.0;
  double x0 = 0.0;
  Eigen::VectorXd wbar;  // sampled potential
  Eigen::VectorXd A;     // sampled 1-D vector potential

  QuantumModel(QuantumVariant v, int n_, double h_, double mass_, double xi_,
               Eigen::VectorXd wbar_, Eigen::VectorXd A_, const Units& un = {}, double x0_ = 0.0);
};

// Laboratory-time form of the free evolution as a parameter remap: kinetic
// prefactor m0/m^2 (an effective mass m^2/m0) and constant shift -m0.
QuantumModel remap_to_lab(const QuantumModel& proper, double m0);

Eigen::VectorXcd apply_hamiltonian(const QuantumModel& m, const Eigen::VectorXcd& psi);

double energy(const QuantumModel& m, const WaveFunction1D& w);
double expectation_x(const WaveFunction1D& w);
double variance_x(const WaveFunction1D& w);

// Unitary Cayley step (1 + i dtau H / 2 hbar) psi' = (1 - i dtau H / 2 hbar) psi.
// The linear solve is a cached LU factorization followed by iterative
// refinement until the residual is <= 1e-12 relative.
class CrankNicolson {
 public:
  CrankNicolson(const QuantumModel& m, double dtau);
  void step(WaveFunction1D& w);
  double last_residual() const { return last_residual_; }
  double dtau() const { return dtau_; }

 private:
  const QuantumModel model_;
  double dtau_ = 0.0;
  double last_residual_ = 0.0;
  Eigen::MatrixXcd forward_;  // 1 - i dtau H / 2 hbar
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;  // of 1 + i dtau H / 2 hbar
  Eigen::MatrixXcd backward_;
};

// Gaussian packet exp(ik(x-xc)) exp(-(x-xc)^2/(4 sigma^2)), normalized.
WaveFunction1D gaussian_packet(int n, double h, double xc, double sigma, double k,
                               double x0 = 0.0);

}  // namespace vfw
