#pragma once
#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "vfw/errors.hpp"
#include "vfw/particle.hpp"  // Mat3
#include "vfw/vector3.hpp"

namespace vfw {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Poisson tensor Pi(z) with Pi_ab = {z_a, z_b}; every evaluation is checked
// for antisymmetry to 1e-14 (relative to its own scale).
struct PoissonStructure {
  int dim = 0;
  std::function<MatX(const VecX&)> pi;
  MatX eval(const VecX& z) const;
};

// Phase-space function with optional analytic gradient; central differences
// with step 1e-5 * scale are used when the gradient is absent.
struct Observable {
  std::function<double(const VecX&)> f;
  std::function<VecX(const VecX&)> grad;  // may be empty
  VecX gradient(const VecX& z) const;
  static Observable coordinate(int i, int dim);
  // f = 0.5 z^T M z + b^T z + c with exact gradient.
  static Observable quadratic(const MatX& M, const VecX& b, double c);
};

// Abelian gauge field A(q) on R^3 with Jacobian [i][j] = dA_i/dq_j; when no
// analytic Jacobian is supplied a central-difference one is used.
struct AbelianGaugeField {
  double xi = 1.0;
  std::function<Vec3(const Vec3&)> A;
  std::function<Mat3(const Vec3&)> jacobian;  // may be empty
  Mat3 jac(const Vec3& q) const;
  // F_ij = dA_j/dq_i - dA_i/dq_j.
  Mat3 curvature(const Vec3& q) const;
};

// Collection of gauge potentials A^(s), s = 1..m, with structure constants
// c[r][s][k] antisymmetric in (s,k); the constructor validates antisymmetry
// and the algebra Jacobi identity to 1e-14.
class NonAbelianGaugeField {
 public:
  NonAbelianGaugeField(std::vector<std::vector<std::vector<double>>> c,
                       std::vector<std::function<Vec3(const Vec3&)>> A,
                       std::vector<std::function<Mat3(const Vec3&)>> jacobians = {});
  int dim() const { return m_; }
  double structure(int r, int s, int k) const { return c_[r][s][k]; }
  Vec3 A(int s, const Vec3& q) const { return A_[s](q); }
  Mat3 jac(int s, const Vec3& q) const;
  // Full curvature F^(s)_ij = d_i A^(s)_j - d_j A^(s)_i
  //                           + sum_{k,r} c[s][k][r] A^(k)_i A^(r)_j.
  std::vector<Mat3> curvature(const Vec3& q) const;

 private:
  int m_ = 0;
  std::vector<std::vector<std::vector<double>>> c_;
  std::vector<std::function<Vec3(const Vec3&)>> A_;
  std::vector<std::function<Mat3(const Vec3&)>> jac_;
};

// su(2) in the adjoint basis: c[r][s][k] = epsilon_{rsk}.
std::vector<std::vector<std::vector<double>>> su2_structure();
// Exact pure gauge A_i = g^{-1} dg/dq_i for g = exp(th1 L1)exp(th2 L2)exp(th3 L3),
// with the angles th_s(q) smooth scalar functions; curvature vanishes
// identically.  Jacobians are analytic.
NonAbelianGaugeField su2_pure_gauge(std::array<std::function<double(const Vec3&)>, 3> theta,
                                    std::array<std::function<Vec3(const Vec3&)>, 3> grad_theta,
                                    std::array<std::function<Mat3(const Vec3&)>, 3> hess_theta);

// --- brackets ---------------------------------------------------------------

double bracket(const PoissonStructure& st, const Observable& f, const Observable& g,
               const VecX& z);

// Jacobi defect {{f,g},h} + {{g,h},f} + {{h,f},g}; inner brackets are
// differentiated by central differences.
double jacobi_residual(const PoissonStructure& st, const Observable& f, const Observable& g,
                       const Observable& h, const VecX& z, double fd_step = 1e-5);

// z = (q, p), constant canonical tensor with {p_j, q^i} = delta.
PoissonStructure canonical_structure(int pairs);
// z = (q, p) with {p_i, p_j} = xi F_ji(q).
PoissonStructure magnetic_structure(const AbelianGaugeField& gauge);
// Magnetic-type structure from a bare field B(q) (not necessarily
// divergence-free): {p_i, p_j} = -xi eps_{ijk} B_k.
PoissonStructure magnetic_structure_from_B(double xi, std::function<Vec3(const Vec3&)> B);
// z = (q, p, u, y), dim 6 + 2m.
PoissonStructure extended_structure(const NonAbelianGaugeField& gauge);

// --- minimal shift ------------------------------------------------------------

VecX minimal_shift(const AbelianGaugeField& gauge, const VecX& z);    // p -> p + xi A(q)
VecX minimal_unshift(const AbelianGaugeField& gauge, const VecX& z);  // exact inverse

// Bracket of observables written in the shifted coordinates, computed by
// pulling them back through the shift and evaluating under `st`.
double shifted_bracket(const PoissonStructure& st, const AbelianGaugeField& gauge,
                       const Observable& f_shifted, const Observable& g_shifted, const VecX& z);

// --- field-strength identities -------------------------------------------------

// Max over (s,i,j,l) of
//   dF^(s)_ij/dq^l + dF^(s)_jl/dq^i + dF^(s)_li/dq^j
//   + sum_{k,r} c[s][k][r] (F^(k)_ij A^(r)_l + F^(k)_jl A^(r)_i + F^(k)_li A^(r)_j);
// curvature derivatives by central differences of the analytic curvature.
double yang_mills_residual(const NonAbelianGaugeField& gauge, const Vec3& q,
                           double fd_step = 1e-5);
// The same contraction entering through the extended bracket's Jacobi defect
// on momenta: residual_{ijl} summed against y.
double yang_mills_residual_component(const NonAbelianGaugeField& gauge, const Vec3& q, int s,
                                     int i, int j, int l, double fd_step = 1e-5);

// --- canonicality of the shifted variables -------------------------------------

// Measures every pairwise bracket among (q, ptilde = p + sum_s y_s A^(s), u, y)
// under the extended structure and compares with the canonical target table
// ({ptilde_j, q^i} = delta, {y_s, u^k} = delta, {y_s, y_k} = sum_r c[r][s][k] y_r,
// all else zero).  The {y_s, ptilde_j} block carries the obstruction
// sum_{k,r} c[r][s][k] y_r A^(k)_j; it is reported separately.
struct CanonicalityReport {
  MatX measured;       // (6+2m)^2 bracket table of the shifted coordinates
  MatX target;
  double max_deviation = 0.0;     // over all blocks except the y-ptilde one
  double max_y_ptilde = 0.0;      // measured deviation in the y-ptilde block
  MatX y_ptilde_predicted;        // sum_{k,r} c[r][s][k] y_r A^(k)_j
  double max_y_ptilde_mismatch = 0.0;  // measured vs predicted obstruction
};
CanonicalityReport shifted_canonicality_residual(const NonAbelianGaugeField& gauge,
                                                 const VecX& z);

}  // namespace vfw
