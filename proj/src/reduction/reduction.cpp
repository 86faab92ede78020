#include "vfw/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace vfw {

namespace {

// Central-difference step, scaled so large coordinates keep relative accuracy.
double fd_h(double coord, double step) { return step * (1.0 + std::fabs(coord)); }

}  // namespace

// --- Poisson structures ---------------------------------------------------------

MatX PoissonStructure::eval(const VecX& z) const {
  if (z.size() != dim) throw GridMismatchError("Poisson structure: point has the wrong dimension");
  MatX P = pi(z);
  if (P.rows() != dim || P.cols() != dim)
    throw GridMismatchError("Poisson structure: tensor has the wrong dimension");
  const double scale = 1.0 + P.cwiseAbs().maxCoeff();
  if ((P + P.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw ConstraintViolationError("Poisson structure: tensor is not antisymmetric");
  return P;
}

// --- observables ------------------------------------------------------------------

VecX Observable::gradient(const VecX& z) const {
  if (grad) return grad(z);
  VecX g(z.size());
  VecX zp = z, zm = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = fd_h(z[i], 1e-5);
    zp[i] = z[i] + h;
    zm[i] = z[i] - h;
    g[i] = (f(zp) - f(zm)) / (2.0 * h);
    zp[i] = z[i];
    zm[i] = z[i];
  }
  return g;
}

Observable Observable::coordinate(int i, int dim) {
  Observable out;
  out.f = [i](const VecX& z) { return z[i]; };
  out.grad = [i, dim](const VecX&) {
    VecX g = VecX::Zero(dim);
    g[i] = 1.0;
    return g;
  };
  return out;
}

Observable Observable::quadratic(const MatX& M, const VecX& b, double c) {
  Observable out;
  out.f = [M, b, c](const VecX& z) { return 0.5 * z.dot(M * z) + b.dot(z) + c; };
  out.grad = [M, b](const VecX& z) { return VecX(0.5 * (M + M.transpose()) * z + b); };
  return out;
}

// --- gauge fields ------------------------------------------------------------------

Mat3 AbelianGaugeField::jac(const Vec3& q) const {
  if (jacobian) return jacobian(q);
  Mat3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 qp = q, qm = q;
    const double h = fd_h(q[j], 1e-5);
    qp[j] += h;
    qm[j] -= h;
    const Vec3 diff = (A(qp) - A(qm)) / (2.0 * h);
    for (int i = 0; i < 3; ++i) J.a[i][j] = diff[i];
  }
  return J;
}

Mat3 AbelianGaugeField::curvature(const Vec3& q) const {
  const Mat3 J = jac(q);
  Mat3 F;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) F.a[i][j] = J.a[j][i] - J.a[i][j];
  return F;
}

NonAbelianGaugeField::NonAbelianGaugeField(std::vector<std::vector<std::vector<double>>> c,
                                           std::vector<std::function<Vec3(const Vec3&)>> A,
                                           std::vector<std::function<Mat3(const Vec3&)>> jacobians)
    : m_(static_cast<int>(A.size())), c_(std::move(c)), A_(std::move(A)), jac_(std::move(jacobians)) {
  if (m_ == 0) throw DomainError("gauge field needs at least one potential");
  if (static_cast<int>(c_.size()) != m_)
    throw GridMismatchError("structure constants do not match the algebra dimension");
  for (const auto& plane : c_) {
    if (static_cast<int>(plane.size()) != m_)
      throw GridMismatchError("structure constants do not match the algebra dimension");
    for (const auto& row : plane)
      if (static_cast<int>(row.size()) != m_)
        throw GridMismatchError("structure constants do not match the algebra dimension");
  }
  if (!jac_.empty() && static_cast<int>(jac_.size()) != m_)
    throw GridMismatchError("jacobian list does not match the algebra dimension");

  for (int r = 0; r < m_; ++r)
    for (int s = 0; s < m_; ++s)
      for (int k = 0; k < m_; ++k)
        if (std::fabs(c_[r][s][k] + c_[r][k][s]) > 1e-14)
          throw ConstraintViolationError("structure constants must be antisymmetric in (s,k)");
  // Algebra Jacobi identity: sum_rho (c^rho_sk c^tau_{rho l} + cyclic in s,k,l) = 0.
  for (int tau = 0; tau < m_; ++tau)
    for (int s = 0; s < m_; ++s)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          double sum = 0.0;
          for (int rho = 0; rho < m_; ++rho)
            sum += c_[rho][s][k] * c_[tau][rho][l] + c_[rho][k][l] * c_[tau][rho][s] +
                   c_[rho][l][s] * c_[tau][rho][k];
          if (std::fabs(sum) > 1e-14)
            throw ConstraintViolationError("structure constants violate the Jacobi identity");
        }
}

Mat3 NonAbelianGaugeField::jac(int s, const Vec3& q) const {
  const auto si = static_cast<std::size_t>(s);
  if (!jac_.empty() && jac_[si]) return jac_[si](q);
  AbelianGaugeField helper;
  helper.A = A_[si];
  return helper.jac(q);
}

std::vector<Mat3> NonAbelianGaugeField::curvature(const Vec3& q) const {
  const auto mu = static_cast<std::size_t>(m_);
  std::vector<Vec3> a(mu);
  std::vector<Mat3> J(mu);
  for (std::size_t s = 0; s < mu; ++s) {
    a[s] = A_[s](q);
    J[s] = jac(static_cast<int>(s), q);
  }
  std::vector<Mat3> F(mu);
  for (std::size_t s = 0; s < mu; ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = J[s].a[j][i] - J[s].a[i][j];
        for (std::size_t k = 0; k < mu; ++k)
          for (std::size_t r = 0; r < mu; ++r) v += c_[s][k][r] * a[k][i] * a[r][j];
        F[s].a[i][j] = v;
      }
  return F;
}

std::vector<std::vector<std::vector<double>>> su2_structure() {
  std::vector<std::vector<std::vector<double>>> c(
      3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int k = 0; k < 3; ++k) {
        if (r == s || s == k || k == r) continue;
        const bool even = (r == 0 && s == 1 && k == 2) || (r == 1 && s == 2 && k == 0) ||
                          (r == 2 && s == 0 && k == 1);
        c[r][s][k] = even ? 1.0 : -1.0;
      }
  return c;
}

NonAbelianGaugeField su2_pure_gauge(std::array<std::function<double(const Vec3&)>, 3> theta,
                                    std::array<std::function<Vec3(const Vec3&)>, 3> grad_theta,
                                    std::array<std::function<Mat3(const Vec3&)>, 3> hess_theta) {
  // With g = exp(th1 L1) exp(th2 L2) exp(th3 L3) in the rotation (adjoint)
  // basis, g^{-1} dg lies along the moving axes
  //   v1 = R3(-th3) R2(-th2) e1,  v2 = R3(-th3) e2,  v3 = e3,
  // so A^(s)_i = sum_alpha v_alpha[s] d_i th_alpha.
  auto basis = [theta](const Vec3& q) {
    const double t2 = theta[1](q), t3 = theta[2](q);
    const Vec3 v1{std::cos(t2) * std::cos(t3), -std::cos(t2) * std::sin(t3), std::sin(t2)};
    const Vec3 v2{std::sin(t3), std::cos(t3), 0.0};
    const Vec3 v3{0.0, 0.0, 1.0};
    return std::array<Vec3, 3>{v1, v2, v3};
  };
  // rates[alpha][beta] = d v_alpha / d th_beta; only (v1; th2, th3) and
  // (v2; th3) are nonzero.
  auto basis_rates = [theta](const Vec3& q) {
    const double t2 = theta[1](q), t3 = theta[2](q);
    std::array<std::array<Vec3, 3>, 3> d{};
    d[0][1] = {-std::sin(t2) * std::cos(t3), std::sin(t2) * std::sin(t3), std::cos(t2)};
    d[0][2] = {-std::cos(t2) * std::sin(t3), -std::cos(t2) * std::cos(t3), 0.0};
    d[1][2] = {std::cos(t3), -std::sin(t3), 0.0};
    return d;
  };

  std::vector<std::function<Vec3(const Vec3&)>> A(3);
  std::vector<std::function<Mat3(const Vec3&)>> J(3);
  for (int s = 0; s < 3; ++s) {
    A[static_cast<std::size_t>(s)] = [s, basis, grad_theta](const Vec3& q) {
      const auto v = basis(q);
      Vec3 out{};
      for (std::size_t alpha = 0; alpha < 3; ++alpha) out += grad_theta[alpha](q) * v[alpha][s];
      return out;
    };
    J[static_cast<std::size_t>(s)] = [s, basis, basis_rates, grad_theta,
                                      hess_theta](const Vec3& q) {
      const auto v = basis(q);
      const auto dv = basis_rates(q);
      std::array<Vec3, 3> g;
      std::array<Mat3, 3> H;
      for (std::size_t alpha = 0; alpha < 3; ++alpha) {
        g[alpha] = grad_theta[alpha](q);
        H[alpha] = hess_theta[alpha](q);
      }
      Mat3 out;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double val = 0.0;
          for (std::size_t alpha = 0; alpha < 3; ++alpha) {
            val += v[alpha][s] * H[alpha].a[i][j];
            // d v_alpha[s] / dq_j via the chain rule over the angles.
            double dvs = 0.0;
            for (std::size_t beta = 0; beta < 3; ++beta) dvs += dv[alpha][beta][s] * g[beta][j];
            val += dvs * g[alpha][i];
          }
          out.a[i][j] = val;
        }
      return out;
    };
  }
  return NonAbelianGaugeField(su2_structure(), std::move(A), std::move(J));
}

// --- brackets -----------------------------------------------------------------------

double bracket(const PoissonStructure& st, const Observable& f, const Observable& g,
               const VecX& z) {
  const MatX P = st.eval(z);
  const VecX gf = f.gradient(z);
  const VecX gg = g.gradient(z);
  if (gf.size() != st.dim || gg.size() != st.dim)
    throw GridMismatchError("bracket: gradient dimension mismatch");
  return gf.dot(P * gg);
}

double jacobi_residual(const PoissonStructure& st, const Observable& f, const Observable& g,
                       const Observable& h, const VecX& z, double fd_step) {
  // {{a,b},c}: the inner bracket is a scalar field, differentiated centrally.
  auto nest = [&](const Observable& a, const Observable& b, const Observable& c) {
    VecX gi(st.dim);
    VecX zp = z, zm = z;
    for (int i = 0; i < st.dim; ++i) {
      const double hstep = fd_h(z[i], fd_step);
      zp[i] = z[i] + hstep;
      zm[i] = z[i] - hstep;
      gi[i] = (bracket(st, a, b, zp) - bracket(st, a, b, zm)) / (2.0 * hstep);
      zp[i] = z[i];
      zm[i] = z[i];
    }
    const MatX P = st.eval(z);
    return gi.dot(P * c.gradient(z));
  };
  return nest(f, g, h) + nest(g, h, f) + nest(h, f, g);
}

PoissonStructure canonical_structure(int pairs) {
  if (pairs < 1) throw DomainError("canonical structure needs at least one pair");
  PoissonStructure st;
  st.dim = 2 * pairs;
  st.pi = [pairs](const VecX&) {
    MatX P = MatX::Zero(2 * pairs, 2 * pairs);
    for (int i = 0; i < pairs; ++i) {
      P(pairs + i, i) = 1.0;  // {p_i, q^i} = 1
      P(i, pairs + i) = -1.0;
    }
    return P;
  };
  return st;
}

PoissonStructure magnetic_structure(const AbelianGaugeField& gauge) {
  PoissonStructure st;
  st.dim = 6;
  st.pi = [gauge](const VecX& z) {
    const Mat3 F = gauge.curvature({z[0], z[1], z[2]});
    MatX P = MatX::Zero(6, 6);
    for (int i = 0; i < 3; ++i) {
      P(3 + i, i) = 1.0;
      P(i, 3 + i) = -1.0;
      for (int j = 0; j < 3; ++j) P(3 + i, 3 + j) = gauge.xi * F.a[j][i];
    }
    return P;
  };
  return st;
}

PoissonStructure magnetic_structure_from_B(double xi, std::function<Vec3(const Vec3&)> B) {
  PoissonStructure st;
  st.dim = 6;
  st.pi = [xi, B](const VecX& z) {
    const Vec3 b = B({z[0], z[1], z[2]});
    MatX P = MatX::Zero(6, 6);
    for (int i = 0; i < 3; ++i) {
      P(3 + i, i) = 1.0;
      P(i, 3 + i) = -1.0;
    }
    P(3, 4) = -xi * b.z;
    P(4, 3) = xi * b.z;
    P(4, 5) = -xi * b.x;
    P(5, 4) = xi * b.x;
    P(5, 3) = -xi * b.y;
    P(3, 5) = xi * b.y;
    return P;
  };
  return st;
}

PoissonStructure extended_structure(const NonAbelianGaugeField& gauge) {
  PoissonStructure st;
  const int m = gauge.dim();
  st.dim = 6 + 2 * m;
  st.pi = [gauge, m](const VecX& z) {
    const Vec3 q{z[0], z[1], z[2]};
    const auto F = gauge.curvature(q);
    MatX P = MatX::Zero(6 + 2 * m, 6 + 2 * m);
    for (int i = 0; i < 3; ++i) {
      P(3 + i, i) = 1.0;  // {p_i, q^j} = delta
      P(i, 3 + i) = -1.0;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;  // {p_i, p_j} = sum_s y_s F^(s)_ji
        for (int s = 0; s < m; ++s) v += z[6 + m + s] * F[static_cast<std::size_t>(s)].a[j][i];
        P(3 + i, 3 + j) = v;
      }
    for (int s = 0; s < m; ++s) {
      const Vec3 a = gauge.A(s, q);
      for (int j = 0; j < 3; ++j) {
        P(6 + s, 3 + j) = a[j];  // {u^s, p_j} = A^(s)_j
        P(3 + j, 6 + s) = -a[j];
      }
    }
    for (int s = 0; s < m; ++s) {
      P(6 + m + s, 6 + s) = 1.0;  // {y_s, u^k} = delta
      P(6 + s, 6 + m + s) = -1.0;
    }
    for (int s = 0; s < m; ++s)
      for (int k = 0; k < m; ++k) {
        double v = 0.0;  // {y_s, y_k} = sum_r c^r_sk y_r
        for (int r = 0; r < m; ++r) v += gauge.structure(r, s, k) * z[6 + m + r];
        P(6 + m + s, 6 + m + k) = v;
      }
    return P;
  };
  return st;
}

// --- minimal shift --------------------------------------------------------------------

VecX minimal_shift(const AbelianGaugeField& gauge, const VecX& z) {
  if (z.size() != 6) throw GridMismatchError("minimal shift expects a 6-dimensional (q,p) point");
  const Vec3 a = gauge.A({z[0], z[1], z[2]});
  VecX out = z;
  for (int i = 0; i < 3; ++i) out[3 + i] += gauge.xi * a[i];
  return out;
}

VecX minimal_unshift(const AbelianGaugeField& gauge, const VecX& z) {
  if (z.size() != 6) throw GridMismatchError("minimal shift expects a 6-dimensional (q,p) point");
  const Vec3 a = gauge.A({z[0], z[1], z[2]});
  VecX out = z;
  for (int i = 0; i < 3; ++i) out[3 + i] -= gauge.xi * a[i];
  return out;
}

double shifted_bracket(const PoissonStructure& st, const AbelianGaugeField& gauge,
                       const Observable& f_shifted, const Observable& g_shifted, const VecX& z) {
  // Pull the shifted-chart observable back: F(z) = f(shift(z)), so
  // grad F = Jshift^T grad f with d(ptilde_i)/dq_j = xi dA_i/dq_j.
  auto pullback = [&gauge](const Observable& obs) {
    Observable out;
    out.f = [&gauge, obs](const VecX& w) { return obs.f(minimal_shift(gauge, w)); };
    if (obs.grad) {
      out.grad = [&gauge, obs](const VecX& w) {
        const VecX zs = minimal_shift(gauge, w);
        const VecX gs = obs.grad(zs);
        const Mat3 J = gauge.jac({w[0], w[1], w[2]});
        VecX g = gs;
        for (int j = 0; j < 3; ++j)
          for (int i = 0; i < 3; ++i) g[j] += gauge.xi * J.a[i][j] * gs[3 + i];
        return g;
      };
    }
    return out;
  };
  return bracket(st, pullback(f_shifted), pullback(g_shifted), z);
}

// --- field-strength identities -----------------------------------------------------------

double yang_mills_residual_component(const NonAbelianGaugeField& gauge, const Vec3& q, int s,
                                     int i, int j, int l, double fd_step) {
  const int m = gauge.dim();
  if (s < 0 || s >= m || i < 0 || i > 2 || j < 0 || j > 2 || l < 0 || l > 2)
    throw GridMismatchError("curvature-identity residual: index out of range");

  auto dF = [&](int a, int b, int d) {  // dF^(s)_ab / dq_d
    Vec3 qp = q, qm = q;
    const double h = fd_h(q[d], fd_step);
    qp[d] += h;
    qm[d] -= h;
    const auto Fp = gauge.curvature(qp);
    const auto Fm = gauge.curvature(qm);
    return (Fp[static_cast<std::size_t>(s)].a[a][b] - Fm[static_cast<std::size_t>(s)].a[a][b]) /
           (2.0 * h);
  };

  double res = dF(i, j, l) + dF(j, l, i) + dF(l, i, j);
  const auto F = gauge.curvature(q);
  for (int k = 0; k < m; ++k)
    for (int r = 0; r < m; ++r) {
      const Vec3 a = gauge.A(r, q);
      res += gauge.structure(s, k, r) *
             (F[static_cast<std::size_t>(k)].a[i][j] * a[l] +
              F[static_cast<std::size_t>(k)].a[j][l] * a[i] +
              F[static_cast<std::size_t>(k)].a[l][i] * a[j]);
    }
  return res;
}

double yang_mills_residual(const NonAbelianGaugeField& gauge, const Vec3& q, double fd_step) {
  double worst = 0.0;
  for (int s = 0; s < gauge.dim(); ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          worst = std::max(
              worst, std::fabs(yang_mills_residual_component(gauge, q, s, i, j, l, fd_step)));
  return worst;
}

// --- canonicality of the shifted variables --------------------------------------------------

CanonicalityReport shifted_canonicality_residual(const NonAbelianGaugeField& gauge, const VecX& z) {
  const int m = gauge.dim();
  const int dim = 6 + 2 * m;
  if (z.size() != dim)
    throw GridMismatchError("canonicality residual: point has the wrong dimension");
  const PoissonStructure st = extended_structure(gauge);
  const Vec3 q{z[0], z[1], z[2]};

  // Coordinates of the shifted chart: q, ptilde = p + sum_s y_s A^(s)(q), u, y.
  std::vector<Observable> coords(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) coords[static_cast<std::size_t>(a)] = Observable::coordinate(a, dim);
  for (int i = 0; i < 3; ++i) {
    Observable pt;
    pt.f = [i, m, &gauge](const VecX& w) {
      const Vec3 qq{w[0], w[1], w[2]};
      double v = w[3 + i];
      for (int s = 0; s < m; ++s) v += w[6 + m + s] * gauge.A(s, qq)[i];
      return v;
    };
    pt.grad = [i, m, dim, &gauge](const VecX& w) {
      const Vec3 qq{w[0], w[1], w[2]};
      VecX g = VecX::Zero(dim);
      g[3 + i] = 1.0;
      for (int s = 0; s < m; ++s) {
        const Mat3 J = gauge.jac(s, qq);
        for (int j = 0; j < 3; ++j) g[j] += w[6 + m + s] * J.a[i][j];
        g[6 + m + s] += gauge.A(s, qq)[i];
      }
      return g;
    };
    coords[static_cast<std::size_t>(3 + i)] = pt;
  }

  CanonicalityReport rep;
  rep.measured = MatX::Zero(dim, dim);
  rep.target = MatX::Zero(dim, dim);
  for (int i = 0; i < 3; ++i) {
    rep.target(3 + i, i) = 1.0;
    rep.target(i, 3 + i) = -1.0;
  }
  for (int s = 0; s < m; ++s) {
    rep.target(6 + m + s, 6 + s) = 1.0;
    rep.target(6 + s, 6 + m + s) = -1.0;
  }
  for (int s = 0; s < m; ++s)
    for (int k = 0; k < m; ++k) {
      double v = 0.0;
      for (int r = 0; r < m; ++r) v += gauge.structure(r, s, k) * z[6 + m + r];
      rep.target(6 + m + s, 6 + m + k) = v;
    }

  rep.y_ptilde_predicted = MatX::Zero(m, 3);
  for (int s = 0; s < m; ++s)
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < m; ++k) {
        double cy = 0.0;
        for (int r = 0; r < m; ++r) cy += gauge.structure(r, s, k) * z[6 + m + r];
        v += cy * gauge.A(k, q)[j];
      }
      rep.y_ptilde_predicted(s, j) = v;
    }

  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      const double v =
          bracket(st, coords[static_cast<std::size_t>(a)], coords[static_cast<std::size_t>(b)], z);
      rep.measured(a, b) = v;
      const bool y_pt = (a >= 6 + m && b >= 3 && b < 6) || (b >= 6 + m && a >= 3 && a < 6);
      const double dev = std::fabs(v - rep.target(a, b));
      if (y_pt) {
        rep.max_y_ptilde = std::max(rep.max_y_ptilde, dev);
        const int s = (a >= 6 + m) ? a - 6 - m : b - 6 - m;
        const int j = (a >= 6 + m) ? b - 3 : a - 3;
        const double pred =
            (a >= 6 + m) ? rep.y_ptilde_predicted(s, j) : -rep.y_ptilde_predicted(s, j);
        rep.max_y_ptilde_mismatch = std::max(rep.max_y_ptilde_mismatch, std::fabs(v - pred));
      } else {
        rep.max_deviation = std::max(rep.max_deviation, dev);
      }
    }
  return rep;
}

}  // namespace vfw
