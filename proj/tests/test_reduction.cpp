#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "vfw/reduction.hpp"
#include "vfw/rng.hpp"

using namespace vfw;

namespace {

// Levi-Civita symbol on 0-based indices.
double eps3(int i, int j, int k) { return 0.5 * (j - i) * (k - j) * (k - i); }

VecX random_point(Rng& rng, int dim) {
  VecX z(dim);
  for (int i = 0; i < dim; ++i) z[i] = rng.uniform(-1.2, 1.2);
  return z;
}

Observable random_quadratic(Rng& rng, int dim) {
  MatX M(dim, dim);
  VecX b(dim);
  for (int i = 0; i < dim; ++i) {
    b[i] = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < dim; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
  }
  return Observable::quadratic(M, b, rng.uniform(-1.0, 1.0));
}

// A = (yz, x^2, xy) with its exact Jacobian; curvature (2x - z, 0, x) pattern.
AbelianGaugeField twisted_gauge(double xi) {
  AbelianGaugeField g;
  g.xi = xi;
  g.A = [](const Vec3& q) { return Vec3{q.y * q.z, q.x * q.x, q.x * q.y}; };
  g.jacobian = [](const Vec3& q) {
    Mat3 J;
    J.a[0][1] = q.z;
    J.a[0][2] = q.y;
    J.a[1][0] = 2.0 * q.x;
    J.a[2][0] = q.y;
    J.a[2][1] = q.x;
    return J;
  };
  return g;
}

// Symmetric-gauge potential of a uniform field B0 along z.
AbelianGaugeField uniform_gauge(double xi, double b0) {
  AbelianGaugeField g;
  g.xi = xi;
  g.A = [b0](const Vec3& q) { return Vec3{-0.5 * b0 * q.y, 0.5 * b0 * q.x, 0.0}; };
  g.jacobian = [b0](const Vec3&) {
    Mat3 J;
    J.a[0][1] = -0.5 * b0;
    J.a[1][0] = 0.5 * b0;
    return J;
  };
  return g;
}

// Fixed linear potentials A^(s) = M_s q spanning a genuinely curved su(2) family.
std::array<Mat3, 3> su2_test_matrices() {
  std::array<Mat3, 3> M;
  const double m0[3][3] = {{0.3, -0.1, 0.4}, {0.2, 0.5, -0.3}, {-0.2, 0.1, 0.6}};
  const double m1[3][3] = {{-0.4, 0.2, 0.1}, {0.3, -0.5, 0.2}, {0.1, 0.4, -0.3}};
  const double m2[3][3] = {{0.2, 0.3, -0.6}, {-0.1, 0.4, 0.5}, {0.3, -0.2, 0.1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      M[0].a[i][j] = m0[i][j];
      M[1].a[i][j] = m1[i][j];
      M[2].a[i][j] = m2[i][j];
    }
  return M;
}

NonAbelianGaugeField linear_su2_gauge(const std::array<Mat3, 3>& M) {
  std::vector<std::function<Vec3(const Vec3&)>> A(3);
  std::vector<std::function<Mat3(const Vec3&)>> J(3);
  for (int s = 0; s < 3; ++s) {
    const Mat3 Ms = M[s];
    A[s] = [Ms](const Vec3& q) { return Ms.mul(q); };
    J[s] = [Ms](const Vec3&) { return Ms; };
  }
  return NonAbelianGaugeField(su2_structure(), A, J);
}

// Closed forms for the linear family, assembled independently of the library.
double closed_F(const std::array<Mat3, 3>& M, const Vec3& q, int s, int i, int j) {
  double v = M[s].a[j][i] - M[s].a[i][j];
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 3; ++r) v += eps3(s, k, r) * M[k].mul(q)[i] * M[r].mul(q)[j];
  return v;
}

double closed_dF(const std::array<Mat3, 3>& M, const Vec3& q, int s, int i, int j, int l) {
  double v = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 3; ++r)
      v += eps3(s, k, r) * (M[k].a[i][l] * M[r].mul(q)[j] + M[k].mul(q)[i] * M[r].a[j][l]);
  return v;
}

double closed_cterm(const std::array<Mat3, 3>& M, const Vec3& q, int s, int i, int j, int l) {
  double v = 0.0;
  for (int r = 2; r >= 0; --r)  // loop order deliberately reversed vs the library
    for (int k = 2; k >= 0; --k)
      v += eps3(s, k, r) *
           (closed_F(M, q, k, i, j) * M[r].mul(q)[l] + closed_F(M, q, k, j, l) * M[r].mul(q)[i] +
            closed_F(M, q, k, l, i) * M[r].mul(q)[j]);
  return v;
}

double closed_residual(const std::array<Mat3, 3>& M, const Vec3& q, int s, int i, int j, int l) {
  return closed_dF(M, q, s, i, j, l) + closed_dF(M, q, s, j, l, i) + closed_dF(M, q, s, l, i, j) +
         closed_cterm(M, q, s, i, j, l);
}

// Abelian embedding: a one-generator algebra with vanishing structure constants.
std::vector<std::vector<std::vector<double>>> trivial_structure() {
  return {{{0.0}}};
}

}  // namespace

TEST_CASE("Poisson tensors are validated at every evaluation") {
  PoissonStructure skew_broken;
  skew_broken.dim = 2;
  skew_broken.pi = [](const VecX&) {
    MatX P(2, 2);
    P << 0.0, 1.0, 1.0, 0.0;
    return P;
  };
  VecX z2 = VecX::Zero(2);
  CHECK_THROWS_AS(skew_broken.eval(z2), ConstraintViolationError);

  PoissonStructure wrong_shape;
  wrong_shape.dim = 2;
  wrong_shape.pi = [](const VecX&) { return MatX::Zero(3, 3); };
  CHECK_THROWS_AS(wrong_shape.eval(z2), GridMismatchError);

  CHECK_THROWS_AS(canonical_structure(3).eval(VecX::Zero(4)), GridMismatchError);
  CHECK_THROWS_AS(canonical_structure(0), DomainError);
}

TEST_CASE("canonical bracket reproduces the conjugate-pair table") {
  const PoissonStructure st = canonical_structure(3);
  Rng rng(11);
  const VecX z = random_point(rng, 6);
  const Observable q1 = Observable::coordinate(0, 6);
  const Observable q2 = Observable::coordinate(1, 6);
  const Observable p1 = Observable::coordinate(3, 6);
  const Observable p2 = Observable::coordinate(4, 6);

  CHECK(bracket(st, p1, q1, z) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bracket(st, q1, p1, z) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::fabs(bracket(st, p1, q2, z)) < 1e-14);
  CHECK(std::fabs(bracket(st, p1, p2, z)) < 1e-14);
  CHECK(std::fabs(bracket(st, q1, q2, z)) < 1e-14);

  const Observable f = random_quadratic(rng, 6);
  CHECK(std::fabs(bracket(st, f, f, z)) < 1e-13);

  CHECK_THROWS_AS(bracket(st, Observable::coordinate(0, 4), p1, z), GridMismatchError);
}

TEST_CASE("brackets obey the Leibniz rule on every structure") {
  Rng rng(12);
  auto leibniz_gap = [&rng](const PoissonStructure& st, const VecX& z) {
    const Observable f = random_quadratic(rng, st.dim);
    const Observable g = random_quadratic(rng, st.dim);
    const Observable h = random_quadratic(rng, st.dim);
    Observable prod;
    prod.f = [g, h](const VecX& w) { return g.f(w) * h.f(w); };
    const double lhs = bracket(st, f, prod, z);
    const double rhs = g.f(z) * bracket(st, f, h, z) + bracket(st, f, g, z) * h.f(z);
    return std::fabs(lhs - rhs) / (1.0 + std::fabs(rhs));
  };

  CHECK(leibniz_gap(canonical_structure(3), random_point(rng, 6)) < 1e-8);
  CHECK(leibniz_gap(magnetic_structure(twisted_gauge(1.3)), random_point(rng, 6)) < 1e-8);
  CHECK(leibniz_gap(extended_structure(linear_su2_gauge(su2_test_matrices())),
                    random_point(rng, 12)) < 1e-8);
}

TEST_CASE("constant tensors have a vanishing Jacobi defect") {
  const PoissonStructure st = canonical_structure(3);
  Rng rng(13);
  const VecX z = random_point(rng, 6);
  const Observable f = random_quadratic(rng, 6);
  const Observable g = random_quadratic(rng, 6);
  const Observable h = random_quadratic(rng, 6);
  CHECK(std::fabs(jacobi_residual(st, f, g, h, z)) < 1e-8);
}

TEST_CASE("observables expose exact gradients checked against differencing") {
  Rng rng(14);
  const VecX z = random_point(rng, 6);
  const Observable f = random_quadratic(rng, 6);
  Observable numeric;
  numeric.f = f.f;  // strip the analytic gradient
  const VecX ga = f.gradient(z);
  const VecX gn = numeric.gradient(z);
  CHECK((ga - gn).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + ga.cwiseAbs().maxCoeff()));

  const VecX gc = Observable::coordinate(2, 6).gradient(z);
  CHECK(gc[2] == 1.0);
  CHECK(gc.norm() == 1.0);
}

TEST_CASE("gauge-field Jacobians agree with differencing and set the curvature") {
  const AbelianGaugeField gauge = twisted_gauge(1.0);
  AbelianGaugeField numeric;
  numeric.A = gauge.A;  // falls back to central differences
  const Vec3 q{0.4, -0.2, 0.9};

  const Mat3 Ja = gauge.jac(q);
  const Mat3 Jn = numeric.jac(q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::fabs(Ja.a[i][j] - Jn.a[i][j]) < 1e-6);

  const Mat3 F = gauge.curvature(q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(F.a[i][j] == -F.a[j][i]);
  CHECK(F.a[0][1] == doctest::Approx(2.0 * q.x - q.z).epsilon(1e-14));
  CHECK(std::fabs(F.a[0][2]) < 1e-14);
  CHECK(F.a[1][2] == doctest::Approx(q.x).epsilon(1e-14));
}

TEST_CASE("the two magnetic structures agree and fix the bracket signs") {
  const double xi = 1.3, b0 = 0.8;
  const PoissonStructure st = magnetic_structure(uniform_gauge(xi, b0));
  Rng rng(15);
  const VecX z = random_point(rng, 6);
  const Observable q1 = Observable::coordinate(0, 6);
  const Observable p1 = Observable::coordinate(3, 6);
  const Observable p2 = Observable::coordinate(4, 6);

  CHECK(bracket(st, p1, p2, z) == doctest::Approx(-xi * b0).epsilon(1e-12));
  CHECK(bracket(st, p1, q1, z) == doctest::Approx(1.0).epsilon(1e-14));

  const PoissonStructure st_b =
      magnetic_structure_from_B(xi, [b0](const Vec3&) { return Vec3{0.0, 0.0, b0}; });
  CHECK((st.eval(z) - st_b.eval(z)).cwiseAbs().maxCoeff() < 1e-12);

  // A nonuniform potential: A = (0, x^2, 0) carries B = (0, 0, 2x).
  AbelianGaugeField g2;
  g2.xi = xi;
  g2.A = [](const Vec3& q) { return Vec3{0.0, q.x * q.x, 0.0}; };
  g2.jacobian = [](const Vec3& q) {
    Mat3 J;
    J.a[1][0] = 2.0 * q.x;
    return J;
  };
  const PoissonStructure st2 = magnetic_structure(g2);
  const PoissonStructure st2_b =
      magnetic_structure_from_B(xi, [](const Vec3& q) { return Vec3{0.0, 0.0, 2.0 * q.x}; });
  for (int trial = 0; trial < 3; ++trial) {
    const VecX w = random_point(rng, 6);
    CHECK((st2.eval(w) - st2_b.eval(w)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("momentum-triple Jacobi defect measures the monopole density") {
  const double xi = 1.3;
  const Observable p1 = Observable::coordinate(3, 6);
  const Observable p2 = Observable::coordinate(4, 6);
  const Observable p3 = Observable::coordinate(5, 6);
  Rng rng(16);
  const VecX z = random_point(rng, 6);

  // Uniform divergence: B = (x, 0, 0) has div B = 1.
  const PoissonStructure lin =
      magnetic_structure_from_B(xi, [](const Vec3& q) { return Vec3{q.x, 0.0, 0.0}; });
  CHECK(jacobi_residual(lin, p1, p2, p3, z) == doctest::Approx(xi).epsilon(1e-6));

  // Position-dependent divergence: B = (x^2, yz, -x) has div B = 2x + z.
  const PoissonStructure var = magnetic_structure_from_B(
      xi, [](const Vec3& q) { return Vec3{q.x * q.x, q.y * q.z, -q.x}; });
  for (int trial = 0; trial < 3; ++trial) {
    const VecX w = random_point(rng, 6);
    const double want = xi * (2.0 * w[0] + w[2]);
    CHECK(std::fabs(jacobi_residual(var, p1, p2, p3, w) - want) < 1e-6 * (1.0 + std::fabs(want)));
  }

  // Divergence-free fields leave no defect, whether given directly or via a potential.
  const PoissonStructure free_b =
      magnetic_structure_from_B(xi, [](const Vec3&) { return Vec3{0.0, 0.0, 0.8}; });
  CHECK(std::fabs(jacobi_residual(free_b, p1, p2, p3, z)) < 1e-8);
  CHECK(std::fabs(jacobi_residual(magnetic_structure(twisted_gauge(xi)), p1, p2, p3, z)) < 1e-8);
}

TEST_CASE("minimal shift inverts exactly and cancels the abelian curvature") {
  const AbelianGaugeField gauge = twisted_gauge(1.3);
  Rng rng(17);
  const VecX z = random_point(rng, 6);

  const VecX back = minimal_unshift(gauge, minimal_shift(gauge, z));
  CHECK((back - z).cwiseAbs().maxCoeff() < 1e-14);

  AbelianGaugeField off;
  off.A = [](const Vec3&) { return Vec3{}; };
  CHECK((minimal_shift(off, z) - z).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(minimal_shift(gauge, VecX::Zero(4)), GridMismatchError);

  // In the shifted chart the momenta commute and stay conjugate to position.
  const PoissonStructure st = magnetic_structure(gauge);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Observable pi = Observable::coordinate(3 + i, 6);
      const Observable pj = Observable::coordinate(3 + j, 6);
      const Observable qj = Observable::coordinate(j, 6);
      CHECK(std::fabs(shifted_bracket(st, gauge, pi, pj, z)) < 1e-10);
      const double want = (i == j) ? 1.0 : 0.0;
      CHECK(std::fabs(shifted_bracket(st, gauge, pi, qj, z) - want) < 1e-12);
    }

  // Same cancellation with the differenced Jacobian fallback.
  AbelianGaugeField numeric;
  numeric.xi = gauge.xi;
  numeric.A = gauge.A;
  const PoissonStructure stn = magnetic_structure(numeric);
  CHECK(std::fabs(shifted_bracket(stn, numeric, Observable::coordinate(3, 6),
                                  Observable::coordinate(4, 6), z)) < 1e-8);
}

TEST_CASE("structure constants are validated at construction") {
  const auto c = su2_structure();
  CHECK(c[2][0][1] == 1.0);
  CHECK(c[2][1][0] == -1.0);
  CHECK(c[0][1][2] == 1.0);
  CHECK(c[1][2][0] == 1.0);
  CHECK(c[0][0][0] == 0.0);
  CHECK(c[1][1][2] == 0.0);

  std::vector<std::function<Vec3(const Vec3&)>> A(3, [](const Vec3& q) { return q; });

  auto broken_skew = su2_structure();
  broken_skew[0][0][1] = 0.5;  // no matching (k,s) partner
  CHECK_THROWS_AS(NonAbelianGaugeField(broken_skew, A), ConstraintViolationError);

  auto broken_algebra = su2_structure();
  broken_algebra[0][0][1] = 1.0;  // antisymmetric but not a Lie algebra
  broken_algebra[0][1][0] = -1.0;
  CHECK_THROWS_AS(NonAbelianGaugeField(broken_algebra, A), ConstraintViolationError);

  std::vector<std::function<Vec3(const Vec3&)>> one(1, A[0]);
  CHECK_THROWS_AS(NonAbelianGaugeField(su2_structure(), one), GridMismatchError);
  CHECK_THROWS_AS(NonAbelianGaugeField(trivial_structure(), {}), DomainError);
  std::vector<std::function<Mat3(const Vec3&)>> twoJ(2, [](const Vec3&) { return Mat3{}; });
  CHECK_THROWS_AS(NonAbelianGaugeField(su2_structure(), A, twoJ), GridMismatchError);
}

TEST_CASE("abelian embedding: exact curvature annihilates the cyclic identity") {
  std::vector<std::function<Vec3(const Vec3&)>> A = {
      [](const Vec3& q) { return Vec3{q.y * q.z, q.x * q.x, q.x * q.y}; }};
  const NonAbelianGaugeField gauge(trivial_structure(), A);  // differenced Jacobian
  const AbelianGaugeField plain = twisted_gauge(1.0);

  const Vec3 points[] = {{0.4, -0.2, 0.9}, {-1.1, 0.5, 0.3}, {0.05, -0.6, -0.8}};
  for (const Vec3& q : points) {
    CHECK(yang_mills_residual(gauge, q) < 1e-7);
    const Mat3 Fa = plain.curvature(q);
    const auto F = gauge.curvature(q);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::fabs(F[0].a[i][j] - Fa.a[i][j]) < 1e-9);
  }
}

TEST_CASE("pure gauge: flat curvature and vanishing identity residual") {
  std::array<std::function<double(const Vec3&)>, 3> theta = {
      [](const Vec3& q) { return 0.3 * q.x + 0.2 * q.y * q.y; },
      [](const Vec3& q) { return 0.5 * q.z + 0.1 * q.x * q.y; },
      [](const Vec3& q) { return 0.2 * q.x * q.z + 0.3 * q.y; }};
  std::array<std::function<Vec3(const Vec3&)>, 3> grad = {
      [](const Vec3& q) { return Vec3{0.3, 0.4 * q.y, 0.0}; },
      [](const Vec3& q) { return Vec3{0.1 * q.y, 0.1 * q.x, 0.5}; },
      [](const Vec3& q) { return Vec3{0.2 * q.z, 0.3, 0.2 * q.x}; }};
  std::array<std::function<Mat3(const Vec3&)>, 3> hess = {
      [](const Vec3&) {
        Mat3 H;
        H.a[1][1] = 0.4;
        return H;
      },
      [](const Vec3&) {
        Mat3 H;
        H.a[0][1] = H.a[1][0] = 0.1;
        return H;
      },
      [](const Vec3&) {
        Mat3 H;
        H.a[0][2] = H.a[2][0] = 0.2;
        return H;
      }};
  const NonAbelianGaugeField gauge = su2_pure_gauge(theta, grad, hess);

  const Vec3 points[] = {{0.4, -0.2, 0.9}, {-1.1, 0.5, 0.3}, {0.05, -0.6, -0.8}};
  for (const Vec3& q : points) {
    const auto F = gauge.curvature(q);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::fabs(F[s].a[i][j]));
    CHECK(worst < 1e-12);

    // Supplied Jacobians are consistent with differencing the potentials.
    for (int s = 0; s < 3; ++s) {
      AbelianGaugeField numeric;
      numeric.A = [&gauge, s](const Vec3& w) { return gauge.A(s, w); };
      const Mat3 Ja = gauge.jac(s, q);
      const Mat3 Jn = numeric.jac(q);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::fabs(Ja.a[i][j] - Jn.a[i][j]) < 1e-6);
    }

    CHECK(yang_mills_residual(gauge, q) < 1e-6);
  }
}

TEST_CASE("generic field: identity residual matches an independent assembly") {
  const auto M = su2_test_matrices();
  const NonAbelianGaugeField gauge = linear_su2_gauge(M);

  const Vec3 points[] = {{0.4, -0.2, 0.9}, {-1.1, 0.5, 0.3}};
  double largest = 0.0;
  for (const Vec3& q : points)
    for (int s = 0; s < 3; ++s)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) {
            const double got = yang_mills_residual_component(gauge, q, s, i, j, l);
            const double want = closed_residual(M, q, s, i, j, l);
            CHECK(std::fabs(got - want) < 1e-8 * (1.0 + std::fabs(want)));
            // The differenced half equals the algebraic half: the cyclic
            // derivative sum of the full curvature reproduces the c-term.
            const double cterm = closed_cterm(M, q, s, i, j, l);
            CHECK(std::fabs(got - 2.0 * cterm) < 1e-8 * (1.0 + std::fabs(got)));
            largest = std::max(largest, std::fabs(got));
          }

  // This family is genuinely non-flat: the residual does not vanish.
  CHECK(largest > 1e-2);
  CHECK(yang_mills_residual(gauge, points[0]) > 1e-2);

  CHECK_THROWS_AS(yang_mills_residual_component(gauge, points[0], 3, 0, 1, 2),
                  GridMismatchError);
  CHECK_THROWS_AS(yang_mills_residual_component(gauge, points[0], 0, 0, 1, 4),
                  GridMismatchError);
}

TEST_CASE("extended bracket table is assembled from the gauge data") {
  const auto M = su2_test_matrices();
  const NonAbelianGaugeField gauge = linear_su2_gauge(M);
  const PoissonStructure st = extended_structure(gauge);
  REQUIRE(st.dim == 12);

  VecX z(12);
  z << 0.4, -0.3, 0.7, 0.2, 1.1, -0.5, 0.6, -0.2, 0.9, 1.2, -0.7, 0.5;
  const Vec3 q{z[0], z[1], z[2]};
  const MatX P = st.eval(z);

  for (int i = 0; i < 3; ++i) {
    CHECK(P(3 + i, i) == 1.0);
    CHECK(P(i, 3 + i) == -1.0);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double want = 0.0;
      for (int s = 0; s < 3; ++s) want += z[9 + s] * closed_F(M, q, s, j, i);
      CHECK(std::fabs(P(3 + i, 3 + j) - want) < 1e-13);
    }
  for (int s = 0; s < 3; ++s)
    for (int j = 0; j < 3; ++j) {
      CHECK(P(6 + s, 3 + j) == doctest::Approx(M[s].mul(q)[j]).epsilon(1e-14));
      CHECK(P(3 + j, 6 + s) == doctest::Approx(-M[s].mul(q)[j]).epsilon(1e-14));
    }
  for (int s = 0; s < 3; ++s) {
    CHECK(P(9 + s, 6 + s) == 1.0);
    CHECK(P(6 + s, 9 + s) == -1.0);
  }
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k < 3; ++k) {
      double want = 0.0;
      for (int r = 0; r < 3; ++r) want += eps3(r, s, k) * z[9 + r];
      CHECK(P(9 + s, 9 + k) == doctest::Approx(want).epsilon(1e-14));
    }
  // Decoupled blocks stay empty: q-q, q-u, q-y, p-y, u-u.
  for (int i = 0; i < 3; ++i)
    for (int b = 0; b < 12; ++b) {
      if (b >= 3 && b < 6) continue;
      CHECK(P(i, b) == 0.0);
    }
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 3; ++s) CHECK(P(3 + i, 9 + s) == 0.0);
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k < 3; ++k) CHECK(P(6 + s, 6 + k) == 0.0);
}

TEST_CASE("extended Jacobi defect on momenta tracks the curvature residual") {
  const auto M = su2_test_matrices();
  const NonAbelianGaugeField gauge = linear_su2_gauge(M);
  const PoissonStructure st = extended_structure(gauge);

  VecX z(12);
  z << 0.4, -0.3, 0.7, 0.2, 1.1, -0.5, 0.6, -0.2, 0.9, 1.2, -0.7, 0.5;
  const Vec3 q{z[0], z[1], z[2]};

  const Observable p1 = Observable::coordinate(3, 12);
  const Observable p2 = Observable::coordinate(4, 12);
  const Observable p3 = Observable::coordinate(5, 12);
  const double defect = jacobi_residual(st, p1, p2, p3, z);

  // The defect is the y-weighted cyclic derivative sum of the curvature,
  // which is half of the full identity residual.
  double want = 0.0;
  for (int s = 0; s < 3; ++s)
    want += 0.5 * z[9 + s] * yang_mills_residual_component(gauge, q, s, 0, 1, 2);
  CHECK(std::fabs(defect - want) < 1e-6 * (1.0 + std::fabs(want)));
  CHECK(std::fabs(defect) > 1e-3);  // genuinely obstructed for this family

  // Abelian embedding: closed curvature, so the defect drops to noise.
  std::vector<std::function<Vec3(const Vec3&)>> A = {
      [](const Vec3& w) { return Vec3{w.y * w.z, w.x * w.x, w.x * w.y}; }};
  const NonAbelianGaugeField ab(trivial_structure(), A);
  const PoissonStructure st_ab = extended_structure(ab);
  VecX z8(8);
  z8 << 0.4, -0.3, 0.7, 0.2, 1.1, -0.5, 0.6, 1.4;
  CHECK(std::fabs(jacobi_residual(st_ab, Observable::coordinate(3, 8),
                                  Observable::coordinate(4, 8), Observable::coordinate(5, 8),
                                  z8)) < 1e-7);
}

TEST_CASE("shifted chart is canonical except for the tracked obstruction") {
  const auto M = su2_test_matrices();
  const NonAbelianGaugeField gauge = linear_su2_gauge(M);

  VecX z(12);
  z << 0.4, -0.3, 0.7, 0.2, 1.1, -0.5, 0.6, -0.2, 0.9, 1.2, -0.7, 0.5;
  const Vec3 q{z[0], z[1], z[2]};
  const CanonicalityReport rep = shifted_canonicality_residual(gauge, z);

  CHECK(rep.max_deviation < 1e-10);
  CHECK(rep.max_y_ptilde_mismatch < 1e-10);

  // The obstruction block carries sum_k A^(k)_j sum_r c^r_sk y_r exactly.
  double largest = 0.0;
  for (int s = 0; s < 3; ++s)
    for (int j = 0; j < 3; ++j) {
      double pred = 0.0;
      for (int k = 0; k < 3; ++k) {
        double cy = 0.0;
        for (int r = 0; r < 3; ++r) cy += eps3(r, s, k) * z[9 + r];
        pred += cy * M[k].mul(q)[j];
      }
      CHECK(std::fabs(rep.y_ptilde_predicted(s, j) - pred) < 1e-14);
      CHECK(std::fabs(rep.measured(9 + s, 3 + j) - pred) < 1e-10);
      largest = std::max(largest, std::fabs(pred));
    }
  CHECK(rep.max_y_ptilde == doctest::Approx(largest).epsilon(1e-8));
  CHECK(rep.max_y_ptilde > 1e-3);

  // The algebra block keeps its non-abelian values: {y_0, y_1} = y_2.
  CHECK(rep.measured(9, 10) == doctest::Approx(z[11]).epsilon(1e-10));
  CHECK(rep.target(9, 10) == doctest::Approx(z[11]).epsilon(1e-14));
  CHECK(rep.measured(3, 0) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(shifted_canonicality_residual(gauge, VecX::Zero(6)), GridMismatchError);

  // Abelian embedding: the obstruction is absent and the chart is canonical.
  std::vector<std::function<Vec3(const Vec3&)>> A = {
      [](const Vec3& w) { return Vec3{w.y * w.z, w.x * w.x, w.x * w.y}; }};
  std::vector<std::function<Mat3(const Vec3&)>> J = {[](const Vec3& w) {
    Mat3 Jm;
    Jm.a[0][1] = w.z;
    Jm.a[0][2] = w.y;
    Jm.a[1][0] = 2.0 * w.x;
    Jm.a[2][0] = w.y;
    Jm.a[2][1] = w.x;
    return Jm;
  }};
  const NonAbelianGaugeField ab(trivial_structure(), A, J);
  VecX z8(8);
  z8 << 0.4, -0.3, 0.7, 0.2, 1.1, -0.5, 0.6, 1.4;
  const CanonicalityReport rep_ab = shifted_canonicality_residual(ab, z8);
  CHECK(rep_ab.max_deviation < 1e-10);
  CHECK(rep_ab.max_y_ptilde < 1e-10);
  CHECK(rep_ab.max_y_ptilde_mismatch < 1e-10);
}

TEST_CASE("a central algebra direction restores every bracket") {
  // su(2) extended by one commuting generator; freezing y along the
  // commuting direction kills both the algebra block and the obstruction.
  std::vector<std::vector<std::vector<double>>> c(
      4, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int k = 0; k < 3; ++k) c[r][s][k] = eps3(r, s, k);

  const auto M3 = su2_test_matrices();
  Mat3 M4;
  const double m4[3][3] = {{0.1, 0.4, -0.2}, {0.3, -0.1, 0.2}, {-0.4, 0.2, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M4.a[i][j] = m4[i][j];
  std::array<Mat3, 4> M = {M3[0], M3[1], M3[2], M4};

  std::vector<std::function<Vec3(const Vec3&)>> A(4);
  std::vector<std::function<Mat3(const Vec3&)>> J(4);
  for (int s = 0; s < 4; ++s) {
    const Mat3 Ms = M[s];
    A[s] = [Ms](const Vec3& w) { return Ms.mul(w); };
    J[s] = [Ms](const Vec3&) { return Ms; };
  }
  const NonAbelianGaugeField gauge(c, A, J);
  REQUIRE(gauge.dim() == 4);

  VecX z(14);
  z << 0.4, -0.3, 0.7, 0.2, 1.1, -0.5, 0.6, -0.2, 0.9, 0.3, 0.0, 0.0, 0.0, 5.0;
  const CanonicalityReport rep = shifted_canonicality_residual(gauge, z);
  CHECK(rep.max_deviation < 1e-10);
  CHECK(rep.max_y_ptilde < 1e-10);
  CHECK(rep.max_y_ptilde_mismatch < 1e-10);
  for (int s = 0; s < 4; ++s)
    for (int k = 0; k < 4; ++k) CHECK(std::fabs(rep.measured(10 + s, 10 + k)) < 1e-12);

  // Moving y off the commuting direction reinstates the obstruction.
  VecX z2 = z;
  z2[10] = 1.0;
  const CanonicalityReport rep2 = shifted_canonicality_residual(gauge, z2);
  CHECK(rep2.max_y_ptilde > 1e-3);
  CHECK(rep2.max_y_ptilde_mismatch < 1e-10);
  CHECK(rep2.max_deviation < 1e-10);
}
