#include "surfstokes/quadrature.hpp"

#include <Eigen/Eigenvalues>

namespace surfstokes {

namespace {

// Golub-Welsch on the Jacobi(alpha, 0) recurrence, shifted to [0, 1].
void jacobi_rule_01(int n, int alpha, VecX& x, VecX& w) {
  require(n >= 1, "quadrature: need at least one point");
  const double a = alpha;
  VecX diag(n), sub(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) {
    const double den = (2 * k + a) * (2 * k + a + 2);
    diag(k) = (k == 0 && alpha == 0) ? 0.0 : (-a * a) / den;
  }
  for (int k = 1; k < n; ++k) {
    const double num = 4.0 * k * (k + a) * k * (k + a);
    const double den = std::pow(2 * k + a, 2) * (2 * k + a + 1) * (2 * k + a - 1);
    sub(k - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<MatX> es;
  MatX J = MatX::Zero(n, n);
  for (int k = 0; k < n; ++k) J(k, k) = diag(k);
  for (int k = 0; k + 1 < n; ++k) J(k, k + 1) = J(k + 1, k) = sub(k);
  es.compute(J);
  require(es.info() == Eigen::Success, "quadrature: eigensolve failed");
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);  // int_{-1}^{1} (1-t)^a dt
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    x(k) = 0.5 * (es.eigenvalues()(k) + 1.0);
    w(k) = mu0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k) /
           std::pow(2.0, a + 1.0);  // maps [-1,1] weight to [0,1]
  }
}

}  // namespace

void gauss_legendre(int n, VecX& x, VecX& w) { jacobi_rule_01(n, 0, x, w); }

void gauss_jacobi(int n, int alpha, VecX& x, VecX& w) { jacobi_rule_01(n, alpha, x, w); }

QuadRule triangle_rule(int degree) {
  require(degree >= 0 && degree <= 14, "triangle_rule: unsupported degree");
  const int m = (degree + 2) / 2;  // exact up to 2m-1 >= degree
  VecX xi, wi, yj, wj;
  gauss_jacobi(m, 1, xi, wi);
  gauss_legendre(m, yj, wj);
  QuadRule rule;
  rule.exactness = 2 * m - 1;
  rule.points.resize(m * m, 3);
  rule.weights.resize(m * m);
  int q = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j, ++q) {
      const double l1 = xi(i);
      const double l2 = yj(j) * (1.0 - xi(i));
      rule.points(q, 0) = 1.0 - l1 - l2;
      rule.points(q, 1) = l1;
      rule.points(q, 2) = l2;
      rule.weights(q) = wi(i) * wj(j);
    }
  return rule;
}

QuadRule tet_rule(int degree) {
  require(degree >= 0 && degree <= 14, "tet_rule: unsupported degree");
  const int m = (degree + 2) / 2;
  VecX x1, w1, x2, w2, x3, w3;
  gauss_jacobi(m, 2, x1, w1);
  gauss_jacobi(m, 1, x2, w2);
  gauss_legendre(m, x3, w3);
  QuadRule rule;
  rule.exactness = 2 * m - 1;
  rule.points.resize(m * m * m, 4);
  rule.weights.resize(m * m * m);
  int q = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k, ++q) {
        const double l1 = x1(i);
        const double l2 = x2(j) * (1.0 - l1);
        const double l3 = x3(k) * (1.0 - l1 - l2);
        rule.points(q, 0) = 1.0 - l1 - l2 - l3;
        rule.points(q, 1) = l1;
        rule.points(q, 2) = l2;
        rule.points(q, 3) = l3;
        rule.weights(q) = w1(i) * w2(j) * w3(k);
      }
  return rule;
}

}  // namespace surfstokes
