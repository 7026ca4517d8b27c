#include "surfstokes/lagrange.hpp"

#include <memory>
#include <mutex>

namespace surfstokes {

namespace {

// p_m(y) = prod_{j<m} (y-j)/(m-j), the 1D factor of the simplex Lagrange
// product formula; returns value and first two derivatives.
struct Factor {
  double p, dp, ddp;
};

Factor factor(int m, double y) {
  Factor f{1.0, 0.0, 0.0};
  for (int j = 0; j < m; ++j) {
    const double c = 1.0 / (m - j);
    const double t = (y - j) * c;
    f.ddp = f.ddp * t + 2.0 * f.dp * c;
    f.dp = f.dp * t + f.p * c;
    f.p *= t;
  }
  return f;
}

}  // namespace

LagrangeBasis::LagrangeBasis(int k) : degree(k), count(count_for(k)) {
  require(k >= 1 && k <= 5, "LagrangeBasis: degree must be in 1..5");
  multi.reserve(count);
  for (int m0 = k; m0 >= 0; --m0)
    for (int m1 = k - m0; m1 >= 0; --m1)
      for (int m2 = k - m0 - m1; m2 >= 0; --m2)
        multi.push_back({m0, m1, m2, k - m0 - m1 - m2});
}

void LagrangeBasis::eval(const MatX& bary, MatX& values) const {
  const int n = static_cast<int>(bary.rows());
  values.resize(n, count);
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < count; ++a) {
      double v = 1.0;
      for (int i = 0; i < 4; ++i) v *= factor(multi[a][i], degree * bary(q, i)).p;
      values(q, a) = v;
    }
}

void LagrangeBasis::eval_grad(const MatX& bary, MatX& grads) const {
  const int n = static_cast<int>(bary.rows());
  grads.resize(n, 3 * count);
  // dlambda_i/d(x,y,z)
  static const double dl[4][3] = {{-1, -1, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < count; ++a) {
      Factor f[4];
      for (int i = 0; i < 4; ++i) f[i] = factor(multi[a][i], degree * bary(q, i));
      double gl[4];  // d/dlambda_i
      for (int i = 0; i < 4; ++i) {
        gl[i] = degree * f[i].dp;
        for (int l = 0; l < 4; ++l)
          if (l != i) gl[i] *= f[l].p;
      }
      for (int d = 0; d < 3; ++d) {
        double g = 0;
        for (int i = 0; i < 4; ++i) g += gl[i] * dl[i][d];
        grads(q, 3 * a + d) = g;
      }
    }
}

void LagrangeBasis::eval_hessian(const MatX& bary, MatX& hess) const {
  const int n = static_cast<int>(bary.rows());
  hess.resize(n, 6 * count);
  static const double dl[4][3] = {{-1, -1, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  static const int pack[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
  const double k = degree;
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < count; ++a) {
      Factor f[4];
      for (int i = 0; i < 4; ++i) f[i] = factor(multi[a][i], degree * bary(q, i));
      double h2[4][4];  // d2/dlambda_i dlambda_j
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double v = (i == j) ? k * k * f[i].ddp : k * k * f[i].dp * f[j].dp;
          for (int l = 0; l < 4; ++l)
            if (l != i && l != j) v *= f[l].p;
          h2[i][j] = v;
        }
      for (int c = 0; c < 6; ++c) {
        const int d1 = pack[c][0], d2 = pack[c][1];
        double v = 0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) v += h2[i][j] * dl[i][d1] * dl[j][d2];
        hess(q, 6 * a + c) = v;
      }
    }
}

const LagrangeBasis& lagrange_basis(int k) {
  static std::mutex mu;
  static std::array<std::unique_ptr<LagrangeBasis>, 6> cache;
  std::scoped_lock lock(mu);
  require(k >= 1 && k <= 5, "lagrange_basis: degree must be in 1..5");
  if (!cache[k]) cache[k] = std::make_unique<LagrangeBasis>(k);
  return *cache[k];
}

}  // namespace surfstokes
