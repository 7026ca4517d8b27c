#pragma once

#include "surfstokes/common.hpp"

namespace surfstokes {

// Quadrature rule on the reference simplex, points in barycentric
// coordinates (3 columns for the triangle, 4 for the tetrahedron).
// Weights sum to the reference measure (1/2 resp. 1/6).
struct QuadRule {
  MatX points;
  VecX weights;
  int exactness = 0;
  int size() const { return static_cast<int>(weights.size()); }
};

// Gauss-Legendre rule with n points on [0, 1], exact up to degree 2n-1.
void gauss_legendre(int n, VecX& x, VecX& w);

// Gauss-Jacobi rule with weight (1-x)^alpha on [0, 1]; weights include the
// weight function, so sum(w) = 1/(alpha+1).
void gauss_jacobi(int n, int alpha, VecX& x, VecX& w);

// Conical-product Gauss rules; positive weights, stated exactness.
QuadRule triangle_rule(int degree);
QuadRule tet_rule(int degree);

}  // namespace surfstokes
