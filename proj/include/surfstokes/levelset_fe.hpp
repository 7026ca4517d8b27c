#pragma once

#include "surfstokes/fespace.hpp"

namespace surfstokes {

// Analytic level set phi together with its degree-k FE interpolant phi_k
// and the piecewise-linear vertex interpolant phi_lin on the band mesh.
struct LevelSetBundle {
  const LevelSet* phi = nullptr;
  int degree = 1;
  NodeTable nodes;              // degree-k nodes over all band tets
  std::vector<double> phi_k;    // nodal values of I^k phi
  std::vector<double> phi_lin;  // per mesh vertex (raw interpolation values)
  double min_grad_norm = 0;     // recorded c0 over band vertices
  double eps_sign = 0;          // 1e-12 * h, zero-value perturbation

  // vertex value with exact zeros pushed to +eps, used for sign decisions
  double signed_vertex_value(int v) const {
    return phi_lin[v] == 0.0 ? eps_sign : phi_lin[v];
  }

  double phi_hat(const TetMesh& mesh, int tet, const Vec4& bary) const {
    const auto& T = mesh.tets[tet];
    return bary(0) * phi_lin[T[0]] + bary(1) * phi_lin[T[1]] + bary(2) * phi_lin[T[2]] +
           bary(3) * phi_lin[T[3]];
  }
  // constant per-tet gradient of the linear interpolant
  Vec3 phi_hat_gradient(const TetMesh& mesh, int tet) const;

  // degree-k interpolant with derivatives (affine chain rule)
  void phi_k_derivs(const TetMesh& mesh, int tet, const Vec4& bary, double* val, Vec3* grad,
                    Mat3* hess) const;
};

LevelSetBundle interpolate_levelset(const TetMesh& mesh, const LevelSet& phi, int k);

}  // namespace surfstokes
