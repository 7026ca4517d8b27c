#include "surfstokes/levelset_fe.hpp"

#include <numeric>

namespace surfstokes {

Vec3 LevelSetBundle::phi_hat_gradient(const TetMesh& mesh, int tet) const {
  const auto& T = mesh.tets[tet];
  Vec3 d(phi_lin[T[1]] - phi_lin[T[0]], phi_lin[T[2]] - phi_lin[T[0]],
         phi_lin[T[3]] - phi_lin[T[0]]);
  return mesh.jacobian(tet).transpose().partialPivLu().solve(d);
}

void LevelSetBundle::phi_k_derivs(const TetMesh& mesh, int tet, const Vec4& bary, double* val,
                                  Vec3* grad, Mat3* hess) const {
  const LagrangeBasis& basis = lagrange_basis(degree);
  const int cell = static_cast<int>(
      std::lower_bound(nodes.cells.begin(), nodes.cells.end(), tet) - nodes.cells.begin());
  require(cell < nodes.n_cells() && nodes.cells[cell] == tet, "phi_k_derivs: tet not in table");
  MatX pt(1, 4);
  pt << bary(0), bary(1), bary(2), bary(3);
  MatX vals, grads, hs;
  basis.eval(pt, vals);
  if (grad || hess) basis.eval_grad(pt, grads);
  if (hess) basis.eval_hessian(pt, hs);
  const Mat3 Ainv = mesh.jacobian(tet).inverse();
  if (val) *val = 0;
  if (grad) grad->setZero();
  if (hess) hess->setZero();
  static const int pack[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
  for (int a = 0; a < basis.count; ++a) {
    const double c = phi_k[nodes.node(cell, a)];
    if (val) *val += c * vals(0, a);
    if (grad) *grad += c * (Ainv.transpose() * Vec3(grads(0, 3 * a), grads(0, 3 * a + 1),
                                                    grads(0, 3 * a + 2)));
    if (hess) {
      Mat3 Href;
      for (int p = 0; p < 6; ++p) {
        Href(pack[p][0], pack[p][1]) = hs(0, 6 * a + p);
        Href(pack[p][1], pack[p][0]) = hs(0, 6 * a + p);
      }
      *hess += c * (Ainv.transpose() * Href * Ainv);
    }
  }
}

LevelSetBundle interpolate_levelset(const TetMesh& mesh, const LevelSet& phi, int k) {
  require(k >= 1 && k <= 5, "interpolate_levelset: degree must be in 1..5");
  LevelSetBundle b;
  b.phi = &phi;
  b.degree = k;
  b.eps_sign = 1e-12 * mesh.h;
  std::vector<int> all(mesh.tet_count());
  std::iota(all.begin(), all.end(), 0);
  b.nodes = build_node_table(mesh, all, k);
  b.phi_k.resize(b.nodes.count);
  parallel_for(b.nodes.count, [&](Index nd) { b.phi_k[nd] = phi.value(b.nodes.coords[nd]); });
  b.phi_lin.resize(mesh.vertex_count());
  std::vector<double> grad_norm(mesh.vertex_count());
  parallel_for(mesh.vertex_count(), [&](Index v) {
    b.phi_lin[v] = phi.value(mesh.vertices[v]);
    grad_norm[v] = phi.gradient(mesh.vertices[v]).norm();
  });
  b.min_grad_norm = *std::min_element(grad_norm.begin(), grad_norm.end());
  require(b.min_grad_norm > 1e-10,
          "interpolate_levelset: |grad phi| vanishes at a band vertex (c0 too small)");
  return b;
}

}  // namespace surfstokes
