#include "surfstokes/fespace.hpp"

#include <algorithm>

#include "surfstokes/cut.hpp"
#include "surfstokes/lift.hpp"

namespace surfstokes {

NodeTable build_node_table(const TetMesh& mesh, const std::vector<int>& tet_ids, int k) {
  require(k >= 1 && k <= 5, "build_node_table: degree must be in 1..5");
  const LagrangeBasis& basis = lagrange_basis(k);
  NodeTable tab;
  tab.degree = k;
  tab.nodes_per_cell = basis.count;
  tab.cells = tet_ids;
  std::sort(tab.cells.begin(), tab.cells.end());

  // fine-lattice integer key per node, exact dedup
  const Index fn = Index(k) * mesh.n_per_axis + 1;
  std::vector<Index> keys(tab.cells.size() * basis.count);
  parallel_for(static_cast<Index>(tab.cells.size()), [&](Index c) {
    const auto& T = mesh.tets[tab.cells[c]];
    for (int a = 0; a < basis.count; ++a) {
      Index f[3] = {0, 0, 0};
      for (int i = 0; i < 4; ++i)
        for (int d = 0; d < 3; ++d) f[d] += Index(basis.multi[a][i]) * mesh.vertex_grid[T[i]][d];
      keys[c * basis.count + a] = (f[0] * fn + f[1]) * fn + f[2];
    }
  });

  std::vector<Index> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  tab.count = static_cast<int>(sorted.size());

  tab.cell_nodes.resize(keys.size());
  parallel_for(static_cast<Index>(keys.size()), [&](Index i) {
    tab.cell_nodes[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
  });

  tab.coords.resize(tab.count);
  tab.owner.assign(tab.count, {-1, -1});
  for (int c = 0; c < tab.n_cells(); ++c)
    for (int a = 0; a < basis.count; ++a) {
      const int nd = tab.cell_nodes[c * basis.count + a];
      if (tab.owner[nd][0] == -1) {
        tab.owner[nd] = {c, a};
        const auto& T = mesh.tets[tab.cells[c]];
        const Vec4 lam = basis.node_bary(a);
        tab.coords[nd] = lam(0) * mesh.vertices[T[0]] + lam(1) * mesh.vertices[T[1]] +
                         lam(2) * mesh.vertices[T[2]] + lam(3) * mesh.vertices[T[3]];
      }
    }
  return tab;
}

DofMap build_dofmap(const TetMesh& mesh, const CutTopology& cut, int k) {
  return build_node_table(mesh, cut.active_tets, k);
}

VecX interpolate_scalar(const std::function<double(const Vec3&)>& f, const DofMap& dofs,
                        const ParametricMap& map) {
  VecX out(dofs.count);
  const LagrangeBasis& basis = lagrange_basis(dofs.degree);
  parallel_for(dofs.count, [&](Index nd) {
    const auto [cell, local] = dofs.owner[nd];
    out(nd) = f(map.theta(dofs.cells[cell], basis.node_bary(local)));
  });
  return out;
}

VecX interpolate_vector(const std::function<Vec3(const Vec3&)>& f, const DofMap& dofs,
                        const ParametricMap& map) {
  VecX out(3 * dofs.count);
  const LagrangeBasis& basis = lagrange_basis(dofs.degree);
  parallel_for(dofs.count, [&](Index nd) {
    const auto [cell, local] = dofs.owner[nd];
    out.segment<3>(3 * nd) = f(map.theta(dofs.cells[cell], basis.node_bary(local)));
  });
  return out;
}

VecX eval_scalar_field(const DofMap& dofs, const VecX& coeffs, int cell, const MatX& bary) {
  const LagrangeBasis& basis = lagrange_basis(dofs.degree);
  MatX vals;
  basis.eval(bary, vals);
  VecX out = VecX::Zero(bary.rows());
  for (int a = 0; a < basis.count; ++a) out += vals.col(a) * coeffs(dofs.node(cell, a));
  return out;
}

MatX eval_vector_field(const DofMap& dofs, const VecX& coeffs, int cell, const MatX& bary) {
  const LagrangeBasis& basis = lagrange_basis(dofs.degree);
  MatX vals;
  basis.eval(bary, vals);
  MatX out = MatX::Zero(bary.rows(), 3);
  for (int a = 0; a < basis.count; ++a) {
    const int nd = dofs.node(cell, a);
    for (int d = 0; d < 3; ++d) out.col(d) += vals.col(a) * coeffs(3 * nd + d);
  }
  return out;
}

}  // namespace surfstokes
