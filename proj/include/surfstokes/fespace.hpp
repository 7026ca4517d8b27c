#pragma once

#include <functional>

#include "surfstokes/lagrange.hpp"
#include "surfstokes/mesh.hpp"

namespace surfstokes {

// Global numbering of the degree-k Lagrange nodes over a set of tets.
// Nodes are identified exactly through their integer coordinates on the
// k-refined grid lattice, and numbered lexicographically, so the numbering
// is deterministic and continuity across shared entities is automatic.
// Vector-valued spaces interleave components: dof = 3*node + component.
struct NodeTable {
  int degree = 1;
  int nodes_per_cell = 4;
  std::vector<int> cells;                     // covered tet ids, ascending
  std::vector<int> cell_nodes;                // [cell*npc + local] -> node
  std::vector<Vec3> coords;                   // node coords (undeformed mesh)
  std::vector<std::array<int, 2>> owner;      // node -> (cell index, local node)
  int count = 0;

  int n_cells() const { return static_cast<int>(cells.size()); }
  int node(int cell, int local) const { return cell_nodes[cell * nodes_per_cell + local]; }
};

using DofMap = NodeTable;

NodeTable build_node_table(const TetMesh& mesh, const std::vector<int>& tet_ids, int k);

struct CutTopology;
DofMap build_dofmap(const TetMesh& mesh, const CutTopology& cut, int k);

struct ParametricMap;

// Nodal interpolation at the Theta-mapped node positions.
VecX interpolate_scalar(const std::function<double(const Vec3&)>& f, const DofMap& dofs,
                        const ParametricMap& map);
VecX interpolate_vector(const std::function<Vec3(const Vec3&)>& f, const DofMap& dofs,
                        const ParametricMap& map);

// Evaluate a coefficient field on cell `cell` at reference points
// (rows of `bary`); for vector fields coefficients are interleaved.
VecX eval_scalar_field(const DofMap& dofs, const VecX& coeffs, int cell, const MatX& bary);
MatX eval_vector_field(const DofMap& dofs, const VecX& coeffs, int cell, const MatX& bary);

}  // namespace surfstokes
