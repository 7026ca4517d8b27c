#pragma once

#include <array>

#include "surfstokes/common.hpp"

namespace surfstokes {

// Equispaced Lagrange basis on the reference tetrahedron
//   v0=(0,0,0) v1=(1,0,0) v2=(0,1,0) v3=(0,0,1),
// barycentric lambda = (1-x-y-z, x, y, z). Nodes are the lattice points
// multi/k enumerated in descending lexicographic multi-index order, so the
// first four nodes of any degree are the vertices v0..v3.
struct LagrangeBasis {
  int degree = 1;
  int count = 4;
  std::vector<std::array<int, 4>> multi;

  explicit LagrangeBasis(int k);

  static int count_for(int k) { return (k + 1) * (k + 2) * (k + 3) / 6; }

  Vec4 node_bary(int a) const {
    return Vec4(multi[a][0], multi[a][1], multi[a][2], multi[a][3]) / double(degree);
  }

  // values: npts x count
  void eval(const MatX& bary, MatX& values) const;
  // grads: npts x (3*count), columns [3a..3a+2] = d/d(x,y,z) of basis a
  void eval_grad(const MatX& bary, MatX& grads) const;
  // hessians: npts x (6*count), per basis the packed (xx,yy,zz,xy,xz,yz)
  void eval_hessian(const MatX& bary, MatX& hess) const;
};

// shared basis instances, built on first use
const LagrangeBasis& lagrange_basis(int k);

}  // namespace surfstokes
