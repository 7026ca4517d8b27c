#pragma once

#include "surfstokes/levelset_fe.hpp"
#include "surfstokes/quadrature.hpp"

namespace surfstokes {

// Piecewise-planar surface extracted from the zero set of phi_hat by
// marching tetrahedra; triangles live in parent-tet barycentric coordinates.
struct CutTopology {
  struct Point {
    Vec4 bary;
    int mesh_edge;  // the mesh edge carrying this intersection point
  };
  struct Tri {
    int cell;                 // active-cell index
    std::array<int, 3> pts;   // indices into `points`
  };
  struct GammaEdge {
    std::array<int, 2> keys;  // sorted mesh-edge ids of the endpoints
    std::array<int, 2> tris;  // adjacent triangles (-1 if open)
  };

  std::vector<int> active_tets;   // ascending tet ids (the cut elements)
  std::vector<int> active_index;  // per tet: active-cell index or -1
  std::vector<Point> points;      // cut-polygon points grouped per cell
  std::vector<int> point_offset;  // size n_active()+1
  std::vector<Tri> tris;          // grouped per cell
  std::vector<int> tri_offset;    // size n_active()+1
  std::vector<GammaEdge> edge_table;
  bool closed = false;

  int n_active() const { return static_cast<int>(active_tets.size()); }
  int tet_of_cell(int cell) const { return active_tets[cell]; }
};

CutTopology classify_and_cut(const TetMesh& mesh, const LevelSetBundle& bundle,
                             Exec exec = Exec::Parallel);

// Total area of Gamma^lin (triangle-area sum on the undeformed mesh).
double gamma_lin_area(const TetMesh& mesh, const CutTopology& cut);

// Fraction of cut elements whose surface piece has area >= c_hat * h_T^2.
double regular_fraction(const TetMesh& mesh, const CutTopology& cut, double c_hat);

}  // namespace surfstokes
