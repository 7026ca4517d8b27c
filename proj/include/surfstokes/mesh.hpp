#pragma once

#include <array>
#include <unordered_map>

#include "surfstokes/common.hpp"
#include "surfstokes/levelset.hpp"

namespace surfstokes {

struct Box {
  Vec3 lo, hi;
};

// Returns the default computational box (-5/3, 5/3)^3 and the level-l
// resolution n_per_axis = 4 * 2^l used by all experiment drivers.
Box default_box();
int level_resolution(int level);

// Conforming tetrahedral mesh of a narrow band of grid cubes, each cube
// split into 6 tetrahedra (Kuhn subdivision, consistent main diagonal).
struct TetMesh {
  Vec3 box_lo = Vec3::Zero();
  double cell = 0;     // grid cube side
  int n_per_axis = 0;  // cubes per axis of the full grid

  std::vector<Vec3> vertices;
  std::vector<std::array<Index, 3>> vertex_grid;  // integer grid coords
  std::vector<std::array<int, 4>> tets;           // positively oriented

  // derived incidence
  std::vector<std::array<int, 2>> edges;  // sorted vertex pairs
  std::vector<std::array<int, 6>> tet_edges;
  std::vector<std::array<int, 3>> faces;  // sorted vertex triples
  std::vector<std::array<int, 4>> tet_faces;
  std::vector<std::array<int, 2>> face_tets;  // second = -1 on boundary

  double h = 0;                 // max tet diameter (the cube body diagonal)
  double shape_regularity = 0;  // max diameter / inradius over all tets

  std::unordered_map<Index, int> cube_first_tet;  // linear cube id -> tet id

  int tet_count() const { return static_cast<int>(tets.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }

  Mat3 jacobian(int t) const {
    Mat3 A;
    const auto& T = tets[t];
    for (int c = 0; c < 3; ++c) A.col(c) = vertices[T[c + 1]] - vertices[T[0]];
    return A;
  }
  Vec3 map_to_physical(int t, const Vec4& bary) const {
    const auto& T = tets[t];
    return bary(0) * vertices[T[0]] + bary(1) * vertices[T[1]] + bary(2) * vertices[T[2]] +
           bary(3) * vertices[T[3]];
  }
  double tet_diameter(int t) const;
  Index cube_linear_id(Index ix, Index iy, Index iz) const {
    return (ix * n_per_axis + iy) * n_per_axis + iz;
  }

  // Locates x in the band; allows mild extrapolation outside the band by
  // searching neighbor cubes for the tet with least barycentric violation.
  int locate(const Vec3& x, Vec4& bary) const;
};

// Keeps exactly those cubes whose corner phi-values change sign (zeros count
// toward both signs), inflated by band_width cubes in the Chebyshev metric.
TetMesh build_band_mesh(const Box& box, int n_per_axis, const LevelSet& phi, int band_width = 1);

}  // namespace surfstokes
