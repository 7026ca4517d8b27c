#include "surfstokes/cut.hpp"

#include <algorithm>
#include <map>

namespace surfstokes {

namespace {

constexpr int kEdgeLocal[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

struct TetCut {
  int n_points = 0;
  CutTopology::Point pts[4];
  int n_tris = 0;
  std::array<int, 3> tris[2];  // local point indices
};

// Intersection parameter on edge (a, b), oriented by ascending global vertex
// id so neighboring tets produce bit-identical points.
CutTopology::Point cut_point(const TetMesh& mesh, const LevelSetBundle& bundle, int tet, int la,
                             int lb) {
  const auto& T = mesh.tets[tet];
  if (T[la] > T[lb]) std::swap(la, lb);
  const double va = bundle.signed_vertex_value(T[la]);
  const double vb = bundle.signed_vertex_value(T[lb]);
  double t = va / (va - vb);
  t = std::clamp(t, 1e-12, 1.0 - 1e-12);  // vertex snap guard
  CutTopology::Point p;
  p.bary.setZero();
  p.bary(la) = 1.0 - t;
  p.bary(lb) = t;
  int e = 0;
  while (e < 6 && !((kEdgeLocal[e][0] == std::min(la, lb) && kEdgeLocal[e][1] == std::max(la, lb))))
    ++e;
  p.mesh_edge = mesh.tet_edges[tet][e];
  return p;
}

TetCut cut_tet(const TetMesh& mesh, const LevelSetBundle& bundle, int tet) {
  const auto& T = mesh.tets[tet];
  double s[4];
  int neg[4], pos[4], nn = 0, np = 0;
  for (int i = 0; i < 4; ++i) {
    s[i] = bundle.signed_vertex_value(T[i]);
    if (s[i] < 0)
      neg[nn++] = i;
    else
      pos[np++] = i;
  }
  TetCut out;
  if (nn == 0 || np == 0) return out;

  if (nn == 1 || np == 1) {
    const int lone = (nn == 1) ? neg[0] : pos[0];
    const int* rest = (nn == 1) ? pos : neg;
    for (int i = 0; i < 3; ++i) out.pts[i] = cut_point(mesh, bundle, tet, lone, rest[i]);
    out.n_points = 3;
    out.tris[0] = {0, 1, 2};
    out.n_tris = 1;
    return out;
  }

  // quadrilateral case: points cyclically (ac, ad, bd, bc)
  const int a = neg[0], b = neg[1], c = pos[0], d = pos[1];
  out.pts[0] = cut_point(mesh, bundle, tet, a, c);
  out.pts[1] = cut_point(mesh, bundle, tet, a, d);
  out.pts[2] = cut_point(mesh, bundle, tet, b, d);
  out.pts[3] = cut_point(mesh, bundle, tet, b, c);
  out.n_points = 4;
  Vec3 phys[4];
  for (int i = 0; i < 4; ++i) phys[i] = mesh.map_to_physical(tet, out.pts[i].bary);
  const double d1 = (phys[0] - phys[2]).norm();  // diagonal ac-bd
  const double d2 = (phys[1] - phys[3]).norm();  // diagonal ad-bc
  bool use_d1;
  if (d1 == d2) {
    const std::array<int, 2> k1{std::min(out.pts[0].mesh_edge, out.pts[2].mesh_edge),
                                std::max(out.pts[0].mesh_edge, out.pts[2].mesh_edge)};
    const std::array<int, 2> k2{std::min(out.pts[1].mesh_edge, out.pts[3].mesh_edge),
                                std::max(out.pts[1].mesh_edge, out.pts[3].mesh_edge)};
    use_d1 = k1 < k2;
  } else {
    use_d1 = d1 < d2;
  }
  if (use_d1) {
    out.tris[0] = {0, 1, 2};
    out.tris[1] = {0, 2, 3};
  } else {
    out.tris[0] = {1, 2, 3};
    out.tris[1] = {1, 3, 0};
  }
  out.n_tris = 2;
  return out;
}

}  // namespace

CutTopology classify_and_cut(const TetMesh& mesh, const LevelSetBundle& bundle, Exec exec) {
  std::vector<TetCut> cuts(mesh.tet_count());
  parallel_for(mesh.tet_count(), [&](Index t) { cuts[t] = cut_tet(mesh, bundle, int(t)); }, exec);

  // ordered merge over ascending tet id
  CutTopology cut;
  cut.active_index.assign(mesh.tet_count(), -1);
  cut.point_offset.push_back(0);
  cut.tri_offset.push_back(0);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (cuts[t].n_tris == 0) continue;
    const int cell = cut.n_active();
    cut.active_tets.push_back(t);
    cut.active_index[t] = cell;
    const int base = static_cast<int>(cut.points.size());
    for (int i = 0; i < cuts[t].n_points; ++i) cut.points.push_back(cuts[t].pts[i]);
    for (int i = 0; i < cuts[t].n_tris; ++i) {
      CutTopology::Tri tri;
      tri.cell = cell;
      for (int j = 0; j < 3; ++j) tri.pts[j] = base + cuts[t].tris[i][j];
      // orient so that cross(p1-p0, p2-p0) points toward phi > 0
      Vec3 p0 = mesh.map_to_physical(t, cut.points[tri.pts[0]].bary);
      Vec3 p1 = mesh.map_to_physical(t, cut.points[tri.pts[1]].bary);
      Vec3 p2 = mesh.map_to_physical(t, cut.points[tri.pts[2]].bary);
      if ((p1 - p0).cross(p2 - p0).dot(bundle.phi_hat_gradient(mesh, t)) < 0)
        std::swap(tri.pts[1], tri.pts[2]);
      cut.tris.push_back(tri);
    }
    cut.point_offset.push_back(static_cast<int>(cut.points.size()));
    cut.tri_offset.push_back(static_cast<int>(cut.tris.size()));
  }

  // edge table and closedness
  std::map<std::array<int, 2>, int> edge_of;
  for (int ti = 0; ti < static_cast<int>(cut.tris.size()); ++ti) {
    const auto& tri = cut.tris[ti];
    for (int e = 0; e < 3; ++e) {
      std::array<int, 2> key{cut.points[tri.pts[e]].mesh_edge,
                             cut.points[tri.pts[(e + 1) % 3]].mesh_edge};
      if (key[0] > key[1]) std::swap(key[0], key[1]);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        edge_of.emplace(key, static_cast<int>(cut.edge_table.size()));
        cut.edge_table.push_back({key, {ti, -1}});
      } else {
        auto& ge = cut.edge_table[it->second];
        require(ge.tris[1] == -1, "classify_and_cut: edge shared by more than two triangles");
        ge.tris[1] = ti;
      }
    }
  }
  cut.closed = !cut.tris.empty();
  for (const auto& ge : cut.edge_table)
    if (ge.tris[1] == -1) cut.closed = false;
  if (bundle.phi->is_closed_surface())
    require(cut.closed, "classify_and_cut: Gamma^lin is not closed (band too narrow?)");
  return cut;
}

double gamma_lin_area(const TetMesh& mesh, const CutTopology& cut) {
  double area = 0;
  for (const auto& tri : cut.tris) {
    const int t = cut.tet_of_cell(tri.cell);
    const Vec3 p0 = mesh.map_to_physical(t, cut.points[tri.pts[0]].bary);
    const Vec3 p1 = mesh.map_to_physical(t, cut.points[tri.pts[1]].bary);
    const Vec3 p2 = mesh.map_to_physical(t, cut.points[tri.pts[2]].bary);
    area += 0.5 * (p1 - p0).cross(p2 - p0).norm();
  }
  return area;
}

double regular_fraction(const TetMesh& mesh, const CutTopology& cut, double c_hat) {
  require(c_hat > 0, "regular_fraction: threshold must be positive");
  if (cut.n_active() == 0) return 0.0;
  int regular = 0;
  for (int cell = 0; cell < cut.n_active(); ++cell) {
    const int t = cut.tet_of_cell(cell);
    double area = 0;
    for (int ti = cut.tri_offset[cell]; ti < cut.tri_offset[cell + 1]; ++ti) {
      const auto& tri = cut.tris[ti];
      const Vec3 p0 = mesh.map_to_physical(t, cut.points[tri.pts[0]].bary);
      const Vec3 p1 = mesh.map_to_physical(t, cut.points[tri.pts[1]].bary);
      const Vec3 p2 = mesh.map_to_physical(t, cut.points[tri.pts[2]].bary);
      area += 0.5 * (p1 - p0).cross(p2 - p0).norm();
    }
    const double hT = mesh.tet_diameter(t);
    if (area >= c_hat * hT * hT) ++regular;
  }
  return double(regular) / cut.n_active();
}

}  // namespace surfstokes
