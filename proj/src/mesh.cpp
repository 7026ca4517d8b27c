#include "surfstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace surfstokes {

Box default_box() {
  const double a = 5.0 / 3.0;
  return Box{Vec3(-a, -a, -a), Vec3(a, a, a)};
}

int level_resolution(int level) {
  require(level >= 0 && level <= 12, "level out of range");
  return 4 << level;
}

double TetMesh::tet_diameter(int t) const {
  double d = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      d = std::max(d, (vertices[tets[t][a]] - vertices[tets[t][b]]).norm());
  return d;
}

namespace {

// The 6 permutations of (x,y,z); odd ones get their tet listing swapped to
// keep positive orientation.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr bool kPermOdd[6] = {false, true, true, false, false, true};

double tet_inradius(const TetMesh& m, int t) {
  const auto& T = m.tets[t];
  const Vec3 p0 = m.vertices[T[0]], p1 = m.vertices[T[1]], p2 = m.vertices[T[2]],
             p3 = m.vertices[T[3]];
  const double vol = (p1 - p0).cross(p2 - p0).dot(p3 - p0) / 6.0;
  double area = 0;
  area += 0.5 * (p2 - p1).cross(p3 - p1).norm();
  area += 0.5 * (p2 - p0).cross(p3 - p0).norm();
  area += 0.5 * (p1 - p0).cross(p3 - p0).norm();
  area += 0.5 * (p1 - p0).cross(p2 - p0).norm();
  return 3.0 * vol / area;
}

}  // namespace

TetMesh build_band_mesh(const Box& box, int n, const LevelSet& phi, int band_width) {
  require(n >= 1, "build_band_mesh: n_per_axis must be >= 1");
  require(band_width >= 0, "build_band_mesh: band_width must be >= 0");
  const Vec3 ext = box.hi - box.lo;
  require(ext.minCoeff() > 0, "build_band_mesh: degenerate box");
  require(std::abs(ext(0) - ext(1)) < 1e-14 * ext(0) && std::abs(ext(0) - ext(2)) < 1e-14 * ext(0),
          "build_band_mesh: box must be a cube");

  TetMesh m;
  m.box_lo = box.lo;
  m.n_per_axis = n;
  m.cell = ext(0) / n;

  const Index np = n + 1;
  auto grid_point = [&](Index i, Index j, Index k) {
    return Vec3(box.lo(0) + i * m.cell, box.lo(1) + j * m.cell, box.lo(2) + k * m.cell);
  };

  // corner phi values; sign change (zeros inclusive) marks a surface cube
  std::vector<double> corner_phi(np * np * np);
  parallel_for(np * np * np, [&](Index id) {
    const Index i = id / (np * np), j = (id / np) % np, k = id % np;
    corner_phi[id] = phi.value(grid_point(i, j, k));
  });
  auto corner = [&](Index i, Index j, Index k) { return corner_phi[(i * np + j) * np + k]; };

  std::vector<char> marked(Index(n) * n * n, 0);
  bool any = false;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double lo = 1e300, hi = -1e300;
        for (int b = 0; b < 8; ++b) {
          const double v = corner(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (lo <= 0.0 && hi >= 0.0) {
          marked[(i * n + j) * n + k] = 1;
          any = true;
        }
      }
  require(any, "build_band_mesh: surface outside box (no sign change in any cube)");

  std::vector<char> kept = marked;
  for (int pass = 0; pass < band_width; ++pass) {
    std::vector<char> next = kept;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
          if (next[(i * n + j) * n + k]) continue;
          for (Index di = -1; di <= 1 && !next[(i * n + j) * n + k]; ++di)
            for (Index dj = -1; dj <= 1; ++dj)
              for (Index dk = -1; dk <= 1; ++dk) {
                const Index ii = i + di, jj = j + dj, kk = k + dk;
                if (ii < 0 || jj < 0 || kk < 0 || ii >= n || jj >= n || kk >= n) continue;
                if (kept[(ii * n + jj) * n + kk]) {
                  next[(i * n + j) * n + k] = 1;
                  goto neighbor_found;
                }
              }
        neighbor_found:;
        }
    kept.swap(next);
  }

  // vertices of kept cubes, numbered lexicographically by grid coordinate
  std::unordered_map<Index, int> vid;
  auto vkey = [&](Index i, Index j, Index k) { return (i * np + j) * np + k; };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        if (!kept[(i * n + j) * n + k]) continue;
        for (int b = 0; b < 8; ++b) {
          const Index key = vkey(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
          if (!vid.count(key)) {
            vid.emplace(key, 0);
          }
        }
      }
  {
    std::vector<Index> keys;
    keys.reserve(vid.size());
    for (auto& kv : vid) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    m.vertices.resize(keys.size());
    m.vertex_grid.resize(keys.size());
    for (int c = 0; c < static_cast<int>(keys.size()); ++c) {
      vid[keys[c]] = c;
      const Index i = keys[c] / (np * np), j = (keys[c] / np) % np, k = keys[c] % np;
      m.vertices[c] = grid_point(i, j, k);
      m.vertex_grid[c] = {i, j, k};
    }
  }

  // Kuhn split of every kept cube, cubes in lexicographic order
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        if (!kept[(i * n + j) * n + k]) continue;
        int cv[8];
        for (int b = 0; b < 8; ++b)
          cv[b] = vid.at(vkey(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1)));
        m.cube_first_tet.emplace(m.cube_linear_id(i, j, k), m.tet_count());
        for (int p = 0; p < 6; ++p) {
          int bits = 0;
          std::array<int, 4> T;
          T[0] = cv[0];
          bits |= 1 << kPerms[p][0];
          T[1] = cv[bits];
          bits |= 1 << kPerms[p][1];
          T[2] = cv[bits];
          T[3] = cv[7];
          if (kPermOdd[p]) std::swap(T[2], T[3]);
          m.tets.push_back(T);
        }
      }

  // incidence tables
  {
    std::map<std::array<int, 2>, int> emap;
    std::map<std::array<int, 3>, int> fmap;
    m.tet_edges.resize(m.tet_count());
    m.tet_faces.resize(m.tet_count());
    static const int eloc[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    static const int floc[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (int t = 0; t < m.tet_count(); ++t) {
      for (int e = 0; e < 6; ++e) {
        std::array<int, 2> key = {m.tets[t][eloc[e][0]], m.tets[t][eloc[e][1]]};
        if (key[0] > key[1]) std::swap(key[0], key[1]);
        auto it = emap.find(key);
        if (it == emap.end()) {
          it = emap.emplace(key, static_cast<int>(m.edges.size())).first;
          m.edges.push_back(key);
        }
        m.tet_edges[t][e] = it->second;
      }
      for (int f = 0; f < 4; ++f) {
        std::array<int, 3> key = {m.tets[t][floc[f][0]], m.tets[t][floc[f][1]],
                                  m.tets[t][floc[f][2]]};
        std::sort(key.begin(), key.end());
        auto it = fmap.find(key);
        if (it == fmap.end()) {
          it = fmap.emplace(key, static_cast<int>(m.faces.size())).first;
          m.faces.push_back(key);
          m.face_tets.push_back({t, -1});
        } else {
          require(m.face_tets[it->second][1] == -1, "build_band_mesh: non-manifold face");
          m.face_tets[it->second][1] = t;
        }
        m.tet_faces[t][f] = it->second;
      }
    }
  }

  double hmax = 0, reg = 0;
  for (int t = 0; t < m.tet_count(); ++t) {
    const double d = m.tet_diameter(t);
    hmax = std::max(hmax, d);
    reg = std::max(reg, d / tet_inradius(m, t));
    require(m.jacobian(t).determinant() > 0, "build_band_mesh: negative tet volume");
  }
  m.h = hmax;
  m.shape_regularity = reg;
  require(reg <= 12.0, "build_band_mesh: shape regularity bound violated");
  return m;
}

int TetMesh::locate(const Vec3& x, Vec4& bary) const {
  const Vec3 rel = (x - box_lo) / cell;
  const Index ci = std::clamp<Index>(Index(std::floor(rel(0))), 0, n_per_axis - 1);
  const Index cj = std::clamp<Index>(Index(std::floor(rel(1))), 0, n_per_axis - 1);
  const Index ck = std::clamp<Index>(Index(std::floor(rel(2))), 0, n_per_axis - 1);
  int best_tet = -1;
  double best_violation = 1e300;
  Vec4 best_bary;
  auto consider_cube = [&](Index i, Index j, Index k) {
    if (i < 0 || j < 0 || k < 0 || i >= n_per_axis || j >= n_per_axis || k >= n_per_axis) return;
    auto it = cube_first_tet.find(cube_linear_id(i, j, k));
    if (it == cube_first_tet.end()) return;
    for (int t = it->second; t < it->second + 6; ++t) {
      Mat3 A = jacobian(t);
      const Vec3 lam = A.partialPivLu().solve(x - vertices[tets[t][0]]);
      Vec4 b(1.0 - lam.sum(), lam(0), lam(1), lam(2));
      const double viol = -b.minCoeff();
      if (viol < best_violation) {
        best_violation = viol;
        best_tet = t;
        best_bary = b;
      }
    }
  };
  consider_cube(ci, cj, ck);
  if (best_violation > 1e-12) {
    for (Index di = -1; di <= 1; ++di)
      for (Index dj = -1; dj <= 1; ++dj)
        for (Index dk = -1; dk <= 1; ++dk) consider_cube(ci + di, cj + dj, ck + dk);
  }
  require(best_tet >= 0, "TetMesh::locate: point outside band mesh");
  bary = best_bary;
  return best_tet;
}

}  // namespace surfstokes
