#include "surfstokes/lift.hpp"

#include <algorithm>

namespace surfstokes {

int ParametricMap::cell_of_tet(int tet) const {
  const auto it = std::lower_bound(nodes.cells.begin(), nodes.cells.end(), tet);
  require(it != nodes.cells.end() && *it == tet, "ParametricMap: tet is not a cut element");
  return static_cast<int>(it - nodes.cells.begin());
}

void ParametricMap::eval(int cell, const MatX& bary, MatX* theta_phys,
                         std::vector<Mat3>* jac_ref) const {
  const LagrangeBasis& basis = lagrange_basis(degree);
  const int tet = nodes.cells[cell];
  const auto& T = mesh->tets[tet];
  const Vec3 v0 = mesh->vertices[T[0]];
  const Mat3 A = mesh->jacobian(tet);
  MatX vals, grads;
  basis.eval(bary, vals);
  if (jac_ref) basis.eval_grad(bary, grads);
  const int n = static_cast<int>(bary.rows());
  if (theta_phys) theta_phys->resize(n, 3);
  if (jac_ref) jac_ref->assign(n, Mat3::Zero());
  for (int q = 0; q < n; ++q) {
    Vec3 x = v0 + A * Vec3(bary(q, 1), bary(q, 2), bary(q, 3));
    Mat3 J = A;
    for (int a = 0; a < basis.count; ++a) {
      const Vec3& d = displacement[nodes.node(cell, a)];
      x += vals(q, a) * d;
      if (jac_ref) J += d * grads.block<1, 3>(q, 3 * a);
    }
    if (theta_phys) theta_phys->row(q) = x.transpose();
    if (jac_ref) (*jac_ref)[q] = J;
  }
}

Vec3 ParametricMap::theta(int tet, const Vec4& bary) const {
  MatX b(1, 4), out;
  b << bary(0), bary(1), bary(2), bary(3);
  eval(cell_of_tet(tet), b, &out, nullptr);
  return out.row(0).transpose();
}

double solve_lift(const std::function<double(double)>& f, const std::function<double(double)>& df,
                  double smax, double tol) {
  double s = 0.0;
  double fs = f(s);
  if (std::abs(fs) <= tol) return s;
  double lo = -smax, hi = smax;
  double flo = f(lo), fhi = f(hi);
  const bool bracketed = (flo <= 0 && fhi >= 0) || (flo >= 0 && fhi <= 0);
  if (bracketed && flo > fhi) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  for (int it = 0; it < 25; ++it) {
    double ds = -fs / df(s);
    double snew = s + ds;
    if (bracketed && (snew <= std::min(lo, hi) || snew >= std::max(lo, hi))) {
      snew = 0.5 * (lo + hi);  // bisection fallback
      ds = snew - s;
    }
    s = snew;
    fs = f(s);
    if (bracketed) {
      if (fs < 0)
        lo = s;
      else
        hi = s;
    }
    if (std::abs(fs) <= tol || std::abs(ds) <= tol) return s;
  }
  throw std::runtime_error("solve_lift: Newton did not converge in 25 iterations");
}

ParametricMap build_theta(const TetMesh& mesh, const LevelSetBundle& bundle,
                          const CutTopology& cut, int k, LiftMode mode, Exec exec) {
  require(bundle.degree >= k, "build_theta: bundle degree must be >= map degree");
  ParametricMap map;
  map.degree = k;
  map.mode = mode;
  map.mesh = &mesh;
  map.nodes = build_node_table(mesh, cut.active_tets, k);
  map.displacement.assign(map.nodes.count, Vec3::Zero());
  const LagrangeBasis& basis = lagrange_basis(k);
  const double smax = 2.0 * mesh.h;
  const double tol = 1e-13 * mesh.h;

  std::vector<double> disp_norm(map.nodes.count, 0.0);
  parallel_for(
      map.nodes.count,
      [&](Index nd) {
        const auto [cell, local] = map.nodes.owner[nd];
        const int tet = map.nodes.cells[cell];
        const Vec3 x = map.nodes.coords[nd];
        const double target = bundle.phi_hat(mesh, tet, basis.node_bary(local));
        const Vec3 G = bundle.phi->gradient(x).normalized();
        double s = 0;
        if (mode == LiftMode::ExactLift) {
          s = solve_lift([&](double t) { return bundle.phi->value(x + t * G) - target; },
                         [&](double t) { return bundle.phi->gradient(x + t * G).dot(G); }, smax,
                         tol);
        } else {
          auto fe_value = [&](double t) {
            const Vec3 y = x + t * G;
            Vec4 b;
            const int tt = mesh.locate(y, b);
            double v;
            bundle.phi_k_derivs(mesh, tt, b, &v, nullptr, nullptr);
            return v - target;
          };
          auto fe_slope = [&](double t) {
            const Vec3 y = x + t * G;
            Vec4 b;
            const int tt = mesh.locate(y, b);
            Vec3 g;
            bundle.phi_k_derivs(mesh, tt, b, nullptr, &g, nullptr);
            return g.dot(G);
          };
          s = solve_lift(fe_value, fe_slope, smax, tol);
        }
        map.displacement[nd] = s * G;
        disp_norm[nd] = std::abs(s);
      },
      exec);
  map.max_disp = disp_norm.empty() ? 0.0 : *std::max_element(disp_norm.begin(), disp_norm.end());
  map.max_disp_over_h2 = map.max_disp / (mesh.h * mesh.h);
  return map;
}

GeometryProviders exact_geometry_providers(const LevelSet& phi) {
  GeometryProviders p;
  p.normal = [&phi](const Vec3& x) { return phi.unit_normal(x); };
  p.weingarten = [&phi](const Vec3& x) { return phi.weingarten(x); };
  return p;
}

GeometryProviders discrete_geometry_providers(const TetMesh& mesh, const LevelSetBundle& bundle) {
  GeometryProviders p;
  p.normal = [&mesh, &bundle](const Vec3& x) {
    Vec4 b;
    const int tet = mesh.locate(x, b);
    Vec3 g;
    bundle.phi_k_derivs(mesh, tet, b, nullptr, &g, nullptr);
    return Vec3(g.normalized());
  };
  p.weingarten = [&mesh, &bundle](const Vec3& x) {
    Vec4 b;
    const int tet = mesh.locate(x, b);
    Vec3 g;
    Mat3 H;
    bundle.phi_k_derivs(mesh, tet, b, nullptr, &g, &H);
    const Vec3 n = g.normalized();
    const Mat3 P = Mat3::Identity() - n * n.transpose();
    return Mat3(P * (H / g.norm()) * P);
  };
  return p;
}

SurfaceGeometry surface_geometry(const TetMesh& mesh, const CutTopology& cut,
                                 const LevelSetBundle& bundle, const ParametricMap& map,
                                 const GeometryProviders& providers, const QuadRule& tri_quad,
                                 const QuadRule& tet_quad, Exec exec) {
  SurfaceGeometry g;
  g.n_cells = cut.n_active();
  g.n_lin.resize(g.n_cells);
  g.s_offset.resize(g.n_cells + 1);
  g.v_offset.resize(g.n_cells + 1);
  const int nvq = tet_quad.size();
  g.s_offset[0] = g.v_offset[0] = 0;
  for (int c = 0; c < g.n_cells; ++c) {
    const int ntri = cut.tri_offset[c + 1] - cut.tri_offset[c];
    g.s_offset[c + 1] = g.s_offset[c] + ntri * tri_quad.size();
    g.v_offset[c + 1] = g.v_offset[c] + nvq;
  }
  g.spts.resize(g.s_offset[g.n_cells]);
  g.vpts.resize(g.v_offset[g.n_cells]);

  std::vector<double> area(g.n_cells, 0.0), volume(g.n_cells, 0.0);
  std::vector<double> mindet(g.n_cells, 1e300), mismatch(g.n_cells, 0.0);

  parallel_for(
      g.n_cells,
      [&](Index ci) {
        const int cell = static_cast<int>(ci);
        const int tet = cut.tet_of_cell(cell);
        const Mat3 A = mesh.jacobian(tet);
        const double detA = A.determinant();
        // reference-coordinate gradient of phi_hat; points toward phi > 0
        const auto& T = mesh.tets[tet];
        const Vec3 dref(bundle.phi_lin[T[1]] - bundle.phi_lin[T[0]],
                        bundle.phi_lin[T[2]] - bundle.phi_lin[T[0]],
                        bundle.phi_lin[T[3]] - bundle.phi_lin[T[0]]);
        g.n_lin[cell] = (A.transpose().inverse() * dref).normalized();

        // surface points, one mapped triangle rule per cut triangle
        int sq = g.s_offset[cell];
        for (int ti = cut.tri_offset[cell]; ti < cut.tri_offset[cell + 1]; ++ti) {
          const auto& tri = cut.tris[ti];
          const Vec4 b0 = cut.points[tri.pts[0]].bary;
          const Vec4 b1 = cut.points[tri.pts[1]].bary;
          const Vec4 b2 = cut.points[tri.pts[2]].bary;
          MatX bary(tri_quad.size(), 4);
          for (int q = 0; q < tri_quad.size(); ++q)
            bary.row(q) = (tri_quad.points(q, 0) * b0 + tri_quad.points(q, 1) * b1 +
                           tri_quad.points(q, 2) * b2)
                              .transpose();
          MatX phys;
          std::vector<Mat3> jac;
          map.eval(cell, bary, &phys, &jac);
          const Vec3 e1 = (b1 - b0).segment<3>(1);  // reference-coordinate edges
          const Vec3 e2 = (b2 - b0).segment<3>(1);
          const Vec3 mref = e1.cross(e2);
          for (int q = 0; q < tri_quad.size(); ++q, ++sq) {
            SurfQPoint& p = g.spts[sq];
            p.bary = bary.row(q).transpose();
            p.phys = phys.row(q).transpose();
            const Mat3& J = jac[q];
            const double detJ = J.determinant();
            require(detJ > 0, "surface_geometry: det(D Theta) <= 0 at a surface point");
            p.invJT = J.inverse().transpose();
            const Vec3 Jm = p.invJT * mref;  // det identity: Je1 x Je2 = det(J) J^{-T} m
            const double j_cross = (J * e1).cross(J * e2).norm();
            const double j_det = detJ * Jm.norm();
            mismatch[cell] = std::max(mismatch[cell],
                                      std::abs(j_cross - j_det) / std::max(j_cross, 1e-300));
            p.w = tri_quad.weights(q) * j_cross;
            p.n_h = (p.invJT * dref).normalized();  // ~ D Theta_phys^{-T} n_lin
            p.n_tilde = providers.normal(p.phys);
            p.H = providers.weingarten(p.phys);
            area[cell] += p.w;
          }
        }

        // volume points on the deformed cell
        MatX phys;
        std::vector<Mat3> jac;
        map.eval(cell, tet_quad.points, &phys, &jac);
        for (int q = 0; q < nvq; ++q) {
          VolQPoint& p = g.vpts[g.v_offset[cell] + q];
          p.bary = tet_quad.points.row(q).transpose();
          p.phys = phys.row(q).transpose();
          const double detJ = jac[q].determinant();
          require(detJ > 0, "surface_geometry: det(D Theta) <= 0 at a volume point");
          mindet[cell] = std::min(mindet[cell], detJ / detA);
          p.invJT = jac[q].inverse().transpose();
          p.w = tet_quad.weights(q) * detJ;
          p.n_h = (p.invJT * dref).normalized();
          volume[cell] += p.w;
        }
      },
      exec);

  g.total_area = g.total_volume = 0;
  g.min_det = 1e300;
  for (int c = 0; c < g.n_cells; ++c) {
    g.total_area += area[c];
    g.total_volume += volume[c];
    g.min_det = std::min(g.min_det, mindet[c]);
    g.max_measure_mismatch = std::max(g.max_measure_mismatch, mismatch[c]);
  }
  return g;
}

}  // namespace surfstokes
