#include "surfstokes/system.hpp"

namespace surfstokes {

namespace {

// gathers reference basis data of one space at the geometry points of a cell
struct CellBasis {
  MatX sval, sgrad;  // surface points: values, reference gradients
  MatX vval, vgrad;  // volume points
  void build(const LagrangeBasis& basis, const SurfaceGeometry& geom, int cell) {
    const auto [s0, s1] = geom.surf_range(cell);
    MatX bary(s1 - s0, 4);
    for (int q = s0; q < s1; ++q) bary.row(q - s0) = geom.spts[q].bary.transpose();
    basis.eval(bary, sval);
    basis.eval_grad(bary, sgrad);
    const auto [v0, v1] = geom.vol_range(cell);
    MatX vbary(v1 - v0, 4);
    for (int q = v0; q < v1; ++q) vbary.row(q - v0) = geom.vpts[q].bary.transpose();
    basis.eval(vbary, vval);
    basis.eval_grad(vbary, vgrad);
  }
};

std::vector<int> vector_dofs(const DofMap& dofs) {
  const int npc = dofs.nodes_per_cell;
  std::vector<int> out(static_cast<size_t>(dofs.n_cells()) * npc * 3);
  for (int c = 0; c < dofs.n_cells(); ++c)
    for (int a = 0; a < npc; ++a)
      for (int d = 0; d < 3; ++d) out[(c * npc + a) * 3 + d] = 3 * dofs.node(c, a) + d;
  return out;
}

std::vector<int> scalar_dofs(const DofMap& dofs) {
  const int npc = dofs.nodes_per_cell;
  std::vector<int> out(static_cast<size_t>(dofs.n_cells()) * npc);
  for (int c = 0; c < dofs.n_cells(); ++c)
    for (int a = 0; a < npc; ++a) out[c * npc + a] = dofs.node(c, a);
  return out;
}

}  // namespace

StokesSystem assemble(const TetMesh& mesh, const CutTopology& cut, const SurfaceGeometry& geom,
                      const DofMap& vel, const DofMap& pres, const FormParams& prm, Exec exec) {
  require(prm.mu > 0 || prm.c0 > 0, "assemble: invalid coefficients");
  require(prm.rho_u > 0 && prm.rho_p > 0 && prm.eta > 0, "assemble: invalid parameters");
  StokesSystem sys;
  sys.mesh = &mesh;
  sys.cut = &cut;
  sys.geom = &geom;
  sys.vel = vel;
  sys.pres = pres;
  sys.prm = prm;
  sys.h = mesh.h;

  const LagrangeBasis& vbasis = lagrange_basis(vel.degree);
  const LagrangeBasis& pbasis = lagrange_basis(pres.degree);
  const int nv = vbasis.count, np = pbasis.count;
  const int ncell = geom.n_cells;
  require(ncell == vel.n_cells() && ncell == pres.n_cells(),
          "assemble: dof maps and geometry disagree on the cut elements");

  const auto vdofs = vector_dofs(vel);
  const auto sdofs_v = scalar_dofs(vel);
  const auto sdofs_p = scalar_dofs(pres);

  // velocity-velocity sweep: strain, tang_mass, penalty, graddiv, Mu, vel_stab
  {
    auto plan = ScatterPlan::build(3 * vel.count, 3 * vel.count, ncell, 3 * nv, 3 * nv, vdofs,
                                   vdofs);
    auto fill = [&](int cell, std::vector<MatX>& blk) {
      MatX& m_strain = blk[0];
      MatX& m_tmass = blk[1];
      MatX& m_pen = blk[2];
      MatX& m_gdiv = blk[3];
      MatX& m_mu = blk[4];
      MatX& m_stab = blk[5];
      CellBasis cb;
      cb.build(vbasis, geom, cell);
      const auto [s0, s1] = geom.surf_range(cell);
      std::vector<Vec3> a(nv), Ha(nv);
      for (int q = s0; q < s1; ++q) {
        const SurfQPoint& pt = geom.spts[q];
        const double w = pt.w;
        const Vec3& n = pt.n_h;
        const Mat3 P = Mat3::Identity() - n * n.transpose();
        const Mat3 PH = P * pt.H;
        const double HH = pt.H.cwiseProduct(pt.H).sum();
        const double trH = pt.H.trace();
        const int lq = q - s0;
        for (int i = 0; i < nv; ++i) {
          const Vec3 g = pt.invJT * Vec3(cb.sgrad(lq, 3 * i), cb.sgrad(lq, 3 * i + 1),
                                         cb.sgrad(lq, 3 * i + 2));
          a[i] = P * g;
          Ha[i] = PH * a[i];
        }
        for (int i = 0; i < nv; ++i) {
          const double fi = cb.sval(lq, i);
          for (int j = 0; j < nv; ++j) {
            const double fj = cb.sval(lq, j);
            const double aij = a[i].dot(a[j]);
            const double fifj = fi * fj;
            for (int c = 0; c < 3; ++c) {
              const int row = 3 * i + c;
              for (int d = 0; d < 3; ++d) {
                const int col = 3 * j + d;
                const double strain = 0.5 * P(c, d) * aij + 0.5 * a[j](c) * a[i](d) -
                                      fj * n(d) * Ha[i](c) - fi * n(c) * Ha[j](d) +
                                      fifj * HH * n(c) * n(d);
                m_strain(row, col) += w * strain;
                m_tmass(row, col) += w * fifj * P(c, d);
                m_pen(row, col) += w * prm.eta * fifj * pt.n_tilde(c) * pt.n_tilde(d);
                const double tre_i = a[i](c) - fi * n(c) * trH;
                const double tre_j = a[j](d) - fj * n(d) * trH;
                m_gdiv(row, col) += w * tre_i * tre_j;
                if (c == d) m_mu(row, col) += w * fifj;
              }
            }
          }
        }
      }
      const auto [v0, v1] = geom.vol_range(cell);
      std::vector<Vec3> g(nv);
      for (int q = v0; q < v1; ++q) {
        const VolQPoint& pt = geom.vpts[q];
        const int lq = q - v0;
        for (int i = 0; i < nv; ++i)
          g[i] = pt.invJT * Vec3(cb.vgrad(lq, 3 * i), cb.vgrad(lq, 3 * i + 1),
                                 cb.vgrad(lq, 3 * i + 2));
        for (int i = 0; i < nv; ++i) {
          const double gni = g[i].dot(pt.n_h);
          for (int j = 0; j < nv; ++j) {
            const double s = prm.rho_u * gni * (g[j].dot(pt.n_h)) * pt.w;
            for (int c = 0; c < 3; ++c) m_stab(3 * i + c, 3 * j + c) += s;
          }
        }
      }
    };
    auto mats = plan.assemble_many(6, fill, exec);
    sys.strain = std::move(mats[0]);
    sys.tang_mass = std::move(mats[1]);
    sys.penalty = std::move(mats[2]);
    sys.graddiv = std::move(mats[3]);
    sys.Mu = std::move(mats[4]);
    sys.vel_stab = std::move(mats[5]);
  }

  // pressure-velocity sweep: B
  {
    auto plan = ScatterPlan::build(pres.count, 3 * vel.count, ncell, np, 3 * nv, sdofs_p, vdofs);
    auto fill = [&](int cell, MatX& blk) {
      CellBasis cbv, cbp;
      cbv.build(vbasis, geom, cell);
      cbp.build(pbasis, geom, cell);
      const auto [s0, s1] = geom.surf_range(cell);
      for (int q = s0; q < s1; ++q) {
        const SurfQPoint& pt = geom.spts[q];
        const Vec3& n = pt.n_h;
        const Mat3 P = Mat3::Identity() - n * n.transpose();
        const int lq = q - s0;
        for (int i = 0; i < np; ++i) {
          const Vec3 gp = P * (pt.invJT * Vec3(cbp.sgrad(lq, 3 * i), cbp.sgrad(lq, 3 * i + 1),
                                               cbp.sgrad(lq, 3 * i + 2)));
          for (int j = 0; j < nv; ++j) {
            const double fj = cbv.sval(lq, j);
            for (int d = 0; d < 3; ++d) blk(i, 3 * j + d) += pt.w * fj * gp(d);
          }
        }
      }
    };
    sys.B = plan.assemble(fill, exec);
  }

  // pressure-pressure sweep: Mp_surf, C
  {
    auto plan = ScatterPlan::build(pres.count, pres.count, ncell, np, np, sdofs_p, sdofs_p);
    auto fill = [&](int cell, std::vector<MatX>& blk) {
      MatX& m_mp = blk[0];
      MatX& m_c = blk[1];
      CellBasis cb;
      cb.build(pbasis, geom, cell);
      const auto [s0, s1] = geom.surf_range(cell);
      for (int q = s0; q < s1; ++q) {
        const int lq = q - s0;
        for (int i = 0; i < np; ++i)
          for (int j = 0; j < np; ++j)
            m_mp(i, j) += geom.spts[q].w * cb.sval(lq, i) * cb.sval(lq, j);
      }
      const auto [v0, v1] = geom.vol_range(cell);
      std::vector<double> gn(np);
      for (int q = v0; q < v1; ++q) {
        const VolQPoint& pt = geom.vpts[q];
        const int lq = q - v0;
        for (int i = 0; i < np; ++i)
          gn[i] = pt.n_h.dot(pt.invJT * Vec3(cb.vgrad(lq, 3 * i), cb.vgrad(lq, 3 * i + 1),
                                             cb.vgrad(lq, 3 * i + 2)));
        for (int i = 0; i < np; ++i)
          for (int j = 0; j < np; ++j) m_c(i, j) += prm.rho_p * pt.w * gn[i] * gn[j];
      }
    };
    auto mats = plan.assemble_many(2, fill, exec);
    sys.Mp_surf = std::move(mats[0]);
    sys.C = std::move(mats[1]);
  }

  sys.meanvec = assemble_vector(
      pres.count, ncell, np, sdofs_p,
      [&](int cell, VecX& blk) {
        CellBasis cb;
        cb.build(pbasis, geom, cell);
        const auto [s0, s1] = geom.surf_range(cell);
        for (int q = s0; q < s1; ++q)
          for (int i = 0; i < np; ++i) blk(i) += geom.spts[q].w * cb.sval(q - s0, i);
      },
      exec);

  sys.A = 2.0 * prm.mu * sys.strain + prm.c0 * sys.tang_mass + sys.penalty + sys.vel_stab;
  sys.Mp = sys.Mp_surf + sys.C;
  return sys;
}

SpMat assemble_convection(const StokesSystem& sys, const VecX& w, Exec exec) {
  const DofMap& vel = sys.vel;
  const SurfaceGeometry& geom = *sys.geom;
  const LagrangeBasis& vbasis = lagrange_basis(vel.degree);
  const int nv = vbasis.count;
  require(w.size() == sys.n_u(), "assemble_convection: wrong coefficient size");
  const auto vdofs = vector_dofs(vel);
  auto plan = ScatterPlan::build(sys.n_u(), sys.n_u(), geom.n_cells, 3 * nv, 3 * nv, vdofs, vdofs);
  auto fill = [&](int cell, MatX& blk) {
    CellBasis cb;
    cb.build(vbasis, geom, cell);
    const auto [s0, s1] = geom.surf_range(cell);
    std::vector<Vec3> a(nv);
    for (int q = s0; q < s1; ++q) {
      const SurfQPoint& pt = geom.spts[q];
      const Vec3& n = pt.n_h;
      const Mat3 P = Mat3::Identity() - n * n.transpose();
      const int lq = q - s0;
      Vec3 wpt = Vec3::Zero();
      for (int j = 0; j < nv; ++j) {
        const int nd = vel.node(cell, j);
        for (int d = 0; d < 3; ++d) wpt(d) += cb.sval(lq, j) * w(3 * nd + d);
        a[j] = P * (pt.invJT * Vec3(cb.sgrad(lq, 3 * j), cb.sgrad(lq, 3 * j + 1),
                                    cb.sgrad(lq, 3 * j + 2)));
      }
      for (int j = 0; j < nv; ++j) {
        const double aw = a[j].dot(wpt) * pt.w;
        for (int i = 0; i < nv; ++i) {
          const double fi = cb.sval(lq, i);
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) blk(3 * i + c, 3 * j + d) += fi * P(c, d) * aw;
        }
      }
    }
  };
  return plan.assemble(fill, exec);
}

VecX assemble_force(const SurfaceGeometry& geom, const DofMap& vel,
                    const std::function<Vec3(const Vec3&)>& f, Exec exec) {
  const LagrangeBasis& vbasis = lagrange_basis(vel.degree);
  const int nv = vbasis.count;
  const auto vdofs = vector_dofs(vel);
  return assemble_vector(
      3 * vel.count, geom.n_cells, 3 * nv, vdofs,
      [&](int cell, VecX& blk) {
        CellBasis cb;
        cb.build(vbasis, geom, cell);
        const auto [s0, s1] = geom.surf_range(cell);
        for (int q = s0; q < s1; ++q) {
          const Vec3 fq = f(geom.spts[q].phys);
          for (int i = 0; i < nv; ++i)
            for (int c = 0; c < 3; ++c)
              blk(3 * i + c) += geom.spts[q].w * cb.sval(q - s0, i) * fq(c);
        }
      },
      exec);
}

VecX assemble_source(const SurfaceGeometry& geom, const DofMap& pres,
                     const std::function<double(const Vec3&)>& g, Exec exec) {
  const LagrangeBasis& pbasis = lagrange_basis(pres.degree);
  const int np = pbasis.count;
  const auto sdofs = scalar_dofs(pres);

  // mean of g over Gamma_h, accumulated deterministically per cell
  std::vector<double> cell_int(geom.n_cells, 0.0);
  parallel_for(
      geom.n_cells,
      [&](Index cell) {
        const auto [s0, s1] = geom.surf_range(static_cast<int>(cell));
        for (int q = s0; q < s1; ++q) cell_int[cell] += geom.spts[q].w * g(geom.spts[q].phys);
      },
      exec);
  double total = 0;
  for (double v : cell_int) total += v;
  const double mean = total / geom.total_area;

  return assemble_vector(
      pres.count, geom.n_cells, np, sdofs,
      [&](int cell, VecX& blk) {
        CellBasis cb;
        cb.build(pbasis, geom, cell);
        const auto [s0, s1] = geom.surf_range(cell);
        for (int q = s0; q < s1; ++q) {
          const double gq = g(geom.spts[q].phys) - mean;
          for (int i = 0; i < np; ++i) blk(i) -= geom.spts[q].w * cb.sval(q - s0, i) * gq;
        }
      },
      exec);
}

// ---------------------------------------------------------------------------
// finite-difference tangential calculus oracle

namespace {
constexpr double kFdStep = 1e-4;
}

Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x) {
  Vec3 g;
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e(d) = kFdStep;
    g(d) = (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * kFdStep);
  }
  return g;
}

Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x) {
  Mat3 J;
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e(d) = kFdStep;
    J.col(d) = (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * kFdStep);
  }
  return J;
}

Mat3 ManufacturedCase::u_ext_jacobian(const Vec3& x) const {
  return fd_jacobian([this](const Vec3& y) { return u_ext(y); }, x);
}

Vec3 ManufacturedCase::p_ext_gradient(const Vec3& x) const {
  return fd_gradient([this](const Vec3& y) { return p_ext(y); }, x);
}

Vec3 ManufacturedCase::force(const Vec3& xq) const {
  const Vec3 x = ls->closest_point(xq);
  const Vec3 n = ls->unit_normal(x);
  const Mat3 P = Mat3::Identity() - n * n.transpose();
  // E extended along normals: E~(y) = E(p(y)) with E = sym(P grad(u o p) P)
  auto strain_ext = [this](const Vec3& y) {
    const Vec3 z = ls->closest_point(y);
    const Vec3 nz = ls->unit_normal(z);
    const Mat3 Pz = Mat3::Identity() - nz * nz.transpose();
    const Mat3 J = u_ext_jacobian(z);
    const Mat3 G = Pz * J * Pz;
    return Mat3(0.5 * (G + G.transpose()));
  };
  Mat3 dE[3];  // dE[d] = d/dx_d of E~
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e(d) = kFdStep;
    dE[d] = (-strain_ext(x + 2 * e) + 8 * strain_ext(x + e) - 8 * strain_ext(x - e) +
             strain_ext(x - 2 * e)) /
            (12 * kFdStep);
  }
  Vec3 divE;
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int j = 0; j < 3; ++j)
      for (int d = 0; d < 3; ++d) s += P(j, d) * dE[d](i, j);
    divE(i) = s;
  }
  return -P * divE + u(x) + P * p_ext_gradient(x);
}

double ManufacturedCase::source(const Vec3& xq) const {
  const Vec3 x = ls->closest_point(xq);
  const Vec3 n = ls->unit_normal(x);
  const Mat3 P = Mat3::Identity() - n * n.transpose();
  return (P * u_ext_jacobian(x)).trace();
}

ManufacturedCase make_manufactured(const LevelSet& phi, const std::string& name) {
  ManufacturedCase mc;
  mc.name = name;
  mc.ls = &phi;
  const LevelSet* ls = &phi;
  auto proj = [ls](const Vec3& x) {
    const Vec3 n = ls->unit_normal(x);
    return Mat3(Mat3::Identity() - n * n.transpose());
  };
  if (name == "killing") {
    mc.u = [proj](const Vec3& x) { return Vec3(proj(x) * Vec3(0, 0, 1).cross(x)); };
    mc.p = [](const Vec3& x) { return x(0) * x(1); };
  } else if (name == "harmonic2") {
    mc.u = [proj, ls](const Vec3& x) {
      const Vec3 gs = proj(x) * Vec3(x(1), x(0), 0);  // grad_G (x1 x2)
      return Vec3(ls->unit_normal(x).cross(gs));
    };
    mc.p = [](const Vec3& x) { return x(2); };
  } else if (name == "generic") {
    mc.u = [proj](const Vec3& x) {
      return Vec3(proj(x) * Vec3(-x(1) * x(1), x(0), x(2)));
    };
    mc.p = [](const Vec3& x) { return x(0) * x(0) * x(0) + x(1) * x(2); };
  } else {
    throw std::invalid_argument("make_manufactured: unknown case " + name);
  }
  return mc;
}

}  // namespace surfstokes
