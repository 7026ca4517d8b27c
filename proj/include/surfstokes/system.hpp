#pragma once

#include "surfstokes/assembly.hpp"
#include "surfstokes/lift.hpp"

namespace surfstokes {

// Coefficients of the discrete forms. The strain term enters with 2*mu
// (steady Stokes: mu = 1/2, c0 = 1 reproduces E:E + tangential mass with
// unit coefficients); stabilization parameters default to
// rho_u = 1/h, rho_p = h, eta = 1/h^2.
struct FormParams {
  double mu = 0.5;
  double c0 = 1.0;
  double rho_u = -1;
  double rho_p = -1;
  double eta = -1;
  double gamma = 0.0;

  static FormParams with_defaults(double h, double mu = 0.5, double c0 = 1.0,
                                  double gamma = 0.0) {
    FormParams p;
    p.mu = mu;
    p.c0 = c0;
    p.gamma = gamma;
    p.rho_u = 1.0 / h;
    p.rho_p = h;
    p.eta = 1.0 / (h * h);
    return p;
  }
};

struct StokesSystem {
  const TetMesh* mesh = nullptr;
  const CutTopology* cut = nullptr;
  const SurfaceGeometry* geom = nullptr;
  DofMap vel, pres;
  FormParams prm;
  double h = 0;

  // velocity-space matrices (3 n_v, interleaved xyz)
  SpMat strain;     // int E_h(u):E_h(v)
  SpMat tang_mass;  // int P_h u . P_h v
  SpMat penalty;    // eta int (u.n~)(v.n~)
  SpMat vel_stab;   // rho_u int (grad u n_h).(grad v n_h) over the volume strip
  SpMat graddiv;    // int tr E_h(u) tr E_h(v)   (gamma applied by the caller)
  SpMat Mu;         // int u.v
  SpMat A;          // 2 mu strain + c0 tang_mass + penalty + vel_stab

  SpMat B;  // b_h: pressure rows x velocity cols
  SpMat C;  // rho_p int (n.grad p)(n.grad q)
  SpMat Mp_surf;
  SpMat Mp;     // Mp_surf + C, the pressure norm matrix
  VecX meanvec;  // m_i = int q_i ds_h

  int n_u() const { return 3 * vel.count; }
  int n_p() const { return pres.count; }
};

StokesSystem assemble(const TetMesh& mesh, const CutTopology& cut, const SurfaceGeometry& geom,
                      const DofMap& vel, const DofMap& pres, const FormParams& prm,
                      Exec exec = Exec::Parallel);

// Convection matrix N(w)[(i,c),(j,d)] = int ((P_h grad u P_h) w) . v ds_h
// for the FE velocity field w (coefficients on the same space).
SpMat assemble_convection(const StokesSystem& sys, const VecX& w, Exec exec = Exec::Parallel);

// Manufactured Stokes data on a closed surface. Velocity/pressure are given
// in closed form; force and source come from a finite-difference tangential
// calculus evaluation (4th order, step 1e-4) applied to the closest-point
// extensions, so no hand-derived right-hand sides enter.
struct ManufacturedCase {
  std::string name;
  const LevelSet* ls = nullptr;
  std::function<Vec3(const Vec3&)> u;       // tangential, defined on Gamma
  std::function<double(const Vec3&)> p;     // mean zero on Gamma

  Vec3 u_ext(const Vec3& x) const { return u(ls->closest_point(x)); }
  double p_ext(const Vec3& x) const { return p(ls->closest_point(x)); }
  Mat3 u_ext_jacobian(const Vec3& x) const;  // FD ambient Jacobian of u o p
  Vec3 p_ext_gradient(const Vec3& x) const;

  Vec3 force(const Vec3& x) const;    // f = -P div_G(E(u)) + u + grad_G p, extended by o p
  double source(const Vec3& x) const; // g = div_G u, extended by o p
};

ManufacturedCase make_manufactured(const LevelSet& phi, const std::string& name);

// Right-hand sides of (FEM): F_i = (f o p, v_i), Gv_i = (-(g o p - mean), q_i).
VecX assemble_force(const SurfaceGeometry& geom, const DofMap& vel,
                    const std::function<Vec3(const Vec3&)>& f, Exec exec = Exec::Parallel);
VecX assemble_source(const SurfaceGeometry& geom, const DofMap& pres,
                     const std::function<double(const Vec3&)>& g, Exec exec = Exec::Parallel);

// finite-difference helpers used by the oracle (exposed for tests)
Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x);
Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x);

}  // namespace surfstokes
