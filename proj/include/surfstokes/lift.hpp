#pragma once

#include "surfstokes/cut.hpp"
#include "surfstokes/fespace.hpp"

namespace surfstokes {

enum class LiftMode { ExactLift, DiscreteLift };

// Degree-k mesh deformation Theta_h = id + displacement over the cut
// elements; displacement at each Lagrange node x is s * G(x) with
// G = grad(phi)/|grad(phi)| frozen at x and s solving
//   Phi(x + s G) = phi_hat(x)
// by safeguarded 1D Newton (Phi = analytic phi for ExactLift, the degree-k
// interpolant phi_k for DiscreteLift).
struct ParametricMap {
  int degree = 1;
  LiftMode mode = LiftMode::ExactLift;
  const TetMesh* mesh = nullptr;
  NodeTable nodes;                 // degree-k nodes over the cut elements
  std::vector<Vec3> displacement;  // per node
  double max_disp = 0;
  double max_disp_over_h2 = 0;

  int cell_of_tet(int tet) const;

  // Theta and its Jacobian w.r.t. reference coordinates of the cell
  void eval(int cell, const MatX& bary, MatX* theta_phys, std::vector<Mat3>* jac_ref) const;
  Vec3 theta(int tet, const Vec4& bary) const;
  bool is_identity() const { return max_disp == 0.0; }
};

ParametricMap build_theta(const TetMesh& mesh, const LevelSetBundle& bundle,
                          const CutTopology& cut, int k, LiftMode mode = LiftMode::ExactLift,
                          Exec exec = Exec::Parallel);

// Scalar Newton used for the node lifts, exposed for unit testing:
// solves f(s) = Phi(x + s G) - target = 0 on the bracket [-smax, smax].
double solve_lift(const std::function<double(double)>& f, const std::function<double(double)>& df,
                  double smax, double tol);

// Per-quadrature-point geometry of Gamma_h and Omega_Theta^Gamma.
struct SurfQPoint {
  Vec4 bary;     // reference point in the parent cell
  Vec3 phys;     // point on Gamma_h
  Vec3 n_h;      // discrete normal D Theta^{-T} n_lin (normalized)
  Vec3 n_tilde;  // high-accuracy normal from the provider
  Mat3 H;        // Weingarten approximation from the provider
  Mat3 invJT;    // (D Theta_ref)^{-T}, pushes reference gradients forward
  double w;      // quadrature weight including the surface measure
};

struct VolQPoint {
  Vec4 bary;
  Vec3 phys;
  Vec3 n_h;
  Mat3 invJT;
  double w;  // includes |det D Theta_ref|
};

struct GeometryProviders {
  std::function<Vec3(const Vec3&)> normal;
  std::function<Mat3(const Vec3&)> weingarten;
};

GeometryProviders exact_geometry_providers(const LevelSet& phi);
GeometryProviders discrete_geometry_providers(const TetMesh& mesh, const LevelSetBundle& bundle);

struct SurfaceGeometry {
  std::vector<SurfQPoint> spts;
  std::vector<int> s_offset;  // per cell, size n_cells+1
  std::vector<VolQPoint> vpts;
  std::vector<int> v_offset;
  std::vector<Vec3> n_lin;  // per cell
  double total_area = 0;
  double total_volume = 0;
  double min_det = 0;                 // min det(D Theta_phys) over volume points
  double max_measure_mismatch = 0;    // cross-product vs determinant route
  int n_cells = 0;

  auto surf_range(int cell) const {
    return std::pair<int, int>(s_offset[cell], s_offset[cell + 1]);
  }
  auto vol_range(int cell) const { return std::pair<int, int>(v_offset[cell], v_offset[cell + 1]); }
};

SurfaceGeometry surface_geometry(const TetMesh& mesh, const CutTopology& cut,
                                 const LevelSetBundle& bundle, const ParametricMap& map,
                                 const GeometryProviders& providers, const QuadRule& tri_quad,
                                 const QuadRule& tet_quad, Exec exec = Exec::Parallel);

}  // namespace surfstokes
