#include "surfstokes/levelset.hpp"

namespace surfstokes {

// Damped Newton on the closest-point optimality system
//   y - x + mu * grad(y) = 0,  phi(y) = 0.
Vec3 LevelSet::closest_point(const Vec3& x) const {
  Vec3 y = x;
  double mu = value(x) / gradient(x).squaredNorm();
  auto res = [&](const Vec3& yy, double mm) {
    Eigen::Vector4d r;
    r.head<3>() = yy - x + mm * gradient(yy);
    r(3) = value(yy);
    return r;
  };
  Eigen::Vector4d r = res(y, mu);
  for (int it = 0; it < 100; ++it) {
    if (r.norm() <= 1e-13 * (1.0 + x.norm())) return y;
    Eigen::Matrix4d J;
    J.setZero();
    J.topLeftCorner<3, 3>() = Mat3::Identity() + mu * hessian(y);
    J.topRightCorner<3, 1>() = gradient(y);
    J.bottomLeftCorner<1, 3>() = gradient(y).transpose();
    Eigen::Vector4d step = J.fullPivLu().solve(-r);
    double t = 1.0;
    for (int back = 0; back < 30; ++back) {
      Eigen::Vector4d rt = res(y + t * step.head<3>(), mu + t * step(3));
      if (rt.norm() < r.norm()) {
        y += t * step.head<3>();
        mu += t * step(3);
        r = rt;
        break;
      }
      t *= 0.5;
      if (back == 29) throw std::runtime_error("closest_point: Newton stalled");
    }
  }
  throw std::runtime_error("closest_point: Newton did not converge");
}

std::unique_ptr<LevelSet> make_levelset(const std::string& name) {
  if (name == "sphere") return std::make_unique<SphereLevelSet>();
  if (name == "plane") return std::make_unique<PlaneLevelSet>();
  throw std::invalid_argument("unknown level set: " + name);
}

}  // namespace surfstokes
