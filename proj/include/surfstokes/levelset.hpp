#pragma once

#include <memory>

#include "surfstokes/common.hpp"

namespace surfstokes {

// Analytic level set: the surface is its zero set. Gradient and Hessian are
// exact; closest_point falls back to a damped Newton solve unless a closed
// form is available.
class LevelSet {
 public:
  virtual ~LevelSet() = default;
  virtual double value(const Vec3& x) const = 0;
  virtual Vec3 gradient(const Vec3& x) const = 0;
  virtual Mat3 hessian(const Vec3& x) const = 0;
  virtual bool is_closed_surface() const = 0;
  virtual std::string name() const = 0;
  virtual Vec3 closest_point(const Vec3& x) const;

  Vec3 unit_normal(const Vec3& x) const {
    Vec3 g = gradient(x);
    return g / g.norm();
  }
  // Weingarten map of the level set through x: P (hess/|grad|) P.
  Mat3 weingarten(const Vec3& x) const {
    const Vec3 n = unit_normal(x);
    const Mat3 P = Mat3::Identity() - n * n.transpose();
    return P * (hessian(x) / gradient(x).norm()) * P;
  }
};

class SphereLevelSet : public LevelSet {
 public:
  explicit SphereLevelSet(double radius = 1.0, const Vec3& center = Vec3::Zero())
      : radius_(radius), center_(center) {}
  double value(const Vec3& x) const override { return (x - center_).norm() - radius_; }
  Vec3 gradient(const Vec3& x) const override { return (x - center_).normalized(); }
  Mat3 hessian(const Vec3& x) const override {
    const Vec3 d = x - center_;
    const double r = d.norm();
    const Vec3 n = d / r;
    return (Mat3::Identity() - n * n.transpose()) / r;
  }
  bool is_closed_surface() const override { return true; }
  std::string name() const override { return "sphere"; }
  Vec3 closest_point(const Vec3& x) const override {
    return center_ + radius_ * (x - center_).normalized();
  }
  double radius() const { return radius_; }

 private:
  double radius_;
  Vec3 center_;
};

class PlaneLevelSet : public LevelSet {
 public:
  // phi(x) = n.x - offset, |n| = 1
  explicit PlaneLevelSet(const Vec3& normal = Vec3(0, 0, 1), double offset = 0.0)
      : normal_(normal.normalized()), offset_(offset) {}
  double value(const Vec3& x) const override { return normal_.dot(x) - offset_; }
  Vec3 gradient(const Vec3&) const override { return normal_; }
  Mat3 hessian(const Vec3&) const override { return Mat3::Zero(); }
  bool is_closed_surface() const override { return false; }
  std::string name() const override { return "plane"; }
  Vec3 closest_point(const Vec3& x) const override { return x - value(x) * normal_; }

 private:
  Vec3 normal_;
  double offset_;
};

std::unique_ptr<LevelSet> make_levelset(const std::string& name);

}  // namespace surfstokes
