#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace qstar {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed angle from `a` to `b` in (-pi, pi].
inline double signed_angle(const Vec2& a, const Vec2& b) { return std::atan2(cross(a, b), a.dot(b)); }

/// Counterclockwise angle from `a` to `b` in [0, 2pi).
inline double ccw_angle(const Vec2& a, const Vec2& b) {
  double t = signed_angle(a, b);
  return t < 0.0 ? t + kTwoPi : t;
}

/// Reduces `x` into [0, period).
inline double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, double* param = nullptr) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (param) *param = t;
  return (a + t * d - p).norm();
}

/// Orientation-preserving isometry of the plane: x -> R x + t.
struct Rigid2 {
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
  Vec2 translation = Vec2::Zero();

  Vec2 operator()(const Vec2& p) const { return rotation * p + translation; }
  Vec2 apply_vector(const Vec2& v) const { return rotation * v; }
  Rigid2 operator*(const Rigid2& o) const { return {rotation * o.rotation, rotation * o.translation + translation}; }
  Rigid2 inverse() const {
    Eigen::Matrix2d rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  static Rigid2 from_angle(double angle, const Vec2& t = Vec2::Zero()) {
    Rigid2 r;
    const double c = std::cos(angle), s = std::sin(angle);
    r.rotation << c, -s, s, c;
    r.translation = t;
    return r;
  }

  /// The rigid motion taking `from_a` to `to_a` and the direction of
  /// (from_b - from_a) onto the direction of (to_b - to_a).
  static Rigid2 aligning(const Vec2& from_a, const Vec2& from_b, const Vec2& to_a, const Vec2& to_b) {
    const Vec2 u = from_b - from_a;
    const Vec2 w = to_b - to_a;
    double c = u.dot(w), s = cross(u, w);
    const double n = std::hypot(c, s);
    c /= n;
    s /= n;
    Rigid2 r;
    r.rotation << c, -s, s, c;
    r.translation = to_a - r.rotation * from_a;
    return r;
  }
};

}  // namespace qstar
