#pragma once

// Frame conventions
// -----------------
// The internal world frame is right-handed, Z-up. A device's local frame has
// +X forward, +Y left, +Z up, so the identity orientation looks along world +X
// and heading is measured counter-clockwise from world +X.
//
// Unity reports left-handed, Y-up, Z-forward, X-right coordinates. They enter
// through from_unity_vector / from_unity_rotation, the only place the axis
// permutation lives.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

#include "egotwin/types.hpp"

namespace egotwin {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the forward axis is (nearly) vertical and has no horizontal heading.
class HeadingUndefined : public DomainError {
 public:
  using DomainError::DomainError;
};

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

namespace detail {
template <typename Scalar>
constexpr Scalar kQuaternionNormTolerance = Scalar(1e-6);
template <typename Scalar>
constexpr Scalar kVerticalTolerance = Scalar(1e-6);
}  // namespace detail

/// Proper rotation R (world <- local). Construction checks orthonormality and det = +1.
template <typename Scalar>
class Rotation {
 public:
  Rotation() : m_(Matrix3<Scalar>::Identity()) {}

  explicit Rotation(const Matrix3<Scalar>& m, Scalar tol = Scalar(1e-9)) : m_(m) {
    if (!is_rotation(m, tol)) throw DomainError("matrix is not a proper rotation");
  }

  static bool is_rotation(const Matrix3<Scalar>& m, Scalar tol = Scalar(1e-9)) {
    if (!m.allFinite()) return false;
    const Matrix3<Scalar> gram = m.transpose() * m;
    if ((gram - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(m.determinant() - Scalar(1)) <= tol;
  }

  const Matrix3<Scalar>& matrix() const { return m_; }
  Rotation inverse() const { return Rotation(m_.transpose(), unchecked{}); }

  Vector3<Scalar> operator*(const Vector3<Scalar>& v) const { return m_ * v; }
  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_, unchecked{}); }

 private:
  struct unchecked {};
  Rotation(const Matrix3<Scalar>& m, unchecked) : m_(m) {}

  Matrix3<Scalar> m_;
};

using Rotationd = Rotation<double>;

/// Rotation matrix of a (near-)unit quaternion; the quaternion is renormalized first.
template <typename Scalar>
Rotation<Scalar> rotation_from_quaternion(const Eigen::Quaternion<Scalar>& q) {
  const Scalar n = q.norm();
  if (!std::isfinite(n) || n == Scalar(0)) throw DomainError("zero or non-finite quaternion");
  if (std::abs(n - Scalar(1)) > detail::kQuaternionNormTolerance<Scalar>) {
    throw DomainError("quaternion is not unit length");
  }
  const Eigen::Quaternion<Scalar> u(q.coeffs() / n);
  return Rotation<Scalar>(u.toRotationMatrix());
}

/// Yaw of the world-frame forward axis projected onto the horizontal plane.
template <typename Scalar>
Scalar heading_from_rotation(const Rotation<Scalar>& r) {
  const Vector3<Scalar> forward = r.matrix().col(0);
  const Scalar horizontal = std::hypot(forward.x(), forward.y());
  if (horizontal < detail::kVerticalTolerance<Scalar>) {
    throw HeadingUndefined("forward axis is vertical; heading undefined");
  }
  return wrap_angle(std::atan2(forward.y(), forward.x()));
}

template <typename Scalar>
Scalar heading_from_orientation(const Eigen::Quaternion<Scalar>& q) {
  return heading_from_rotation(rotation_from_quaternion(q));
}

/// World-aligned gaze g_world = R g_local.
template <typename Scalar>
Vector3<Scalar> gaze_to_world(const Rotation<Scalar>& r, const Vector3<Scalar>& g_local) {
  if (!g_local.allFinite() || std::abs(g_local.norm() - Scalar(1)) > Scalar(1e-9)) {
    throw DomainError("gaze direction is not a unit vector");
  }
  return r * g_local;
}

/// Yaw of a world-frame direction; throws HeadingUndefined for vertical vectors.
template <typename Scalar>
Scalar yaw_of(const Vector3<Scalar>& v) {
  if (std::hypot(v.x(), v.y()) < detail::kVerticalTolerance<Scalar>) {
    throw HeadingUndefined("direction is vertical; yaw undefined");
  }
  return wrap_angle(std::atan2(v.y(), v.x()));
}

/// Half-line r(lambda) = origin + lambda * direction, lambda >= 0.
template <typename Scalar>
struct GazeRay {
  Vector3<Scalar> origin = Vector3<Scalar>::Zero();
  Vector3<Scalar> direction = Vector3<Scalar>::UnitX();

  GazeRay() = default;
  GazeRay(const Vector3<Scalar>& o, const Vector3<Scalar>& d) : origin(o), direction(d) {
    if (!o.allFinite() || !d.allFinite() || std::abs(d.norm() - Scalar(1)) > Scalar(1e-9)) {
      throw DomainError("gaze ray needs a finite origin and a unit direction");
    }
  }
};

using GazeRayd = GazeRay<double>;

template <typename Scalar>
Vector3<Scalar> gaze_ray_point(const GazeRay<Scalar>& ray, Scalar lambda) {
  if (!(lambda >= Scalar(0))) throw DomainError("gaze ray parameter must be non-negative");
  return ray.origin + lambda * ray.direction;
}

/// Quaternion for a yaw (about +Z) followed by an intrinsic pitch (about the new +Y).
/// Positive pitch tips the forward axis down, matching the right-hand rule about +Y.
template <typename Scalar>
Eigen::Quaternion<Scalar> yaw_pitch_quaternion(Scalar yaw, Scalar pitch) {
  return Eigen::Quaternion<Scalar>(Eigen::AngleAxis<Scalar>(yaw, Vector3<Scalar>::UnitZ()) *
                                   Eigen::AngleAxis<Scalar>(pitch, Vector3<Scalar>::UnitY()));
}

/// Unity (x right, y up, z forward; left-handed) -> internal (x forward, y left, z up).
template <typename Scalar>
Matrix3<Scalar> unity_axis_permutation() {
  Matrix3<Scalar> p;
  p << 0, 0, 1,
      -1, 0, 0,
       0, 1, 0;
  return p;
}

template <typename Scalar>
Vector3<Scalar> from_unity_vector(const Vector3<Scalar>& v) {
  return unity_axis_permutation<Scalar>() * v;
}

/// Re-expresses a Unity world<-local rotation in the internal frame. The
/// permutation has det -1, so conjugating by it yields a proper rotation.
template <typename Scalar>
Rotation<Scalar> from_unity_rotation(const Matrix3<Scalar>& unity) {
  const Matrix3<Scalar> p = unity_axis_permutation<Scalar>();
  return Rotation<Scalar>(p * unity * p.transpose());
}

/// Planar rigid transform helpers used for body-frame features.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> planar_rotation(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  Eigen::Matrix<Scalar, 2, 2> r;
  r << c, -s, s, c;
  return r;
}

}  // namespace egotwin
