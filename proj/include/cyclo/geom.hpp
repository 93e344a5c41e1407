#ifndef CYCLO_GEOM_HPP_
#define CYCLO_GEOM_HPP_

// Attitude algebra shared by every mode.
//
// Conventions:
//   * World frame is x-east/forward, y-north/left, z-up. Body frame is
//     forward-left-up with thrust along +z.
//   * Euler angles are ZYX (yaw, then pitch, then roll); the rotation maps
//     body vectors into the world frame: R = Rz(yaw) * Ry(pitch) * Rx(roll).
//   * Quaternions are Hamilton, stored (w, x, y, z), and rotate body -> world.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cyclo/errors.hpp"

namespace cyclo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;

inline constexpr double kPi = std::numbers::pi;

/// |cos pitch| at or below this is treated as gimbal lock.
inline constexpr double kGimbalCosThreshold = 1e-6;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  bool finite() const { return std::isfinite(roll) && std::isfinite(pitch) && std::isfinite(yaw); }
};

/// Unit-norm Hamilton quaternion. Construction normalizes; a zero or
/// non-finite input is rejected.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  UnitQuaternion(double w, double x, double y, double z) : q_(w, x, y, z) { normalize(); }
  explicit UnitQuaternion(const Vec4& wxyz) : q_(wxyz) { normalize(); }

  static UnitQuaternion identity() { return {}; }

  double w() const { return q_[0]; }
  double x() const { return q_[1]; }
  double y() const { return q_[2]; }
  double z() const { return q_[3]; }
  const Vec4& coeffs() const { return q_; }

  /// Body -> world rotation matrix.
  Mat3 matrix() const { return matrix_of(q_); }

  Vec3 rotate(const Vec3& v) const { return matrix() * v; }

  UnitQuaternion operator*(const UnitQuaternion& o) const {
    const double w1 = w(), x1 = x(), y1 = y(), z1 = z();
    const double w2 = o.w(), x2 = o.x(), y2 = o.y(), z2 = o.z();
    return {w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2, w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2, w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2};
  }

  /// Rotation matrix of an arbitrary (not necessarily unit) 4-vector.
  /// Used by the dynamics, where RK4 stages see slightly de-normalized q.
  static Mat3 matrix_of(const Vec4& q) {
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
  }

 private:
  void normalize() {
    const double n = q_.norm();
    if (!std::isfinite(n) || n == 0.0) throw InvalidArgument("quaternion must be finite and non-zero");
    q_ /= n;
  }

  Vec4 q_{1.0, 0.0, 0.0, 0.0};
};

/// Orthonormal 3x3 matrix with det +1 (row-major semantics as written).
class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}
  explicit RotationMatrix(const Mat3& m) : m_(m) {}

  const Mat3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  Mat3 m_;
};

/// ZYX body -> world rotation.
inline RotationMatrix euler_to_rotation(const EulerAngles& e) {
  if (!e.finite()) throw InvalidArgument("euler_to_rotation: non-finite angle");
  const double cf = std::cos(e.roll), sf = std::sin(e.roll);
  const double ct = std::cos(e.pitch), st = std::sin(e.pitch);
  const double cp = std::cos(e.yaw), sp = std::sin(e.yaw);
  Mat3 m;
  m << cp * ct, cp * st * sf - sp * cf, cp * st * cf + sp * sf,
      sp * ct, sp * st * sf + cp * cf, sp * st * cf - cp * sf,
      -st, ct * sf, ct * cf;
  return RotationMatrix(m);
}

inline Vec3 body_to_world_velocity(const EulerAngles& e, const Vec3& v_body) {
  return euler_to_rotation(e) * v_body;
}

/// Euler-rate to body-rate map W(e); omega = W(e) * (roll', pitch', yaw').
inline Mat3 euler_rate_matrix(const EulerAngles& e) {
  const double cf = std::cos(e.roll), sf = std::sin(e.roll);
  const double ct = std::cos(e.pitch), st = std::sin(e.pitch);
  Mat3 w;
  w << 1, 0, -st,
      0, cf, sf * ct,
      0, -sf, cf * ct;
  return w;
}

inline Vec3 euler_rates_to_body_rates(const EulerAngles& e, const Vec3& rates) {
  return euler_rate_matrix(e) * rates;
}

inline Vec3 body_rates_to_euler_rates(const EulerAngles& e, const Vec3& omega) {
  const double ct = std::cos(e.pitch);
  if (std::abs(ct) <= kGimbalCosThreshold) throw GimbalSingularity(e.pitch);
  const double cf = std::cos(e.roll), sf = std::sin(e.roll);
  const double tt = std::tan(e.pitch);
  return {omega.x() + sf * tt * omega.y() + cf * tt * omega.z(),
          cf * omega.y() - sf * omega.z(),
          (sf * omega.y() + cf * omega.z()) / ct};
}

/// 4x4 matrix Lambda(omega) with q' = 1/2 * Lambda(omega) * q for body rates.
inline Eigen::Matrix4d omega_matrix(const Vec3& w) {
  Eigen::Matrix4d l;
  l << 0, -w.x(), -w.y(), -w.z(),
      w.x(), 0, w.z(), -w.y(),
      w.y(), -w.z(), 0, w.x(),
      w.z(), w.y(), -w.x(), 0;
  return l;
}

/// Time derivative of the attitude quaternion driven by body rates.
inline Vec4 quat_derivative(const Vec4& q, const Vec3& omega) {
  return 0.5 * omega_matrix(omega) * q;
}

inline Vec4 quat_derivative(const UnitQuaternion& q, const Vec3& omega) {
  return quat_derivative(q.coeffs(), omega);
}

inline UnitQuaternion euler_to_quat(const EulerAngles& e) {
  if (!e.finite()) throw InvalidArgument("euler_to_quat: non-finite angle");
  const double cr = std::cos(0.5 * e.roll), sr = std::sin(0.5 * e.roll);
  const double cp = std::cos(0.5 * e.pitch), sp = std::sin(0.5 * e.pitch);
  const double cy = std::cos(0.5 * e.yaw), sy = std::sin(0.5 * e.yaw);
  return {cr * cp * cy + sr * sp * sy, sr * cp * cy - cr * sp * sy,
          cr * sp * cy + sr * cp * sy, cr * cp * sy - sr * sp * cy};
}

struct EulerDecomposition {
  EulerAngles angles;
  /// Pitch is at +-pi/2; roll is reported 0 and folded into yaw.
  bool gimbal_locked = false;
};

inline EulerDecomposition quat_to_euler(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  const double s = std::clamp(2.0 * (w * y - z * x), -1.0, 1.0);
  EulerDecomposition out;
  if (std::sqrt(std::max(0.0, 1.0 - s * s)) <= kGimbalCosThreshold) {
    out.gimbal_locked = true;
    out.angles.pitch = std::copysign(kPi / 2, s);
    out.angles.roll = 0.0;
    out.angles.yaw = wrap_angle(2.0 * std::atan2(z, w));
    return out;
  }
  out.angles.roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
  out.angles.pitch = std::asin(s);
  out.angles.yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  return out;
}

/// Euler angles of a raw 4-vector (assumed unit) and their 3x4 Jacobian
/// with respect to (w, x, y, z). Away from gimbal lock only.
inline EulerAngles euler_with_jacobian(const Vec4& q, Eigen::Matrix<double, 3, 4>* jac) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];

  const double rn = 2.0 * (w * x + y * z), rd = 1.0 - 2.0 * (x * x + y * y);
  const double s = 2.0 * (w * y - z * x);
  const double yn = 2.0 * (w * z + x * y), yd = 1.0 - 2.0 * (y * y + z * z);

  EulerAngles e;
  e.roll = std::atan2(rn, rd);
  e.pitch = std::asin(std::clamp(s, -1.0, 1.0));
  e.yaw = std::atan2(yn, yd);

  if (jac) {
    // d atan2(n, d) = (d dn - n dd) / (n^2 + d^2)
    const Eigen::RowVector4d drn(2 * x, 2 * w, 2 * z, 2 * y);
    const Eigen::RowVector4d drd(0, -4 * x, -4 * y, 0);
    const Eigen::RowVector4d ds(2 * y, -2 * z, 2 * w, -2 * x);
    const Eigen::RowVector4d dyn(2 * z, 2 * y, 2 * x, 2 * w);
    const Eigen::RowVector4d dyd(0, 0, -4 * y, -4 * z);
    jac->row(0) = (rd * drn - rn * drd) / (rn * rn + rd * rd);
    jac->row(1) = ds / std::sqrt(std::max(1e-300, 1.0 - s * s));
    jac->row(2) = (yd * dyn - yn * dyd) / (yn * yn + yd * yd);
  }
  return e;
}

inline UnitQuaternion yaw_quat(double yaw) { return euler_to_quat({0.0, 0.0, yaw}); }

}  // namespace cyclo

#endif  // CYCLO_GEOM_HPP_
