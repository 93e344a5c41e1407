#ifndef CYCLO_DYNAMICS_HPP_
#define CYCLO_DYNAMICS_HPP_

// Per-medium plant models and the fixed-step integrator.

#include <Eigen/Core>

#include <cmath>
#include <vector>

#include "cyclo/errors.hpp"
#include "cyclo/geom.hpp"
#include "cyclo/params.hpp"

namespace cyclo {

/// Packed aerial state: p(0..2) v(3..5) q(6..9, w x y z) omega(10..12).
using AerialVector = Eigen::Matrix<double, 13, 1>;
/// Packed aerial input: mass-normalized collective thrust c, then eta.
using InputVector = Eigen::Vector4d;
/// Planar pose (x, y, heading).
using Pose2 = Eigen::Vector3d;

struct VehicleState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  UnitQuaternion attitude;
  Vec3 body_rates = Vec3::Zero();

  bool finite() const {
    return position.allFinite() && velocity.allFinite() && attitude.coeffs().allFinite() &&
           body_rates.allFinite();
  }

  AerialVector pack() const {
    AerialVector x;
    x << position, velocity, attitude.coeffs(), body_rates;
    return x;
  }

  static VehicleState unpack(const AerialVector& x) {
    VehicleState s;
    s.position = x.segment<3>(0);
    s.velocity = x.segment<3>(3);
    s.attitude = UnitQuaternion(Vec4(x.segment<4>(6)));
    s.body_rates = x.segment<3>(10);
    return s;
  }

  EulerAngles euler() const { return quat_to_euler(attitude).angles; }

  Pose2 pose() const { return {position.x(), position.y(), euler().yaw}; }
};

struct AerialInput {
  double thrust = 0.0;          // c, m/s^2 along body z
  Vec3 torque = Vec3::Zero();   // eta, N m

  InputVector pack() const { return {thrust, torque.x(), torque.y(), torque.z()}; }
  static AerialInput unpack(const InputVector& u) { return {u[0], u.tail<3>()}; }
};

struct TerrestrialInput {
  double left = 0.0;   // v_L, m/s
  double right = 0.0;  // v_R, m/s
};

struct AquaticInput {
  double speed = 0.0;     // surge v, m/s
  double steering = 0.0;  // phi_s, rad
};

inline AerialVector aerial_derivative(const AerialVector& x, const InputVector& u, const VehicleParams& p) {
  const Vec4 q = x.segment<4>(6);
  const Vec3 w = x.segment<3>(10);
  const Vec3& j = p.inertia;

  AerialVector dx;
  dx.segment<3>(0) = x.segment<3>(3);
  dx.segment<3>(3) = UnitQuaternion::matrix_of(q).col(2) * u[0] - Vec3(0, 0, p.gravity);
  dx.segment<4>(6) = quat_derivative(q, w);
  const Vec3 jw = j.cwiseProduct(w);
  dx.segment<3>(10) = (u.tail<3>() - w.cross(jw)).cwiseQuotient(j);
  return dx;
}

/// Newton-Euler rigid-body derivative for the flying vehicle.
inline AerialVector aerial_derivative(const VehicleState& s, const AerialInput& u, const VehicleParams& p) {
  if (!s.finite() || !std::isfinite(u.thrust) || !u.torque.allFinite())
    throw InvalidArgument("aerial_derivative: non-finite state or input");
  return aerial_derivative(s.pack(), u.pack(), p);
}

using AerialStateJacobian = Eigen::Matrix<double, 13, 13>;
using AerialInputJacobian = Eigen::Matrix<double, 13, 4>;

/// Analytic Jacobians of aerial_derivative with respect to state and input.
inline void aerial_jacobians(const AerialVector& x, const InputVector& u, const VehicleParams& p,
                             AerialStateJacobian& fx, AerialInputJacobian& fu) {
  const double qw = x[6], qx = x[7], qy = x[8], qz = x[9];
  const Vec3 w = x.segment<3>(10);
  const Vec3& j = p.inertia;
  const double c = u[0];

  fx.setZero();
  fu.setZero();

  fx.block<3, 3>(0, 3).setIdentity();

  // v' = c * R(q) e3, R(q) e3 = [2(xz + wy), 2(yz - wx), 1 - 2(x^2 + y^2)]
  Eigen::Matrix<double, 3, 4> dr;
  dr << 2 * qy, 2 * qz, 2 * qw, 2 * qx,
      -2 * qx, -2 * qw, 2 * qz, 2 * qy,
      0, -4 * qx, -4 * qy, 0;
  fx.block<3, 4>(3, 6) = c * dr;
  fu.block<3, 1>(3, 0) = Vec3(2 * (qx * qz + qw * qy), 2 * (qy * qz - qw * qx), 1 - 2 * (qx * qx + qy * qy));

  // q' = 1/2 Lambda(w) q = 1/2 Xi(q) w
  fx.block<4, 4>(6, 6) = 0.5 * omega_matrix(w);
  Eigen::Matrix<double, 4, 3> xi;
  xi << -qx, -qy, -qz,
      qw, -qz, qy,
      qz, qw, -qx,
      -qy, qx, qw;
  fx.block<4, 3>(6, 10) = 0.5 * xi;

  // w' = J^-1 (eta - w x Jw)
  auto skew = [](const Vec3& a) {
    Mat3 s;
    s << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
    return s;
  };
  const Mat3 jm = j.asDiagonal();
  const Mat3 jinv = j.cwiseInverse().asDiagonal();
  fx.block<3, 3>(10, 10) = -jinv * (skew(w) * jm - skew(jm * w));
  fu.block<3, 3>(10, 1) = jinv;
}

/// Differential drive on the ground: four wheels, same-side speeds equal.
inline Pose2 terrestrial_derivative(const Pose2& pose, const TerrestrialInput& u, const VehicleParams& p) {
  const double v = 0.5 * (u.right + u.left);
  return {v * std::cos(pose[2]), v * std::sin(pose[2]), (u.right - u.left) / p.track_width};
}

/// Steering model on water.
inline Pose2 aquatic_derivative(const Pose2& pose, const AquaticInput& u, const VehicleParams& p) {
  if (!(std::abs(u.steering) < kPi / 2)) throw InvalidArgument("aquatic_derivative: |steering| must be < pi/2");
  return {u.speed * std::cos(pose[2]), u.speed * std::sin(pose[2]), u.speed / p.wheelbase * std::tan(u.steering)};
}

namespace detail {
template <class V>
std::vector<double> to_vector(const V& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}
}  // namespace detail

/// One classical Runge-Kutta step with the input held constant.
/// `f(x, u)` must return a value of the same shape as `x`.
template <class X, class U, class F>
X step_rk4(F&& f, const X& x, const U& u, double dt) {
  if (!(dt > 0.0 && dt <= 0.05)) throw InvalidArgument("step_rk4: dt must be in (0, 0.05]");
  const X k1 = f(x, u);
  const X k2 = f(X(x + 0.5 * dt * k1), u);
  const X k3 = f(X(x + 0.5 * dt * k2), u);
  const X k4 = f(X(x + dt * k3), u);
  X next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw DivergenceError("step_rk4: non-finite state", detail::to_vector(x));
  return next;
}

/// Aerial RK4 step with quaternion renormalization.
inline AerialVector step_aerial(const AerialVector& x, const InputVector& u, const VehicleParams& p, double dt) {
  AerialVector next = step_rk4(
      [&p](const AerialVector& s, const InputVector& in) { return aerial_derivative(s, in, p); }, x, u, dt);
  next.segment<4>(6).normalize();
  return next;
}

inline VehicleState step_aerial(const VehicleState& s, const AerialInput& u, const VehicleParams& p, double dt) {
  return VehicleState::unpack(step_aerial(s.pack(), u.pack(), p, dt));
}

/// Aerial RK4 step plus the Jacobians of the (normalized) step map.
inline AerialVector step_aerial_with_jacobians(const AerialVector& x, const InputVector& u, const VehicleParams& p,
                                               double dt, AerialStateJacobian& ax, AerialInputJacobian& bu) {
  AerialStateJacobian f1x, f2x, f3x, f4x;
  AerialInputJacobian f1u, f2u, f3u, f4u;
  const AerialStateJacobian eye = AerialStateJacobian::Identity();

  const AerialVector k1 = aerial_derivative(x, u, p);
  aerial_jacobians(x, u, p, f1x, f1u);
  const AerialVector x2 = x + 0.5 * dt * k1;
  const AerialVector k2 = aerial_derivative(x2, u, p);
  aerial_jacobians(x2, u, p, f2x, f2u);
  const AerialVector x3 = x + 0.5 * dt * k2;
  const AerialVector k3 = aerial_derivative(x3, u, p);
  aerial_jacobians(x3, u, p, f3x, f3u);
  const AerialVector x4 = x + dt * k3;
  const AerialVector k4 = aerial_derivative(x4, u, p);
  aerial_jacobians(x4, u, p, f4x, f4u);

  const AerialStateJacobian k1x = f1x;
  const AerialInputJacobian k1u = f1u;
  const AerialStateJacobian k2x = f2x * (eye + 0.5 * dt * k1x);
  const AerialInputJacobian k2u = f2x * (0.5 * dt * k1u) + f2u;
  const AerialStateJacobian k3x = f3x * (eye + 0.5 * dt * k2x);
  const AerialInputJacobian k3u = f3x * (0.5 * dt * k2u) + f3u;
  const AerialStateJacobian k4x = f4x * (eye + dt * k3x);
  const AerialInputJacobian k4u = f4x * (dt * k3u) + f4u;

  AerialVector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw DivergenceError("step_rk4: non-finite state", detail::to_vector(x));
  ax = eye + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  bu = (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);

  // Normalization q -> q / |q| has Jacobian (I - n n^T) / |q|.
  const Vec4 q = next.segment<4>(6);
  const double nq = q.norm();
  const Vec4 n = q / nq;
  const Eigen::Matrix4d dn = (Eigen::Matrix4d::Identity() - n * n.transpose()) / nq;
  ax.middleRows<4>(6) = (dn * ax.middleRows<4>(6)).eval();
  bu.middleRows<4>(6) = (dn * bu.middleRows<4>(6)).eval();
  next.segment<4>(6) = n;
  return next;
}

}  // namespace cyclo

#endif  // CYCLO_DYNAMICS_HPP_
