#ifndef CYCLO_PID_HPP_
#define CYCLO_PID_HPP_

// Cascade PID: a position loop produces collective thrust and tilt
// references, an attitude loop turns Euler-angle errors into body torques.
// Controller state is an explicit value threaded through each call.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "cyclo/dynamics.hpp"
#include "cyclo/errors.hpp"
#include "cyclo/geom.hpp"

namespace cyclo {

struct PidTerm {
  double p = 0.0;
  double i = 0.0;
  double d = 0.0;

  bool valid() const {
    return std::isfinite(p) && std::isfinite(i) && std::isfinite(d) && p >= 0 && i >= 0 && d >= 0;
  }
};

enum Channel : int { kX = 0, kY, kZ, kRoll, kPitch, kYaw, kNumChannels };

struct PidGains {
  std::array<PidTerm, kNumChannels> channel{
      PidTerm{1.2, 0.02, 1.6}, PidTerm{1.2, 0.02, 1.6}, PidTerm{2.0, 0.01, 2.0},
      PidTerm{6.0, 0.05, 0.8}, PidTerm{6.0, 0.05, 0.8}, PidTerm{6.0, 0.05, 0.8}};
  double integral_limit = 1.0;  // |integral accumulator| bound, error units * s
  double tilt_max = kPi / 6;    // roll/pitch reference clamp, rad

  const PidTerm& operator[](Channel c) const { return channel[c]; }
  PidTerm& operator[](Channel c) { return channel[c]; }
};

struct PidChannelState {
  double integral = 0.0;
  double prev_error = 0.0;
  double prev_time = 0.0;
  bool primed = false;  // false until the first sample; derivative is 0 then
};

/// One discrete PID update: P on the error, rectangle-rule integral with a
/// symmetric clamp, backward-difference derivative.
inline std::pair<double, PidChannelState> pid_step(PidChannelState s, const PidTerm& k, double error, double dt,
                                                   double integral_limit) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("pid_step: dt must be > 0");
  s.integral = std::clamp(s.integral + error * dt, -integral_limit, integral_limit);
  const double derivative = s.primed ? (error - s.prev_error) / dt : 0.0;
  s.prev_error = error;
  s.prev_time += dt;
  s.primed = true;
  return {k.p * error + k.i * s.integral + k.d * derivative, s};
}

struct CascadePidState {
  std::array<PidChannelState, kNumChannels> channel{};
};

struct PositionCommand {
  double thrust = kGravity;  // c
  double roll_ref = 0.0;
  double pitch_ref = 0.0;
};

/// Outer loop. The z output adds to gravity; x/y outputs are rotated into
/// the heading frame and inverted with the small-angle map a = g * tilt.
inline PositionCommand position_loop(const Vec3& target, const VehicleState& s, const PidGains& g, double dt,
                                     CascadePidState& st, double gravity = kGravity) {
  const Vec3 e = target - s.position;
  std::array<double, 3> delta{};
  for (int a = 0; a < 3; ++a) {
    auto [out, next] = pid_step(st.channel[a], g.channel[a], e[a], dt, g.integral_limit);
    delta[a] = out;
    st.channel[a] = next;
  }
  const double yaw = s.euler().yaw;
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  PositionCommand cmd;
  cmd.thrust = gravity + delta[2];
  cmd.pitch_ref = std::clamp((delta[0] * cy + delta[1] * sy) / gravity, -g.tilt_max, g.tilt_max);
  cmd.roll_ref = std::clamp((delta[0] * sy - delta[1] * cy) / gravity, -g.tilt_max, g.tilt_max);
  return cmd;
}

/// Inner loop. Yaw error is wrapped to (-pi, pi] before the gains.
inline Vec3 attitude_loop(const EulerAngles& ref, const VehicleState& s, const PidGains& g, double dt,
                          CascadePidState& st) {
  const EulerAngles e = s.euler();
  const std::array<double, 3> err{ref.roll - e.roll, ref.pitch - e.pitch, wrap_angle(ref.yaw - e.yaw)};
  Vec3 torque;
  for (int a = 0; a < 3; ++a) {
    const int c = kRoll + a;
    auto [out, next] = pid_step(st.channel[c], g.channel[c], err[a], dt, g.integral_limit);
    torque[a] = out;
    st.channel[c] = next;
  }
  return torque;
}

/// Full cascade for one controller tick.
inline AerialInput cascade_pid(const Vec3& target, double yaw_ref, const VehicleState& s, const PidGains& g,
                               double dt, CascadePidState& st, double gravity = kGravity) {
  const PositionCommand pc = position_loop(target, s, g, dt, st, gravity);
  AerialInput u;
  u.thrust = std::max(0.0, pc.thrust);
  u.torque = attitude_loop({pc.roll_ref, pc.pitch_ref, yaw_ref}, s, g, dt, st);
  return u;
}

}  // namespace cyclo

#endif  // CYCLO_PID_HPP_
