#ifndef CYCLO_ALLOCATION_HPP_
#define CYCLO_ALLOCATION_HPP_

// Control allocation between abstract commands and the four rotors + servo.
//
// Rotor layout (body frame, forward-left-up), arm length a:
//   1 front-left  (+a, +a)     2 front-right (+a, -a)
//   3 rear-left   (-a, +a)     4 rear-right  (-a, -a)
// The servo tilts the rear pair's thrust sideways. In the air a positive
// deflection d produces yaw torque a * (T3 + T4) * d (small-angle model).
// Rotor thrust is T = k_f * w * |w|.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cyclo/dynamics.hpp"
#include "cyclo/errors.hpp"
#include "cyclo/params.hpp"

namespace cyclo {

struct ActuatorCommand {
  std::array<double, 4> rotor{0.0, 0.0, 0.0, 0.0};  // rad/s, signed
  double servo = 0.0;                               // rad
};

struct Allocation {
  ActuatorCommand command;
  std::vector<std::string> clipped;  // empty when the request was feasible
};

inline constexpr std::array<double, 4> kRotorSideX{+1.0, +1.0, -1.0, -1.0};  // front = +1
inline constexpr std::array<double, 4> kRotorSideY{+1.0, -1.0, +1.0, -1.0};  // left = +1

/// Net thrust/torque produced by an actuator command in the air.
inline AerialInput forward_mix(const ActuatorCommand& cmd, const VehicleParams& p) {
  std::array<double, 4> t{};
  for (int i = 0; i < 4; ++i) t[i] = p.k_f * cmd.rotor[i] * std::abs(cmd.rotor[i]);
  AerialInput u;
  double total = 0.0, roll = 0.0, pitch = 0.0;
  for (int i = 0; i < 4; ++i) {
    total += t[i];
    roll += kRotorSideY[i] * t[i];
    pitch -= kRotorSideX[i] * t[i];
  }
  u.thrust = total / p.mass;
  u.torque = Vec3(p.arm * roll, p.arm * pitch, p.arm * (t[2] + t[3]) * cmd.servo);
  return u;
}

/// Inverse of forward_mix with clipping. Per-rotor thrust is the
/// minimum-norm split of (F, eta_x, eta_y); yaw goes to the servo.
inline Allocation allocate_clipped(const AerialInput& u, const VehicleParams& p) {
  if (!std::isfinite(u.thrust) || !u.torque.allFinite()) throw InvalidArgument("allocate: non-finite command");
  Allocation out;
  const double force = p.mass * u.thrust;
  std::array<double, 4> t{};
  for (int i = 0; i < 4; ++i)
    t[i] = 0.25 * force + kRotorSideY[i] * u.torque.x() / (4.0 * p.arm) -
           kRotorSideX[i] * u.torque.y() / (4.0 * p.arm);

  const double t_max = p.k_f * p.rotor_max * p.rotor_max;
  for (int i = 0; i < 4; ++i) {
    if (t[i] < 0.0) {
      out.clipped.push_back("rotor" + std::to_string(i + 1) + "_min");
      t[i] = 0.0;
    } else if (t[i] > t_max) {
      out.clipped.push_back("rotor" + std::to_string(i + 1) + "_max");
      t[i] = t_max;
    }
    out.command.rotor[i] = std::sqrt(t[i] / p.k_f);
  }

  const double rear = t[2] + t[3];
  double servo = 0.0;
  if (rear > 0.0) {
    servo = u.torque.z() / (p.arm * rear);
  } else if (u.torque.z() != 0.0) {
    servo = std::copysign(p.servo_max, u.torque.z());
    out.clipped.push_back("servo");
  }
  if (std::abs(servo) > p.servo_max) {
    if (out.clipped.empty() || out.clipped.back() != "servo") out.clipped.push_back("servo");
    servo = std::copysign(p.servo_max, servo);
  }
  out.command.servo = servo;
  return out;
}

/// Exact allocation; throws SaturationError naming every clipped channel.
inline ActuatorCommand allocate(const AerialInput& u, const VehicleParams& p) {
  Allocation a = allocate_clipped(u, p);
  if (!a.clipped.empty()) throw SaturationError(std::move(a.clipped));
  return a.command;
}

/// Ground: left rotors (1, 3) and right rotors (2, 4) roll as wheels.
inline ActuatorCommand terrestrial_command(const TerrestrialInput& u, const VehicleParams& p) {
  const double wl = u.left / p.wheel_radius, wr = u.right / p.wheel_radius;
  ActuatorCommand cmd;
  cmd.rotor = {wl, wr, wl, wr};
  return cmd;
}

/// Water: only the servo-carrying rear pair is driven.
inline ActuatorCommand aquatic_command(const AquaticInput& u, const VehicleParams& p) {
  const double w = u.speed * p.surge_gain();
  ActuatorCommand cmd;
  cmd.rotor = {0.0, 0.0, w, w};
  cmd.servo = u.steering;
  return cmd;
}

/// Clamp a ground/water command to the rotor and servo envelope.
inline Allocation clip_command(ActuatorCommand cmd, const VehicleParams& p) {
  Allocation out;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(cmd.rotor[i]) > p.rotor_max) {
      out.clipped.push_back("rotor" + std::to_string(i + 1) + (cmd.rotor[i] > 0 ? "_max" : "_min"));
      cmd.rotor[i] = std::copysign(p.rotor_max, cmd.rotor[i]);
    }
  }
  if (std::abs(cmd.servo) > p.servo_max) {
    out.clipped.push_back("servo");
    cmd.servo = std::copysign(p.servo_max, cmd.servo);
  }
  out.command = cmd;
  return out;
}

inline TerrestrialInput terrestrial_from_command(const ActuatorCommand& cmd, const VehicleParams& p) {
  return {0.5 * (cmd.rotor[0] + cmd.rotor[2]) * p.wheel_radius, 0.5 * (cmd.rotor[1] + cmd.rotor[3]) * p.wheel_radius};
}

inline AquaticInput aquatic_from_command(const ActuatorCommand& cmd, const VehicleParams& p) {
  return {0.5 * (cmd.rotor[2] + cmd.rotor[3]) / p.surge_gain(), cmd.servo};
}

}  // namespace cyclo

#endif  // CYCLO_ALLOCATION_HPP_
