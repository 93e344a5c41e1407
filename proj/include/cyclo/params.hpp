#ifndef CYCLO_PARAMS_HPP_
#define CYCLO_PARAMS_HPP_

#include <cmath>
#include <string>

#include "cyclo/errors.hpp"
#include "cyclo/geom.hpp"

namespace cyclo {

inline constexpr double kGravity = 9.81;

/// Physical and actuator parameters of the vehicle. Values are read-only once
/// a simulation starts.
struct VehicleParams {
  double mass = 0.75;             // kg
  Vec3 inertia{8e-3, 8e-3, 1.2e-2};  // diagonal, kg m^2
  double track_width = 0.40;      // left/right wheel spacing on the ground, m
  double wheelbase = 0.40;        // left/right rotor spacing on water, m
  double k_f = 1e-5;              // rotor thrust coefficient, N/(rad/s)^2
  double arm = 0.20;              // rotor offset from the centre of mass, m
  double rotor_max = 1200.0;      // rad/s
  double servo_max = kPi / 4;     // rad
  double wheel_radius = 0.05;     // rotor rim radius when rolling, m
  double water_drag = 2.0;        // quadratic surge drag, N/(m/s)^2
  double gravity = kGravity;      // m/s^2
  double dt = 1e-3;               // plant integration step, s

  /// Rear-rotor speed per unit surge speed: two rear rotors balance the
  /// quadratic hull drag, 2 k_f w^2 = d v^2.
  double surge_gain() const { return std::sqrt(water_drag / (2.0 * k_f)); }

  void validate() const {
    auto positive = [](double v, const char* key) {
      if (!(std::isfinite(v) && v > 0.0)) throw InvalidArgument(std::string("vehicle.") + key + " must be > 0");
    };
    positive(mass, "mass");
    positive(inertia.x(), "inertia_xx");
    positive(inertia.y(), "inertia_yy");
    positive(inertia.z(), "inertia_zz");
    positive(track_width, "track_width");
    positive(wheelbase, "wheelbase");
    positive(k_f, "k_f");
    positive(arm, "arm");
    positive(rotor_max, "rotor_max");
    positive(servo_max, "servo_max");
    positive(wheel_radius, "wheel_radius");
    positive(water_drag, "water_drag");
    positive(gravity, "gravity");
    if (!(dt > 0.0 && dt <= 0.05)) throw InvalidArgument("vehicle.dt must be in (0, 0.05]");
  }
};

}  // namespace cyclo

#endif  // CYCLO_PARAMS_HPP_
