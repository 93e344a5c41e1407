#ifndef CYCLO_SIM_HPP_
#define CYCLO_SIM_HPP_

// Closed-loop mission runner. The plant integrates at vehicle.dt, the
// controllers and the FSM guards run every controller period, and the NMPC
// re-solves every nmpc.period. One log row is written per controller tick.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cyclo/allocation.hpp"
#include "cyclo/dynamics.hpp"
#include "cyclo/errors.hpp"
#include "cyclo/fsm.hpp"
#include "cyclo/mission.hpp"
#include "cyclo/nmpc.hpp"
#include "cyclo/params.hpp"
#include "cyclo/pid.hpp"
#include "cyclo/reference.hpp"

namespace cyclo {

/// Speed/heading loop shared by the wheel and water modes.
struct SurfaceGains {
  double speed = 1.0;       // along-track error -> speed, 1/s
  double heading = 2.0;     // heading error -> yaw rate, 1/s
  double crosstrack = 0.5;  // cross-track error -> heading offset, 1/m
  double min_water_speed = 0.2;  // keep steerage way while turning, m/s

  void validate() const {
    if (!(speed > 0 && heading > 0 && crosstrack >= 0 && min_water_speed > 0) ||
        !std::isfinite(speed + heading + crosstrack + min_water_speed))
      throw InvalidArgument("surface gains must be finite and positive");
  }
};

struct SimSettings {
  CruiseSpeeds cruise;
  double controller_period = 0.01;  // s
  double arrival_radius = 0.5;      // m
  double time_limit = 600.0;        // simulated s
  double gear_delay = 1.0;          // s to reconfigure gear before a medium change
  double hover_radius = 0.3;        // HoverStable: distance, m
  double hover_speed = 0.1;         // HoverStable: speed, m/s
  double hover_time = 0.5;          // HoverStable: dwell, s
  double touchdown_height = 0.05;   // m above the surface
  double touchdown_speed = 0.2;     // max descent rate, m/s

  void validate() const {
    cruise.validate();
    const double all[] = {controller_period, arrival_radius, time_limit, hover_radius,
                          hover_speed,       hover_time,     touchdown_height, touchdown_speed};
    for (double v : all)
      if (!(v > 0) || !std::isfinite(v)) throw InvalidArgument("sim settings must be finite and > 0");
    if (!(gear_delay >= 0) || !std::isfinite(gear_delay)) throw InvalidArgument("sim.gear_delay must be >= 0");
  }
};

struct SimConfig {
  VehicleParams vehicle;
  PidGains pid;
  NmpcConfig nmpc;
  SurfaceGains surface;
  SimSettings sim;

  int plant_ticks_per_control() const { return static_cast<int>(std::lround(sim.controller_period / vehicle.dt)); }
  int control_ticks_per_solve() const { return static_cast<int>(std::lround(nmpc.period / sim.controller_period)); }

  void validate() const {
    vehicle.validate();
    nmpc.validate();
    surface.validate();
    sim.validate();
    for (const auto& c : pid.channel)
      if (!c.valid()) throw InvalidArgument("pid gains must be finite and >= 0");
    if (!(pid.integral_limit > 0) || !(pid.tilt_max > 0 && pid.tilt_max < kPi / 2))
      throw InvalidArgument("pid.integral_limit must be > 0 and pid.tilt_max in (0, pi/2)");
    const auto multiple = [](double a, double b) {
      const double r = a / b;
      return std::lround(r) >= 1 && std::abs(r - std::lround(r)) < 1e-9;
    };
    if (!multiple(sim.controller_period, vehicle.dt))
      throw InvalidArgument("sim.controller_period must be a whole multiple of vehicle.dt");
    if (!multiple(nmpc.period, sim.controller_period))
      throw InvalidArgument("nmpc.period must be a whole multiple of sim.controller_period");
  }
};

enum class ControllerKind { kPid, kNmpc };

inline std::string_view to_string(ControllerKind c) { return c == ControllerKind::kPid ? "pid" : "nmpc"; }

struct LogRow {
  double t = 0.0;
  ModeState mode;
  int segment = -1;
  VehicleState state;
  Vec4 ref = Vec4::Zero();  // x, y, z, yaw
  AerialInput input;        // zero outside the aerial mode
  ActuatorCommand actuator;
  double cost = 0.0;  // NMPC only
  int iters = 0;
};

struct TransitionRecord {
  double t = 0.0;
  ModeState from;
  TransitionEvent event;
  ModeState to;
  bool accepted = true;
};

struct SegmentRecord {
  int index = 0;
  double start = 0.0;
  double end = 0.0;
  Vec3 from = Vec3::Zero();
  Vec3 target = Vec3::Zero();
  bool completed = false;
  double arrival_error = 0.0;
};

enum class RunStatus { kCompleted, kTimeLimit, kDiverged };

struct RunLog {
  double tick = 0.01;
  ControllerKind controller = ControllerKind::kPid;
  std::vector<LogRow> rows;
  std::vector<TransitionRecord> transitions;
  std::vector<SegmentRecord> segments;
  std::vector<std::string> warnings;
  RunStatus status = RunStatus::kCompleted;
  std::string message;
  int solver_fallbacks = 0;

  bool ok() const { return status == RunStatus::kCompleted; }
  double end_time() const { return rows.empty() ? 0.0 : rows.back().t; }
};

namespace detail {

inline VehicleState surface_state(const Pose2& pose, double speed, double yaw_rate) {
  VehicleState s;
  s.position = {pose[0], pose[1], 0.0};
  s.velocity = {speed * std::cos(pose[2]), speed * std::sin(pose[2]), 0.0};
  s.attitude = yaw_quat(wrap_angle(pose[2]));
  s.body_rates = {0.0, 0.0, yaw_rate};
  return s;
}

/// Speed and yaw-rate demand for a planar vehicle following a path reference.
struct SurfaceDemand {
  double speed = 0.0;
  double yaw_rate = 0.0;
};

inline SurfaceDemand surface_demand(const Reference& ref, const Vec3& target, const Pose2& pose,
                                    const SurfaceGains& g, double arrival_radius) {
  const Eigen::Vector2d p(pose[0], pose[1]);
  const Eigen::Vector2d v_ff = ref.velocity.head<2>();
  const Eigen::Vector2d e = ref.position.head<2>() - p;
  SurfaceDemand d;
  double heading;
  if (v_ff.norm() > 1e-9) {
    const Eigen::Vector2d t = v_ff.normalized();
    const Eigen::Vector2d n(-t.y(), t.x());
    heading = std::atan2(t.y(), t.x()) + std::atan(g.crosstrack * e.dot(n));
    d.speed = v_ff.norm() + g.speed * e.dot(t);
  } else {
    // Path finished: close the remaining gap to the target directly.
    const Eigen::Vector2d to = target.head<2>() - p;
    if (to.norm() < 0.2 * arrival_radius) return d;
    heading = std::atan2(to.y(), to.x());
    d.speed = g.speed * to.norm();
  }
  const double err = wrap_angle(heading - pose[2]);
  d.speed = std::max(0.0, d.speed * std::cos(err));
  d.yaw_rate = g.heading * err;
  return d;
}

}  // namespace detail

/// Runs a mission to completion, time limit or divergence. Never throws for
/// in-run failures; they end up in RunLog::status.
inline RunLog run(const SimConfig& cfg, const Mission& mission, ControllerKind controller) {
  cfg.validate();
  if (auto issue = check_mission(mission)) throw InvalidArgument("mission " + describe(*issue));

  const VehicleParams& p = cfg.vehicle;
  const SimSettings& ss = cfg.sim;
  const int plant_per_ctrl = cfg.plant_ticks_per_control();
  const int ctrl_per_solve = cfg.control_ticks_per_solve();
  const double ctrl_dt = plant_per_ctrl * p.dt;

  RunLog log;
  log.tick = ctrl_dt;
  log.controller = controller;

  ModeState mode = start_state(mission);
  VehicleState s;
  s.position = mission.start;

  // Plant inputs held between controller ticks.
  AerialInput u_aerial{p.gravity, Vec3::Zero()};
  TerrestrialInput u_ground;
  AquaticInput u_water;
  ActuatorCommand actuator;
  double last_cost = 0.0;
  int last_iters = 0;

  CascadePidState pid_state;
  NmpcControllerState nmpc_state;

  const auto reject = [&](const ModeState& from, const TransitionEvent& e) {
    log.warnings.push_back("rejected " + to_string(e) + " in " + to_string(from));
  };

  const int n_seg = static_cast<int>(mission.segments.size());
  long k = 0;  // controller tick index
  const auto now = [&] { return k * ctrl_dt; };

  const auto fire = [&](const TransitionEvent& e) {
    const ModeState next = step_fsm(mode, e, reject);
    log.transitions.push_back({now(), mode, e, next, next != mode});
    if (next.medium != mode.medium) {
      // Medium change: settle into the new configuration at rest.
      s = detail::surface_state(s.pose(), 0.0, 0.0);
      pid_state = {};
      nmpc_state = {};
      u_aerial = {0.0, Vec3::Zero()};
      u_ground = {};
      u_water = {};
    }
    mode = next;
  };

  auto log_row = [&](int seg, const Reference& ref) {
    LogRow r;
    r.t = now();
    r.mode = mode;
    r.segment = seg;
    r.state = s;
    r.ref = {ref.position.x(), ref.position.y(), ref.position.z(), ref.yaw};
    if (mode.medium == Medium::kAerial) r.input = u_aerial;
    else r.input = {0.0, Vec3::Zero()};
    r.actuator = actuator;
    r.cost = last_cost;
    r.iters = last_iters;
    log.rows.push_back(r);
  };

  if (n_seg == 0) {
    log_row(-1, Reference{mission.start, 0.0, Vec3::Zero()});
    return log;
  }

  // Active segment bookkeeping.
  int seg = -1;
  SegmentPath path;
  SegmentPlan plan;
  std::size_t entry_done = 0;
  double entry_t0 = 0.0;  // when the segment was entered
  double ref_t0 = 0.0;    // when the reference clock started
  bool ref_running = false;
  double stable_since = -1.0;
  Vec3 prev_end = mission.start;
  double prev_yaw = 0.0;
  double prev_z = mission.start.z();

  const auto begin_segment = [&](int i) {
    seg = i;
    const Segment& sg = mission.segments[i];
    path = SegmentPath(sg, prev_end, prev_yaw, ss.cruise);
    if (auto issue = plan_segment(mode, sg, i, prev_z, plan))
      throw InvalidArgument("mission " + describe(*issue));
    entry_done = 0;
    entry_t0 = now();
    ref_running = false;
    stable_since = -1.0;
    log.segments.push_back({i, now(), now(), prev_end, sg.target, false, 0.0});
  };

  // Fire entry events that are due; GearConfigured waits for the gear.
  const auto advance_entry = [&] {
    while (entry_done < plan.entry.size()) {
      const TransitionEvent& e = plan.entry[entry_done];
      if (e.kind == EventKind::kGearConfigured && now() < entry_t0 + ss.gear_delay - 1e-9) return;
      fire(e);
      ++entry_done;
    }
    if (!ref_running) {
      ref_running = true;
      ref_t0 = now();
    }
  };

  const auto reference_at = [&](double t) { return path.at(ref_running ? t - ref_t0 : 0.0); };

  const auto segment_done = [&]() -> bool {
    if (!ref_running || now() - ref_t0 < path.duration() - 1e-9) return false;
    const Segment& sg = mission.segments[seg];
    const double dist = (s.position - sg.target).norm();
    switch (sg.action) {
      case Action::kDrive:
      case Action::kFlyTo:
        return dist <= ss.arrival_radius;
      case Action::kHover:
        return dist <= ss.arrival_radius && now() - ref_t0 >= path.duration() + sg.hold - 1e-9;
      case Action::kTakeoff: {
        const bool steady = dist <= ss.hover_radius && s.velocity.norm() < ss.hover_speed;
        if (!steady) {
          stable_since = -1.0;
          return false;
        }
        if (stable_since < 0) stable_since = now();
        return now() - stable_since >= ss.hover_time - 1e-9;
      }
      case Action::kLand:
        return dist <= ss.arrival_radius && s.position.z() <= sg.target.z() + ss.touchdown_height &&
               s.velocity.z() > -ss.touchdown_speed;
    }
    return false;
  };

  const auto aerial_control = [&](double t, const Reference& ref) {
    AerialInput u;
    if (controller == ControllerKind::kPid) {
      u = cascade_pid(ref.position, ref.yaw, s, cfg.pid, ctrl_dt, pid_state, p.gravity);
    } else if (k % ctrl_per_solve == 0 || !nmpc_state.warm_start) {
      std::vector<OutputVector> refs(cfg.nmpc.horizon);
      for (int j = 0; j < cfg.nmpc.horizon; ++j) {
        const Reference r = reference_at(t + (j + 1) * cfg.nmpc.period);
        refs[j] = {r.position.x(), r.position.y(), r.position.z(), r.yaw};
      }
      try {
        const NmpcStep step = control_step(nmpc_state, s, refs, cfg.nmpc, p);
        nmpc_state = step.next;
        u = step.input;
        last_cost = step.solution.cost;
        last_iters = step.solution.iterations;
      } catch (const SolverFailure& e) {
        ++log.solver_fallbacks;
        log.warnings.push_back("nmpc fallback to hover at t=" + std::to_string(t) + ": " + e.what());
        nmpc_state = {};
        u = {p.gravity, Vec3::Zero()};
        last_cost = 0.0;
        last_iters = 0;
      }
    } else {
      return;  // hold the last NMPC input between solves
    }
    const Allocation a = allocate_clipped(u, p);
    actuator = a.command;
    u_aerial = forward_mix(a.command, p);
  };

  const auto surface_control = [&](const Reference& ref) {
    const Pose2 pose = s.pose();
    detail::SurfaceDemand d;
    if (mode.sub == SubState::kDriving)
      d = detail::surface_demand(ref, mission.segments[seg].target, pose, cfg.surface, ss.arrival_radius);
    if (mode.medium == Medium::kTerrestrial) {
      const double half = 0.5 * p.track_width * d.yaw_rate;
      const Allocation a = clip_command(terrestrial_command({d.speed - half, d.speed + half}, p), p);
      actuator = a.command;
      u_ground = terrestrial_from_command(a.command, p);
    } else {
      double speed = d.speed, steer = 0.0;
      if (mode.sub == SubState::kDriving && d.yaw_rate != 0.0) {
        speed = std::max(speed, cfg.surface.min_water_speed);
        steer = std::atan(d.yaw_rate * p.wheelbase / speed);
      }
      const Allocation a = clip_command(aquatic_command({speed, steer}, p), p);
      actuator = a.command;
      u_water = aquatic_from_command(a.command, p);
    }
    last_cost = 0.0;
    last_iters = 0;
  };

  const auto plant_step = [&] {
    switch (mode.medium) {
      case Medium::kAerial:
        s = step_aerial(s, u_aerial, p, p.dt);
        if (s.position.z() < 0.0) {
          s.position.z() = 0.0;
          s.velocity.z() = std::max(0.0, s.velocity.z());
        }
        break;
      case Medium::kTerrestrial: {
        const Pose2 pose = step_rk4(
            [&p](const Pose2& x, const TerrestrialInput& u) { return terrestrial_derivative(x, u, p); }, s.pose(),
            u_ground, p.dt);
        s = detail::surface_state(pose, 0.5 * (u_ground.left + u_ground.right),
                                  (u_ground.right - u_ground.left) / p.track_width);
        break;
      }
      case Medium::kAquatic: {
        const Pose2 pose = step_rk4(
            [&p](const Pose2& x, const AquaticInput& u) { return aquatic_derivative(x, u, p); }, s.pose(), u_water,
            p.dt);
        s = detail::surface_state(pose, u_water.speed, u_water.speed / p.wheelbase * std::tan(u_water.steering));
        break;
      }
    }
  };

  try {
    begin_segment(0);
    for (;;) {
      const double t = now();
      advance_entry();
      if (segment_done()) {
        SegmentRecord& rec = log.segments.back();
        rec.end = t;
        rec.completed = true;
        rec.arrival_error = (s.position - mission.segments[seg].target).norm();
        prev_end = path.end();
        prev_yaw = path.yaw();
        prev_z = mission.segments[seg].target.z();
        if (seg + 1 == n_seg) {
          log_row(seg, reference_at(t));
          break;
        }
        for (const auto& e : plan.completion) fire(e);
        begin_segment(seg + 1);
        advance_entry();
      }
      if (t >= ss.time_limit - 1e-9) {
        log.segments.back().end = t;
        log_row(seg, reference_at(t));
        log.status = RunStatus::kTimeLimit;
        log.message = "time limit " + std::to_string(ss.time_limit) + " s reached in segment " + std::to_string(seg);
        break;
      }

      const Reference ref = reference_at(t);
      if (mode.medium == Medium::kAerial) aerial_control(t, ref);
      else surface_control(ref);
      log_row(seg, ref);

      for (int i = 0; i < plant_per_ctrl; ++i) plant_step();
      ++k;
    }
  } catch (const DivergenceError& e) {
    log.status = RunStatus::kDiverged;
    log.message = std::string("divergence at t=") + std::to_string(now()) + ": " + e.what();
    if (!log.segments.empty()) log.segments.back().end = now();
  }
  return log;
}

}  // namespace cyclo

#endif  // CYCLO_SIM_HPP_
