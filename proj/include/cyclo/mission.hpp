#ifndef CYCLO_MISSION_HPP_
#define CYCLO_MISSION_HPP_

// Missions as ordered segments, and the FSM events each segment implies.
//
// A segment has a working state (the sub-state the vehicle is in while the
// segment runs), entry events that bring the machine from wherever the last
// segment left it into that working state, and completion events fired once
// the segment's guard holds. The last segment's completion events are not
// fired: the run ends on arrival.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclo/fsm.hpp"
#include "cyclo/geom.hpp"

namespace cyclo {

enum class Action { kDrive, kTakeoff, kFlyTo, kHover, kLand };

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::kDrive:
      return "Drive";
    case Action::kTakeoff:
      return "Takeoff";
    case Action::kFlyTo:
      return "FlyTo";
    case Action::kHover:
      return "Hover";
    case Action::kLand:
      return "Land";
  }
  return "?";
}

struct Segment {
  Medium medium = Medium::kAerial;
  Action action = Action::kHover;
  Vec3 target = Vec3::Zero();
  double hold = 0.0;  // s, Hover only
};

struct Mission {
  Vec3 start = Vec3::Zero();
  Medium start_medium = Medium::kTerrestrial;
  std::vector<Segment> segments;
};

inline constexpr double kDefaultHoverHold = 5.0;

inline Mission builtin_mission() {
  Mission m;
  m.segments = {
      {Medium::kTerrestrial, Action::kDrive, {100, 0, 0}, 0.0},
      {Medium::kAerial, Action::kTakeoff, {100, 0, 100}, 0.0},
      {Medium::kAerial, Action::kFlyTo, {200, 100, 150}, 0.0},
      {Medium::kAerial, Action::kHover, {200, 100, 150}, kDefaultHoverHold},
      {Medium::kAerial, Action::kFlyTo, {150, 80, 100}, 0.0},
      {Medium::kAerial, Action::kHover, {150, 80, 100}, kDefaultHoverHold},
      {Medium::kAerial, Action::kLand, {200, 0, 0}, 0.0},
      {Medium::kAquatic, Action::kDrive, {300, 100, 0}, 0.0},
  };
  return m;
}

// x-extent of each medium along the mission corridor, m.
struct Band {
  double lo, hi;
};

inline Band band_of(Medium m) {
  switch (m) {
    case Medium::kTerrestrial:
      return {0.0, 100.0};
    case Medium::kAerial:
      return {100.0, 200.0};
    case Medium::kAquatic:
      return {200.0, 300.0};
  }
  return {0.0, 0.0};
}

inline bool in_band(Medium m, double x, double tol = 1e-9) {
  const Band b = band_of(m);
  return x >= b.lo - tol && x <= b.hi + tol;
}

/// Surface under a ground-level point: water from the aquatic band onward.
inline bool is_water(double x) { return x >= band_of(Medium::kAquatic).lo; }

struct MissionIssue {
  int segment = -1;  // -1 for mission-level problems
  std::string message;
};

inline std::string describe(const MissionIssue& m) {
  return (m.segment >= 0 ? "segment " + std::to_string(m.segment) + ": " : std::string()) + m.message;
}

/// Static checks: finite targets, segment media inside their bands, surface
/// segments at z = 0, actions that belong to their medium.
inline std::optional<MissionIssue> check_mission(const Mission& m) {
  if (!m.start.allFinite()) return MissionIssue{-1, "start position is not finite"};
  for (int i = 0; i < static_cast<int>(m.segments.size()); ++i) {
    const Segment& s = m.segments[i];
    const std::string tag = std::string(to_string(s.medium)) + " " + std::string(to_string(s.action));
    if (!s.target.allFinite()) return MissionIssue{i, tag + " target is not finite"};
    if (!(s.hold >= 0.0) || !std::isfinite(s.hold)) return MissionIssue{i, tag + " hold must be finite and >= 0"};
    const bool surface = s.medium != Medium::kAerial;
    if (surface != (s.action == Action::kDrive))
      return MissionIssue{i, tag + ": Drive is the only surface action and is not an aerial one"};
    if (!in_band(s.medium, s.target.x()))
      return MissionIssue{i, tag + " target x = " + std::to_string(s.target.x()) + " is outside the " +
                                 std::string(to_string(s.medium)) + " band"};
    if (surface && s.target.z() != 0.0) return MissionIssue{i, tag + " target must be at z = 0"};
    if (s.action == Action::kLand && s.target.z() != 0.0) return MissionIssue{i, tag + " target must be at z = 0"};
  }
  return std::nullopt;
}

struct SegmentPlan {
  std::vector<TransitionEvent> entry;
  std::vector<TransitionEvent> completion;
  ModeState working;
};

/// Aerial moves that end lower than they start run in Landing and are
/// closed by a Hold command.
inline bool descends(const Segment& s, double from_z) { return s.target.z() < from_z - 1e-9; }

/// Events for one segment given the state the previous one left behind.
/// Returns an issue if the segment cannot start from that state.
inline std::optional<MissionIssue> plan_segment(const ModeState& from, const Segment& seg, int index, double from_z,
                                                SegmentPlan& out) {
  using E = TransitionEvent;
  out = {};
  const auto fail = [&](const std::string& need) {
    return MissionIssue{index, std::string(to_string(seg.action)) + " needs " + need + " but the vehicle is " +
                                   to_string(from) + " with gear " +
                                   (from.gear == Gear::kOpen ? "open" : "retracted")};
  };
  switch (seg.action) {
    case Action::kDrive:
      if (from != make_state(seg.medium, SubState::kStatic))
        return fail(std::string(to_string(seg.medium)) + "/Static");
      out.entry = {E::command_of(CommandId::kStart)};
      out.completion = {E::reached(index)};
      break;
    case Action::kTakeoff:
      if (from.sub == SubState::kStatic && from.medium != Medium::kAerial) {
        out.entry = {E::of(EventKind::kGearConfigured), E::command_of(CommandId::kStart)};
      } else if (from == make_state(Medium::kAerial, SubState::kStatic) ||
                 from == make_state(Medium::kAerial, SubState::kHovering)) {
        out.entry = {E::command_of(CommandId::kStart)};
      } else {
        return fail("a Static or Hovering state");
      }
      out.completion = {E::of(EventKind::kHoverStable)};
      break;
    case Action::kFlyTo:
    case Action::kHover:
      if (from != make_state(Medium::kAerial, SubState::kHovering)) return fail("Aerial/Hovering");
      if (descends(seg, from_z)) {
        out.entry = {E::command_of(CommandId::kDescend)};
        out.completion = {E::command_of(CommandId::kHold)};
      }
      break;
    case Action::kLand:
      if (from != make_state(Medium::kAerial, SubState::kHovering)) return fail("Aerial/Hovering");
      out.entry = {E::command_of(CommandId::kDescend)};
      out.completion = {E::of(is_water(seg.target.x()) ? EventKind::kEnteredWater : EventKind::kTouchedDown)};
      break;
  }
  ModeState s = from;
  for (const auto& e : out.entry) s = step_fsm(s, e);
  out.working = s;
  return std::nullopt;
}

inline ModeState start_state(const Mission& m) { return make_state(m.start_medium, SubState::kStatic); }

struct MissionEvents {
  std::vector<TransitionEvent> events;
  std::vector<int> segment_of;  // segment index per event
  ModeState expected_final;     // where the replay must end
  std::optional<MissionIssue> issue;
};

/// The whole event sequence a mission drives through the FSM, without any
/// dynamics: entry events of every segment and completion events of all but
/// the last.
inline MissionEvents mission_events(const Mission& m) {
  MissionEvents out;
  out.expected_final = start_state(m);
  if ((out.issue = check_mission(m))) return out;
  ModeState s = out.expected_final;
  double z = m.start.z();
  const int n = static_cast<int>(m.segments.size());
  for (int i = 0; i < n; ++i) {
    SegmentPlan plan;
    if ((out.issue = plan_segment(s, m.segments[i], i, z, plan))) return out;
    std::vector<TransitionEvent> evs = plan.entry;
    if (i + 1 < n) evs.insert(evs.end(), plan.completion.begin(), plan.completion.end());
    for (const auto& e : evs) {
      out.events.push_back(e);
      out.segment_of.push_back(i);
      s = step_fsm(s, e);
    }
    z = m.segments[i].target.z();
  }
  out.expected_final = s;
  return out;
}

/// The aerial stretch of a mission: from the first aerial segment through
/// the last consecutive one, starting parked at the preceding waypoint.
inline Mission aerial_only(const Mission& m) {
  Mission out;
  out.start_medium = Medium::kAerial;
  out.start = m.start;
  std::size_t i = 0;
  while (i < m.segments.size() && m.segments[i].medium != Medium::kAerial) out.start = m.segments[i++].target;
  while (i < m.segments.size() && m.segments[i].medium == Medium::kAerial) out.segments.push_back(m.segments[i++]);
  return out;
}

}  // namespace cyclo

#endif  // CYCLO_MISSION_HPP_
