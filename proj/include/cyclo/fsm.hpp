#ifndef CYCLO_FSM_HPP_
#define CYCLO_FSM_HPP_

// Mode state machine: three media, eight sub-states, gear and servo
// configuration. Transitions are a pure table lookup; events that have no
// edge from the current state are absorbed and reported to an optional sink.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclo/geom.hpp"

namespace cyclo {

enum class Medium { kAerial, kTerrestrial, kAquatic };

enum class SubState { kStatic, kTakeoff, kHovering, kLanding, kDriving };

enum class Gear { kOpen, kRetracted };

enum class EventKind { kReachedWaypoint, kHoverStable, kTouchedDown, kEnteredWater, kGearConfigured, kCommand };

// Payload of a Command event. Hovering has two commanded successors, so the
// command id is what selects between them.
enum class CommandId { kNone, kStart, kDescend, kHold };

inline constexpr double kAquaticServo = kPi / 2;  // rotors turned to push along the hull

struct TransitionEvent {
  EventKind kind = EventKind::kCommand;
  CommandId command = CommandId::kNone;  // only meaningful for kCommand
  int waypoint = -1;                     // only meaningful for kReachedWaypoint

  bool consistent() const { return (kind == EventKind::kCommand) == (command != CommandId::kNone); }

  static TransitionEvent reached(int index) { return {EventKind::kReachedWaypoint, CommandId::kNone, index}; }
  static TransitionEvent of(EventKind k) { return {k, CommandId::kNone, -1}; }
  static TransitionEvent command_of(CommandId c) { return {EventKind::kCommand, c, -1}; }
};

struct ModeState {
  Medium medium = Medium::kTerrestrial;
  SubState sub = SubState::kStatic;
  Gear gear = Gear::kRetracted;
  double servo = 0.0;  // commanded configuration angle, rad

  bool operator==(const ModeState&) const = default;
};

inline bool legal_pair(Medium m, SubState s) {
  switch (m) {
    case Medium::kAerial:
      return s != SubState::kDriving;
    case Medium::kTerrestrial:
    case Medium::kAquatic:
      return s == SubState::kStatic || s == SubState::kDriving;
  }
  return false;
}

inline Gear required_gear(Medium m) { return m == Medium::kTerrestrial ? Gear::kRetracted : Gear::kOpen; }

inline double configured_servo(Medium m) { return m == Medium::kAquatic ? kAquaticServo : 0.0; }

inline bool valid(const ModeState& s) { return legal_pair(s.medium, s.sub) && s.gear == required_gear(s.medium); }

/// The configuration the vehicle holds in a given medium/sub-state.
inline ModeState make_state(Medium m, SubState s) { return {m, s, required_gear(m), configured_servo(m)}; }

inline ModeState initial_state() { return make_state(Medium::kTerrestrial, SubState::kStatic); }

/// Every state the machine can be in, in a fixed order.
inline std::array<ModeState, 8> all_states() {
  return {make_state(Medium::kAerial, SubState::kStatic),      make_state(Medium::kAerial, SubState::kTakeoff),
          make_state(Medium::kAerial, SubState::kHovering),    make_state(Medium::kAerial, SubState::kLanding),
          make_state(Medium::kTerrestrial, SubState::kStatic), make_state(Medium::kTerrestrial, SubState::kDriving),
          make_state(Medium::kAquatic, SubState::kStatic),     make_state(Medium::kAquatic, SubState::kDriving)};
}

/// Full event alphabet: each non-command kind once, each command id once.
inline std::vector<TransitionEvent> event_alphabet() {
  return {TransitionEvent::reached(0),
          TransitionEvent::of(EventKind::kHoverStable),
          TransitionEvent::of(EventKind::kTouchedDown),
          TransitionEvent::of(EventKind::kEnteredWater),
          TransitionEvent::of(EventKind::kGearConfigured),
          TransitionEvent::command_of(CommandId::kStart),
          TransitionEvent::command_of(CommandId::kDescend),
          TransitionEvent::command_of(CommandId::kHold)};
}

struct Transition {
  TransitionEvent event;
  ModeState next;
};

/// Outgoing edges of s. The waypoint index of a ReachedWaypoint edge is a
/// placeholder; any index matches.
inline std::vector<Transition> legal_transitions(const ModeState& s) {
  using E = TransitionEvent;
  const auto to = [](Medium m, SubState x) { return make_state(m, x); };
  if (!valid(s)) return {};
  switch (s.medium) {
    case Medium::kTerrestrial:
      if (s.sub == SubState::kStatic)
        return {{E::command_of(CommandId::kStart), to(Medium::kTerrestrial, SubState::kDriving)},
                {E::of(EventKind::kGearConfigured), to(Medium::kAerial, SubState::kStatic)}};
      return {{E::reached(0), to(Medium::kTerrestrial, SubState::kStatic)}};
    case Medium::kAquatic:
      if (s.sub == SubState::kStatic)
        return {{E::command_of(CommandId::kStart), to(Medium::kAquatic, SubState::kDriving)},
                {E::of(EventKind::kGearConfigured), to(Medium::kAerial, SubState::kStatic)}};
      return {{E::reached(0), to(Medium::kAquatic, SubState::kStatic)}};
    case Medium::kAerial:
      switch (s.sub) {
        case SubState::kStatic:
          return {{E::command_of(CommandId::kStart), to(Medium::kAerial, SubState::kTakeoff)}};
        case SubState::kTakeoff:
          return {{E::of(EventKind::kHoverStable), to(Medium::kAerial, SubState::kHovering)}};
        case SubState::kHovering:
          return {{E::command_of(CommandId::kDescend), to(Medium::kAerial, SubState::kLanding)},
                  {E::command_of(CommandId::kStart), to(Medium::kAerial, SubState::kTakeoff)}};
        case SubState::kLanding:
          return {{E::command_of(CommandId::kHold), to(Medium::kAerial, SubState::kHovering)},
                  {E::of(EventKind::kTouchedDown), to(Medium::kAerial, SubState::kStatic)},
                  {E::of(EventKind::kEnteredWater), to(Medium::kAquatic, SubState::kStatic)}};
        case SubState::kDriving:
          break;
      }
      break;
  }
  return {};
}

inline bool matches(const TransitionEvent& edge, const TransitionEvent& e) {
  if (edge.kind != e.kind) return false;
  return e.kind != EventKind::kCommand || edge.command == e.command;
}

inline std::string_view to_string(Medium m) {
  switch (m) {
    case Medium::kAerial:
      return "Aerial";
    case Medium::kTerrestrial:
      return "Terrestrial";
    case Medium::kAquatic:
      return "Aquatic";
  }
  return "?";
}

inline std::string_view to_string(SubState s) {
  switch (s) {
    case SubState::kStatic:
      return "Static";
    case SubState::kTakeoff:
      return "Takeoff";
    case SubState::kHovering:
      return "Hovering";
    case SubState::kLanding:
      return "Landing";
    case SubState::kDriving:
      return "Driving";
  }
  return "?";
}

inline std::string_view to_string(CommandId c) {
  switch (c) {
    case CommandId::kNone:
      return "None";
    case CommandId::kStart:
      return "Start";
    case CommandId::kDescend:
      return "Descend";
    case CommandId::kHold:
      return "Hold";
  }
  return "?";
}

inline std::string to_string(const TransitionEvent& e) {
  switch (e.kind) {
    case EventKind::kReachedWaypoint:
      return "ReachedWaypoint(" + std::to_string(e.waypoint) + ")";
    case EventKind::kHoverStable:
      return "HoverStable";
    case EventKind::kTouchedDown:
      return "TouchedDown";
    case EventKind::kEnteredWater:
      return "EnteredWater";
    case EventKind::kGearConfigured:
      return "GearConfigured";
    case EventKind::kCommand:
      return "Command(" + std::string(to_string(e.command)) + ")";
  }
  return "?";
}

inline std::string to_string(const ModeState& s) {
  return std::string(to_string(s.medium)) + "/" + std::string(to_string(s.sub));
}

using RejectSink = std::function<void(const ModeState&, const TransitionEvent&)>;

/// Apply one event. Events without an edge leave the state unchanged.
inline ModeState step_fsm(const ModeState& s, const TransitionEvent& e, const RejectSink& on_reject = {}) {
  if (e.consistent()) {
    for (const Transition& t : legal_transitions(s))
      if (matches(t.event, e)) return t.next;
  }
  if (on_reject) on_reject(s, e);
  return s;
}

/// Left fold of step_fsm; the result has events.size() + 1 entries.
inline std::vector<ModeState> replay(const ModeState& initial, const std::vector<TransitionEvent>& events,
                                     const RejectSink& on_reject = {}) {
  std::vector<ModeState> trace{initial};
  trace.reserve(events.size() + 1);
  for (const auto& e : events) trace.push_back(step_fsm(trace.back(), e, on_reject));
  return trace;
}

}  // namespace cyclo

#endif  // CYCLO_FSM_HPP_
