#ifndef CYCLO_CONFIG_HPP_
#define CYCLO_CONFIG_HPP_

// JSON config and mission files. Every key is optional and falls back to the
// compiled default; unknown keys are rejected so typos do not pass silently.
// Errors carry either "line N" (syntax) or the dotted key path.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cyclo/errors.hpp"
#include "cyclo/mission.hpp"
#include "cyclo/sim.hpp"

namespace cyclo {

using Json = nlohmann::json;

namespace detail {

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ParseError(origin + ":" + std::to_string(line), "syntax error");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Walks one JSON object, dispatching known keys and rejecting the rest.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  Section& num(const std::string& key, double& out) {
    return on(key, [dst = &out](const Json& v, const std::string& where) { *dst = number(v, where); });
  }

  Section& integer(const std::string& key, int& out) {
    return on(key, [dst = &out](const Json& v, const std::string& where) {
      if (!v.is_number_integer()) throw ParseError(where, "expected an integer");
      *dst = v.get<int>();
    });
  }

  Section& on(const std::string& key, std::function<void(const Json&, const std::string&)> fn) {
    handlers_[key] = std::move(fn);
    return *this;
  }

  void apply() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      const auto h = handlers_.find(it.key());
      if (h == handlers_.end()) throw ParseError(join(it.key()), "unknown key");
      h->second(it.value(), join(it.key()));
    }
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  static double number(const Json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where, "expected a number");
    return v.get<double>();
  }

 private:
  const Json& j_;
  std::string path_;
  std::map<std::string, std::function<void(const Json&, const std::string&)>> handlers_;
};

inline Vec3 vec3(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw ParseError(where, "expected [x, y, z]");
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = Section::number(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string text(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "expected a string");
  return v.get<std::string>();
}

inline Medium medium_from(const Json& v, const std::string& where) {
  const std::string s = lower(text(v, where));
  for (Medium m : {Medium::kTerrestrial, Medium::kAerial, Medium::kAquatic})
    if (s == lower(std::string(to_string(m)))) return m;
  throw ParseError(where, "unknown medium '" + s + "'");
}

inline Action action_from(const Json& v, const std::string& where) {
  const std::string s = lower(text(v, where));
  for (Action a : {Action::kDrive, Action::kTakeoff, Action::kFlyTo, Action::kHover, Action::kLand})
    if (s == lower(std::string(to_string(a)))) return a;
  throw ParseError(where, "unknown action '" + s + "'");
}

inline const char* const kPidChannelKeys[kNumChannels] = {"x", "y", "z", "roll", "pitch", "yaw"};
inline const char* const kQKeys[4] = {"q_x", "q_y", "q_z", "q_yaw"};
inline const char* const kRKeys[4] = {"r_c", "r_roll", "r_pitch", "r_yaw"};
inline const char* const kTorqueKeys[3] = {"torque_max_roll", "torque_max_pitch", "torque_max_yaw"};

}  // namespace detail

/// Applies the keys present in `j` on top of `cfg`, then validates.
inline SimConfig config_from_json(const Json& j, SimConfig cfg = {}) {
  using detail::Section;
  Section root(j, "");
  root.on("vehicle", [&](const Json& v, const std::string& w) {
    VehicleParams& p = cfg.vehicle;
    Section(v, w)
        .num("mass", p.mass)
        .num("inertia_xx", p.inertia.x())
        .num("inertia_yy", p.inertia.y())
        .num("inertia_zz", p.inertia.z())
        .num("track_width", p.track_width)
        .num("wheelbase", p.wheelbase)
        .num("k_f", p.k_f)
        .num("arm", p.arm)
        .num("rotor_max", p.rotor_max)
        .num("servo_max", p.servo_max)
        .num("wheel_radius", p.wheel_radius)
        .num("water_drag", p.water_drag)
        .num("gravity", p.gravity)
        .num("dt", p.dt)
        .apply();
  });
  root.on("pid", [&](const Json& v, const std::string& w) {
    Section s(v, w);
    for (int c = 0; c < kNumChannels; ++c) {
      s.on(detail::kPidChannelKeys[c], [&cfg, c](const Json& g, const std::string& gw) {
        PidTerm& t = cfg.pid.channel[c];
        Section(g, gw).num("p", t.p).num("i", t.i).num("d", t.d).apply();
      });
    }
    s.num("integral_limit", cfg.pid.integral_limit).num("tilt_max", cfg.pid.tilt_max).apply();
  });
  root.on("nmpc", [&](const Json& v, const std::string& w) {
    NmpcConfig& n = cfg.nmpc;
    Section s(v, w);
    for (int i = 0; i < 4; ++i) s.num(detail::kQKeys[i], n.q[i]).num(detail::kRKeys[i], n.r[i]);
    for (int i = 0; i < 3; ++i) s.num(detail::kTorqueKeys[i], n.torque_max[i]);
    s.integer("horizon", n.horizon)
        .num("period", n.period)
        .num("accel_min", n.accel_min)
        .num("accel_max", n.accel_max)
        .num("tilt_max", n.tilt_max)
        .num("tilt_penalty", n.tilt_penalty)
        .integer("max_iters", n.max_iters)
        .num("tol", n.tol)
        .apply();
  });
  root.on("surface", [&](const Json& v, const std::string& w) {
    SurfaceGains& g = cfg.surface;
    Section(v, w)
        .num("speed", g.speed)
        .num("heading", g.heading)
        .num("crosstrack", g.crosstrack)
        .num("min_water_speed", g.min_water_speed)
        .apply();
  });
  root.on("sim", [&](const Json& v, const std::string& w) {
    SimSettings& s = cfg.sim;
    Section(v, w)
        .num("cruise_ground", s.cruise.ground)
        .num("cruise_air", s.cruise.air)
        .num("cruise_water", s.cruise.water)
        .num("yaw_rate", s.cruise.yaw_rate)
        .num("controller_period", s.controller_period)
        .num("arrival_radius", s.arrival_radius)
        .num("time_limit", s.time_limit)
        .num("gear_delay", s.gear_delay)
        .num("hover_radius", s.hover_radius)
        .num("hover_speed", s.hover_speed)
        .num("hover_time", s.hover_time)
        .num("touchdown_height", s.touchdown_height)
        .num("touchdown_speed", s.touchdown_speed)
        .apply();
  });
  root.apply();
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError("config", e.what());
  }
  return cfg;
}

inline Json config_to_json(const SimConfig& cfg) {
  Json j;
  const VehicleParams& p = cfg.vehicle;
  j["vehicle"] = {{"mass", p.mass},
                  {"inertia_xx", p.inertia.x()},
                  {"inertia_yy", p.inertia.y()},
                  {"inertia_zz", p.inertia.z()},
                  {"track_width", p.track_width},
                  {"wheelbase", p.wheelbase},
                  {"k_f", p.k_f},
                  {"arm", p.arm},
                  {"rotor_max", p.rotor_max},
                  {"servo_max", p.servo_max},
                  {"wheel_radius", p.wheel_radius},
                  {"water_drag", p.water_drag},
                  {"gravity", p.gravity},
                  {"dt", p.dt}};
  Json pid = {{"integral_limit", cfg.pid.integral_limit}, {"tilt_max", cfg.pid.tilt_max}};
  for (int c = 0; c < kNumChannels; ++c) {
    const PidTerm& t = cfg.pid.channel[c];
    pid[detail::kPidChannelKeys[c]] = {{"p", t.p}, {"i", t.i}, {"d", t.d}};
  }
  j["pid"] = pid;
  const NmpcConfig& n = cfg.nmpc;
  Json nmpc = {{"horizon", n.horizon},         {"period", n.period},     {"accel_min", n.accel_min},
               {"accel_max", n.accel_max},     {"tilt_max", n.tilt_max}, {"tilt_penalty", n.tilt_penalty},
               {"max_iters", n.max_iters},     {"tol", n.tol}};
  for (int i = 0; i < 4; ++i) {
    nmpc[detail::kQKeys[i]] = n.q[i];
    nmpc[detail::kRKeys[i]] = n.r[i];
  }
  for (int i = 0; i < 3; ++i) nmpc[detail::kTorqueKeys[i]] = n.torque_max[i];
  j["nmpc"] = nmpc;
  const SurfaceGains& g = cfg.surface;
  j["surface"] = {
      {"speed", g.speed}, {"heading", g.heading}, {"crosstrack", g.crosstrack}, {"min_water_speed", g.min_water_speed}};
  const SimSettings& s = cfg.sim;
  j["sim"] = {{"cruise_ground", s.cruise.ground},
              {"cruise_air", s.cruise.air},
              {"cruise_water", s.cruise.water},
              {"yaw_rate", s.cruise.yaw_rate},
              {"controller_period", s.controller_period},
              {"arrival_radius", s.arrival_radius},
              {"time_limit", s.time_limit},
              {"gear_delay", s.gear_delay},
              {"hover_radius", s.hover_radius},
              {"hover_speed", s.hover_speed},
              {"hover_time", s.hover_time},
              {"touchdown_height", s.touchdown_height},
              {"touchdown_speed", s.touchdown_speed}};
  return j;
}

inline SimConfig parse_config(const std::string& text, const std::string& origin = "config") {
  return config_from_json(detail::parse_text(text, origin));
}

inline SimConfig load_config(const std::string& path) { return parse_config(detail::read_file(path), path); }

/// Mission JSON:
///   {"start": {"position": [x, y, z], "medium": "terrestrial"},
///    "segments": [{"medium": "aerial", "action": "takeoff", "target": [x, y, z], "hold": 0}, ...]}
/// `hold` defaults to 5 s for Hover and 0 otherwise.
inline Mission mission_from_json(const Json& j) {
  using detail::Section;
  Mission m;
  Section root(j, "");
  root.on("start", [&](const Json& v, const std::string& w) {
    Section(v, w)
        .on("position", [&](const Json& p, const std::string& pw) { m.start = detail::vec3(p, pw); })
        .on("medium", [&](const Json& p, const std::string& pw) { m.start_medium = detail::medium_from(p, pw); })
        .apply();
  });
  root.on("segments", [&](const Json& v, const std::string& w) {
    if (!v.is_array()) throw ParseError(w, "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string sw = w + "[" + std::to_string(i) + "]";
      Segment seg;
      bool has_medium = false, has_action = false, has_target = false, has_hold = false;
      Section(v[i], sw)
          .on("medium",
              [&](const Json& x, const std::string& xw) {
                seg.medium = detail::medium_from(x, xw);
                has_medium = true;
              })
          .on("action",
              [&](const Json& x, const std::string& xw) {
                seg.action = detail::action_from(x, xw);
                has_action = true;
              })
          .on("target",
              [&](const Json& x, const std::string& xw) {
                seg.target = detail::vec3(x, xw);
                has_target = true;
              })
          .on("hold",
              [&](const Json& x, const std::string& xw) {
                seg.hold = Section::number(x, xw);
                has_hold = true;
              })
          .apply();
      if (!has_medium) throw ParseError(sw + ".medium", "missing");
      if (!has_action) throw ParseError(sw + ".action", "missing");
      if (!has_target) throw ParseError(sw + ".target", "missing");
      if (!has_hold && seg.action == Action::kHover) seg.hold = kDefaultHoverHold;
      m.segments.push_back(seg);
    }
  });
  root.apply();
  return m;
}

inline Json mission_to_json(const Mission& m) {
  Json segs = Json::array();
  for (const Segment& s : m.segments)
    segs.push_back({{"medium", detail::lower(std::string(to_string(s.medium)))},
                    {"action", detail::lower(std::string(to_string(s.action)))},
                    {"target", {s.target.x(), s.target.y(), s.target.z()}},
                    {"hold", s.hold}});
  return {{"start",
           {{"position", {m.start.x(), m.start.y(), m.start.z()}},
            {"medium", detail::lower(std::string(to_string(m.start_medium)))}}},
          {"segments", segs}};
}

inline Mission parse_mission(const std::string& text, const std::string& origin = "mission") {
  return mission_from_json(detail::parse_text(text, origin));
}

inline Mission load_mission(const std::string& path) { return parse_mission(detail::read_file(path), path); }

}  // namespace cyclo

#endif  // CYCLO_CONFIG_HPP_
