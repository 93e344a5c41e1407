#ifndef CYCLO_IO_HPP_
#define CYCLO_IO_HPP_

// Run log, transition and metrics writers. Files are written to a sibling
// temp file and renamed into place.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cyclo/metrics.hpp"
#include "cyclo/sim.hpp"

namespace cyclo {

inline constexpr const char* kLogColumns =
    "t,medium,substate,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz,ref_x,ref_y,ref_z,ref_yaw,"
    "c,tau_x,tau_y,tau_z,w1,w2,w3,w4,servo,cost,iters";

namespace detail {

inline void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  out += buf;
}

inline void append_fields(std::string& out, std::initializer_list<double> vs) {
  for (double v : vs) {
    out += ',';
    append_num(out, v);
  }
}

}  // namespace detail

/// Writes `content` to `path` through `path.tmp` + rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string log_csv(const RunLog& log) {
  std::string out = kLogColumns;
  out += '\n';
  out.reserve(log.rows.size() * 256);
  for (const LogRow& r : log.rows) {
    detail::append_num(out, r.t);
    out += ',';
    out += to_string(r.mode.medium);
    out += ',';
    out += to_string(r.mode.sub);
    const VehicleState& s = r.state;
    const auto& q = s.attitude;
    const auto& w = r.actuator.rotor;
    detail::append_fields(out, {s.position.x(), s.position.y(), s.position.z(), s.velocity.x(), s.velocity.y(),
                                s.velocity.z(), q.w(), q.x(), q.y(), q.z(), s.body_rates.x(), s.body_rates.y(),
                                s.body_rates.z(), r.ref[0], r.ref[1], r.ref[2], r.ref[3], r.input.thrust,
                                r.input.torque.x(), r.input.torque.y(), r.input.torque.z(), w[0], w[1], w[2], w[3],
                                r.actuator.servo, r.cost});
    out += ',';
    out += std::to_string(r.iters);
    out += '\n';
  }
  return out;
}

inline std::string transitions_csv(const RunLog& log) {
  std::string out = "t,from,event,to,accepted\n";
  for (const TransitionRecord& tr : log.transitions) {
    detail::append_num(out, tr.t);
    out += ',' + to_string(tr.from) + ',' + to_string(tr.event) + ',' + to_string(tr.to) + ',' +
           (tr.accepted ? "1" : "0") + '\n';
  }
  return out;
}

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kCompleted:
      return "completed";
    case RunStatus::kTimeLimit:
      return "time_limit";
    case RunStatus::kDiverged:
      return "diverged";
  }
  return "?";
}

/// Flat `key=value` lines. Per-segment keys are prefixed `segN.`.
inline std::string metrics_kv(const TrackingMetrics& m, const RunLog& log) {
  std::string out;
  const auto kv = [&out](const std::string& key, double v) {
    out += key + '=';
    detail::append_num(out, v);
    out += '\n';
  };
  out += "controller=" + std::string(to_string(log.controller)) + '\n';
  out += "status=" + std::string(to_string(log.status)) + '\n';
  kv("total_time", m.total_time);
  kv("segments_completed", static_cast<double>(std::count_if(m.segments.begin(), m.segments.end(),
                                                             [](const SegmentMetrics& s) { return s.completed; })));
  kv("aerial_rms", m.aerial_rms);
  kv("takeoff_overshoot_pct", m.takeoff_overshoot);
  kv("solver_fallbacks", log.solver_fallbacks);
  static const char* const axes[3] = {"x", "y", "z"};
  for (const SegmentMetrics& s : m.segments) {
    const std::string p = "seg" + std::to_string(s.index) + '.';
    out += p + "medium=" + std::string(to_string(s.medium)) + '\n';
    out += p + "action=" + std::string(to_string(s.action)) + '\n';
    kv(p + "completed", s.completed ? 1 : 0);
    kv(p + "start", s.start);
    kv(p + "arrival", s.arrival);
    kv(p + "arrival_error", s.arrival_error);
    kv(p + "rms", s.rms);
    kv(p + "max_error", s.max_error);
    for (int a = 0; a < 3; ++a) {
      kv(p + axes[a] + ".rms", s.axis[a].rms);
      if (!s.axis[a].step) continue;
      kv(p + axes[a] + ".overshoot_pct", s.axis[a].overshoot);
      kv(p + axes[a] + ".settling", s.axis[a].settling);
      kv(p + axes[a] + ".settled", s.axis[a].settled ? 1 : 0);
    }
  }
  return out;
}

}  // namespace cyclo

#endif  // CYCLO_IO_HPP_
