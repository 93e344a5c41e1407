#ifndef CYCLO_METRICS_HPP_
#define CYCLO_METRICS_HPP_

// Tracking metrics over a run log, per mission segment.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cyclo/errors.hpp"
#include "cyclo/mission.hpp"
#include "cyclo/sim.hpp"

namespace cyclo {

inline constexpr double kSettlingBand = 0.02;  // fraction of the step

struct AxisMetrics {
  double rms = 0.0;        // m, this axis only
  bool step = false;       // the segment moves this axis
  double overshoot = 0.0;  // % of the step size
  double settling = 0.0;   // s after segment start; the segment duration if never settled
  bool settled = false;
};

struct SegmentMetrics {
  int index = 0;
  Medium medium = Medium::kAerial;
  Action action = Action::kHover;
  int samples = 0;
  double rms = 0.0;        // m, position error against the reference
  double max_error = 0.0;  // m
  double start = 0.0;
  double arrival = 0.0;  // time the segment completed, s
  bool completed = false;
  double arrival_error = 0.0;  // m, distance to the target at completion
  std::array<AxisMetrics, 3> axis{};
};

struct TrackingMetrics {
  std::vector<SegmentMetrics> segments;
  double aerial_rms = 0.0;         // pooled over all aerial-segment rows
  double takeoff_overshoot = 0.0;  // z overshoot on the first Takeoff, %
  double total_time = 0.0;
  bool completed = false;
};

/// Overshoot past `target` in the direction of travel from `from`, as a
/// percentage of |target - from|.
inline double overshoot_percent(const std::vector<double>& values, double from, double target) {
  const double step = target - from;
  if (step == 0.0) return 0.0;
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, (v - target) * (step > 0 ? 1.0 : -1.0));
  return 100.0 * worst / std::abs(step);
}

/// Time (relative to times.front()) after which every sample stays inside
/// the settling band. Returns false in `settled` if the last sample is out.
inline double settling_time(const std::vector<double>& times, const std::vector<double>& values, double from,
                            double target, bool& settled) {
  const double band = kSettlingBand * std::abs(target - from);
  settled = true;
  for (std::size_t i = values.size(); i-- > 0;) {
    if (std::abs(values[i] - target) > band) {
      if (i + 1 == values.size()) {
        settled = false;
        return times.back() - times.front();
      }
      return times[i + 1] - times.front();
    }
  }
  return 0.0;
}

inline TrackingMetrics compute_metrics(const RunLog& log, const Mission& mission) {
  if (log.rows.empty()) throw InvalidArgument("compute_metrics: log has no rows");
  TrackingMetrics m;
  m.total_time = log.end_time();
  m.completed = log.ok();
  double aerial_sq = 0.0;
  long aerial_n = 0;
  bool takeoff_seen = false;

  for (const SegmentRecord& rec : log.segments) {
    if (rec.index < 0 || rec.index >= static_cast<int>(mission.segments.size()))
      throw InvalidArgument("compute_metrics: log segment outside the mission");
    const Segment& sg = mission.segments[rec.index];
    SegmentMetrics sm;
    sm.index = rec.index;
    sm.medium = sg.medium;
    sm.action = sg.action;
    sm.start = rec.start;
    sm.arrival = rec.end;
    sm.completed = rec.completed;
    sm.arrival_error = rec.arrival_error;

    std::vector<double> times;
    std::array<std::vector<double>, 3> pos;
    double sq = 0.0;
    Vec3 axis_sq = Vec3::Zero();
    for (const LogRow& r : log.rows) {
      if (r.segment != rec.index) continue;
      const Vec3 d = r.state.position - r.ref.head<3>();
      const double e = d.norm();
      sq += e * e;
      axis_sq += d.cwiseAbs2();
      sm.max_error = std::max(sm.max_error, e);
      times.push_back(r.t);
      for (int a = 0; a < 3; ++a) pos[a].push_back(r.state.position[a]);
    }
    sm.samples = static_cast<int>(times.size());
    if (sm.samples > 0) sm.rms = std::sqrt(sq / sm.samples);
    if (sg.medium == Medium::kAerial) {
      aerial_sq += sq;
      aerial_n += sm.samples;
    }
    for (int a = 0; a < 3 && sm.samples > 0; ++a) {
      AxisMetrics& ax = sm.axis[a];
      ax.rms = std::sqrt(axis_sq[a] / sm.samples);
      ax.step = std::abs(rec.target[a] - rec.from[a]) > 1e-9;
      if (!ax.step) continue;
      ax.overshoot = overshoot_percent(pos[a], rec.from[a], rec.target[a]);
      ax.settling = settling_time(times, pos[a], rec.from[a], rec.target[a], ax.settled);
    }
    if (sg.action == Action::kTakeoff && !takeoff_seen) {
      takeoff_seen = true;
      m.takeoff_overshoot = sm.axis[2].overshoot;
    }
    m.segments.push_back(sm);
  }
  if (aerial_n > 0) m.aerial_rms = std::sqrt(aerial_sq / aerial_n);
  return m;
}

}  // namespace cyclo

#endif  // CYCLO_METRICS_HPP_
