// cyclosim: run missions, compare controllers, check mission FSM traces.
//
// Exit codes: 0 success, 2 usage, 3 config/mission parse, 4 divergence,
// 5 time limit. On failure the last line on stderr is
//   FAIL code=<n> kind=<kind> detail="<text>"

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cyclo/config.hpp"
#include "cyclo/io.hpp"
#include "cyclo/metrics.hpp"
#include "cyclo/mission.hpp"
#include "cyclo/sim.hpp"

namespace fs = std::filesystem;
using namespace cyclo;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kParse = 3, kDiverged = 4, kTimeLimit = 5 };

struct Options {
  std::string mission = "builtin";
  std::string controller = "pid";
  std::string candidate = "nmpc";
  std::string config;
  std::string out = ".";
  std::optional<double> duration_limit;
  bool aerial_only = false;
  unsigned seed = 0;  // accepted for interface stability; runs are deterministic
};

int fail(int code, const std::string& kind, std::string detail) {
  std::fflush(stdout);
  for (char& c : detail)
    if (c == '\n' || c == '"') c = ' ';
  std::cerr << "FAIL code=" << code << " kind=" << kind << " detail=\"" << detail << "\"" << std::endl;
  return code;
}

ControllerKind controller_from(const std::string& s) { return s == "nmpc" ? ControllerKind::kNmpc : ControllerKind::kPid; }

struct Inputs {
  SimConfig cfg;
  Mission mission;
};

Inputs load_inputs(const Options& o) {
  Inputs in;
  if (!o.config.empty()) in.cfg = load_config(o.config);
  if (o.duration_limit) {
    in.cfg.sim.time_limit = *o.duration_limit;
    try {
      in.cfg.validate();
    } catch (const InvalidArgument& e) {
      throw ParseError("--duration-limit", e.what());
    }
  }
  in.mission = o.mission == "builtin" ? builtin_mission() : load_mission(o.mission);
  if (o.aerial_only) in.mission = aerial_only(in.mission);
  if (auto issue = check_mission(in.mission)) throw ParseError("mission", describe(*issue));
  const MissionEvents ev = mission_events(in.mission);
  if (ev.issue) throw ParseError("mission", describe(*ev.issue));
  return in;
}

int status_exit(const RunLog& log) {
  switch (log.status) {
    case RunStatus::kCompleted:
      return kOk;
    case RunStatus::kTimeLimit:
      return kTimeLimit;
    case RunStatus::kDiverged:
      return kDiverged;
  }
  return kFailure;
}

int report_status(const RunLog& log, const std::string& label) {
  const int code = status_exit(log);
  if (code == kOk) return kOk;
  return fail(code, std::string(to_string(log.status)), label + log.message);
}

void write_run(const fs::path& dir, const std::string& prefix, const RunLog& log, const TrackingMetrics& m) {
  write_atomic(dir / (prefix + "log.csv"), log_csv(log));
  write_atomic(dir / (prefix + "transitions.csv"), transitions_csv(log));
  write_atomic(dir / (prefix + "metrics.txt"), metrics_kv(m, log));
}

void print_summary(const RunLog& log, const TrackingMetrics& m) {
  std::printf("%-4s %-12s %-8s %9s %9s %9s %9s\n", "seg", "medium", "action", "start", "end", "rms", "arr_err");
  for (const SegmentMetrics& s : m.segments)
    std::printf("%-4d %-12s %-8s %9.2f %9.2f %9.4f %9.4f%s\n", s.index, std::string(to_string(s.medium)).c_str(),
                std::string(to_string(s.action)).c_str(), s.start, s.arrival, s.rms, s.arrival_error,
                s.completed ? "" : "  (incomplete)");
  std::printf("controller=%s status=%s time=%.2f aerial_rms=%.4f takeoff_overshoot_pct=%.3f\n",
              std::string(to_string(log.controller)).c_str(), std::string(to_string(log.status)).c_str(),
              m.total_time, m.aerial_rms, m.takeoff_overshoot);
}

int simulate(const Options& o) {
  const Inputs in = load_inputs(o);
  const RunLog log = run(in.cfg, in.mission, controller_from(o.controller));
  const TrackingMetrics m = compute_metrics(log, in.mission);
  fs::create_directories(o.out);
  write_run(o.out, "", log, m);
  print_summary(log, m);
  return report_status(log, "");
}

int compare(const Options& o) {
  const Inputs in = load_inputs(o);
  const ControllerKind a = controller_from(o.controller), b = controller_from(o.candidate);
  auto fa = std::async(std::launch::async, [&] { return run(in.cfg, in.mission, a); });
  auto fb = std::async(std::launch::async, [&] { return run(in.cfg, in.mission, b); });
  const RunLog la = fa.get(), lb = fb.get();
  const TrackingMetrics ma = compute_metrics(la, in.mission), mb = compute_metrics(lb, in.mission);
  fs::create_directories(o.out);
  write_run(o.out, "baseline_", la, ma);
  write_run(o.out, "candidate_", lb, mb);

  const std::string na(to_string(a)), nb(to_string(b));
  std::string table;
  char line[256];
  std::snprintf(line, sizeof line, "%-4s %-8s %-4s %11s %11s %11s %11s %11s %11s %11s\n", "seg", "action", "axis",
                ("rms_" + na).c_str(), ("rms_" + nb).c_str(), "d_rms", ("os%_" + na).c_str(),
                ("os%_" + nb).c_str(), ("ts_" + na).c_str(), ("ts_" + nb).c_str());
  table += line;
  static const char* const axes[3] = {"x", "y", "z"};
  const std::size_t n = std::min(ma.segments.size(), mb.segments.size());
  for (std::size_t i = 0; i < n; ++i) {
    const SegmentMetrics &sa = ma.segments[i], &sb = mb.segments[i];
    if (sa.medium != Medium::kAerial) continue;
    for (int ax = 0; ax < 3; ++ax) {
      const AxisMetrics &xa = sa.axis[ax], &xb = sb.axis[ax];
      std::snprintf(line, sizeof line, "%-4d %-8s %-4s %11.4f %11.4f %11.4f %11.3f %11.3f %11.2f %11.2f\n", sa.index,
                    std::string(to_string(sa.action)).c_str(), axes[ax], xa.rms, xb.rms, xb.rms - xa.rms,
                    xa.overshoot, xb.overshoot, xa.settling, xb.settling);
      table += line;
    }
  }
  std::snprintf(line, sizeof line, "aerial_rms %s=%.4f %s=%.4f  takeoff_z_overshoot_pct %s=%.3f %s=%.3f\n",
                na.c_str(), ma.aerial_rms, nb.c_str(), mb.aerial_rms, na.c_str(), ma.takeoff_overshoot, nb.c_str(),
                mb.takeoff_overshoot);
  table += line;
  write_atomic(fs::path(o.out) / "comparison.txt", table);
  std::fputs(table.c_str(), stdout);

  const int ca = report_status(la, "baseline " + na + ": ");
  if (ca != kOk) return ca;
  return report_status(lb, "candidate " + nb + ": ");
}

int validate_fsm(const Options& o) {
  Mission m = o.mission == "builtin" ? builtin_mission() : load_mission(o.mission);
  if (o.aerial_only) m = aerial_only(m);
  const MissionEvents ev = mission_events(m);
  if (ev.issue) return fail(kParse, "mission", describe(*ev.issue));
  const std::vector<ModeState> trace = replay(start_state(m), ev.events);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i == 0) std::printf("%2zu  %-20s\n", i, to_string(trace[i]).c_str());
    else
      std::printf("%2zu  %-20s <- %s (segment %d)\n", i, to_string(trace[i]).c_str(),
                  to_string(ev.events[i - 1]).c_str(), ev.segment_of[i - 1]);
  }
  if (trace.back() != ev.expected_final)
    return fail(kFailure, "fsm", "trace ends in " + to_string(trace.back()) + ", expected " +
                                     to_string(ev.expected_final));
  std::printf("OK states=%zu final=%s\n", trace.size(), to_string(trace.back()).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal cyclorotor vehicle simulator"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&o](CLI::App* sub) {
    sub->add_option("--mission", o.mission, "'builtin' or a mission JSON file")->capture_default_str();
    sub->add_flag("--aerial-only", o.aerial_only, "run only the aerial stretch of the mission");
  };
  const auto run_opts = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "config JSON file")->envname("CYCLOSIM_CONFIG");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--duration-limit", o.duration_limit, "simulated time limit, s");
    sub->add_option("--seed", o.seed, "reserved; runs are deterministic");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one mission and write the log and metrics");
  common(sim);
  run_opts(sim);
  sim->add_option("--controller", o.controller, "aerial controller")
      ->check(CLI::IsMember({"pid", "nmpc"}))
      ->capture_default_str();

  CLI::App* cmp = app.add_subcommand("compare", "run a mission under two aerial controllers");
  common(cmp);
  run_opts(cmp);
  cmp->add_option("--controller", o.controller, "baseline aerial controller")
      ->check(CLI::IsMember({"pid", "nmpc"}))
      ->capture_default_str();
  cmp->add_option("--candidate", o.candidate, "candidate aerial controller")
      ->check(CLI::IsMember({"pid", "nmpc"}))
      ->capture_default_str();

  CLI::App* val = app.add_subcommand("validate-fsm", "replay the mission event trace without dynamics");
  common(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return kOk;
    return fail(kUsage, "usage", e.what());
  }

  try {
    if (sim->parsed()) return simulate(o);
    if (cmp->parsed()) return compare(o);
    return validate_fsm(o);
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const InvalidArgument& e) {
    return fail(kParse, "invalid", e.what());
  } catch (const std::exception& e) {
    return fail(kFailure, "error", e.what());
  }
}
