// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Criteria 5-7 drive the cyclosim binary end to end.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cyclo/allocation.hpp"
#include "cyclo/dynamics.hpp"
#include "cyclo/fsm.hpp"
#include "cyclo/geom.hpp"
#include "cyclo/mission.hpp"
#include "cyclo/nmpc.hpp"

namespace fs = std::filesystem;
using namespace cyclo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1: geometry -----------------------------------------------------------

void geometry(Check& c) {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> any(-kPi, kPi), tilt(-1.4, 1.4);
  std::normal_distribution<double> n;
  double worst_orth = 0, worst_round = 0, worst_rates = 0;
  for (int i = 0; i < 2000; ++i) {
    const EulerAngles e{tilt(rng), tilt(rng), any(rng)};
    const Mat3 r = euler_to_rotation({any(rng), any(rng), any(rng)}).matrix();
    worst_orth = std::max(worst_orth, (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff());
    worst_orth = std::max(worst_orth, std::abs(r.determinant() - 1.0));
    const EulerAngles b = quat_to_euler(euler_to_quat(e)).angles;
    worst_round = std::max({worst_round, std::abs(b.roll - e.roll), std::abs(b.pitch - e.pitch),
                            std::abs(wrap_angle(b.yaw - e.yaw))});
    const Vec3 rates(n(rng), n(rng), n(rng));
    worst_rates =
        std::max(worst_rates, (body_rates_to_euler_rates(e, euler_rates_to_body_rates(e, rates)) - rates).norm());
  }
  c.expect(worst_orth <= 1e-12, "orthonormality " + fmt("%.3g", worst_orth));
  c.expect(worst_round <= 1e-10, "euler/quat round trip " + fmt("%.3g", worst_round));
  c.expect(worst_rates <= 1e-10, "rate map round trip " + fmt("%.3g", worst_rates));
  bool raised = false;
  try {
    body_rates_to_euler_rates({0.2, kPi / 2, 0.1}, {1, 0, 0});
  } catch (const GimbalSingularity&) {
    raised = true;
  }
  c.expect(raised, "no gimbal error at pitch = pi/2");
}

// ---- 2: dynamics -----------------------------------------------------------

void dynamics(Check& c) {
  const VehicleParams p;
  VehicleState hover;
  hover.position = {3, -1, 7};
  hover.attitude = yaw_quat(0.8);
  const AerialVector d = aerial_derivative(hover, {p.gravity, Vec3::Zero()}, p);
  c.expect(d == AerialVector::Zero(), "hover derivative not exactly zero");

  AerialVector x = VehicleState{}.pack();
  for (int i = 0; i < 1000; ++i) x = step_aerial(x, InputVector(0, 0, 0, 0), p, 1e-3);
  c.expect(std::abs(x[2] + 0.5 * p.gravity) <= 1e-6, "free fall z " + fmt("%.12g", x[2]));

  const double lambda = -2.0;
  const auto f = [lambda](const Pose2& s, int) { return Pose2(lambda * s); };
  const auto err = [&](double h) { return std::abs(step_rk4(f, Pose2(1, 0, 0), 0, h)[0] - std::exp(lambda * h)); };
  const double ratio = err(0.05) / err(0.025);
  c.expect(ratio >= 15.0, "rk4 error ratio " + fmt("%.3g", ratio));

  VehicleState spin;
  spin.body_rates = {1.5, -2.0, 0.7};
  x = spin.pack();
  double drift = 0;
  for (int i = 0; i < 5000; ++i) {
    x = step_aerial(x, InputVector(p.gravity, 0.01, -0.02, 0.005), p, 1e-3);
    drift = std::max(drift, std::abs(x.segment<4>(6).norm() - 1.0));
  }
  c.expect(drift < 1e-9, "quaternion norm drift " + fmt("%.3g", drift));

  std::mt19937 rng(202);
  std::uniform_real_distribution<double> thrust(5.0, 20.0), torque(-0.1, 0.1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const AerialInput u{thrust(rng), Vec3(torque(rng), torque(rng), torque(rng))};
    const AerialInput back = forward_mix(allocate(u, p), p);
    worst = std::max(worst, std::abs(back.thrust - u.thrust) / u.thrust);
    worst = std::max(worst, (back.torque - u.torque).norm() / std::max(u.torque.norm(), 1e-3));
  }
  c.expect(worst <= 1e-6, "allocation round trip " + fmt("%.3g", worst));
}

// ---- 3: NMPC ---------------------------------------------------------------

struct Instance {
  VehicleState x0;
  std::vector<AerialInput> u;
  std::vector<OutputVector> refs;
};

Instance random_instance(std::mt19937& rng, const NmpcConfig& cfg) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> a(cfg.accel_min + 0.5, cfg.accel_max - 0.5);
  Instance in;
  in.x0.position = {n(rng), n(rng), 5 + n(rng)};
  in.x0.velocity = 0.5 * Vec3(n(rng), n(rng), n(rng));
  in.x0.attitude = euler_to_quat({0.2 * n(rng), 0.2 * n(rng), n(rng)});
  in.x0.body_rates = 0.3 * Vec3(n(rng), n(rng), n(rng));
  for (int j = 0; j < cfg.horizon; ++j) {
    in.u.push_back({kGravity + 0.3 * a(rng), 0.005 * Vec3(n(rng), n(rng), n(rng))});
    in.refs.push_back({n(rng), n(rng), 5 + n(rng), n(rng)});
  }
  return in;
}

void check_solution(Check& c, const NmpcSolution& sol, const NmpcConfig& cfg, const std::string& tag) {
  for (const auto& u : sol.inputs) {
    const double a = u.thrust - kGravity;
    c.expect(a >= cfg.accel_min && a <= cfg.accel_max, tag + ": thrust outside box " + fmt("%.17g", a));
  }
  for (std::size_t i = 1; i < sol.predicted.size(); ++i) {
    const EulerAngles e = sol.predicted[i].euler();
    const double excess = std::max(std::abs(e.roll), std::abs(e.pitch)) - cfg.tilt_max;
    c.expect(excess <= 1e-3, tag + ": tilt excess " + fmt("%.3g", excess));
  }
}

void nmpc(Check& c) {
  const VehicleParams p;
  const NmpcConfig cfg;
  std::mt19937 rng(303);
  double worst_grad = 0;
  for (int t = 0; t < 20; ++t) {
    const Instance in = random_instance(rng, cfg);
    const Eigen::VectorXd g = cost_gradient(in.x0, in.u, in.refs, cfg, p);
    Eigen::VectorXd fd(g.size());
    for (int j = 0; j < cfg.horizon; ++j)
      for (int k = 0; k < 4; ++k) {
        auto up = in.u, um = in.u;
        const double h = 1e-6;
        (k == 0 ? up[j].thrust : up[j].torque[k - 1]) += h;
        (k == 0 ? um[j].thrust : um[j].torque[k - 1]) -= h;
        fd[4 * j + k] = (objective(in.x0, up, in.refs, cfg, p) - objective(in.x0, um, in.refs, cfg, p)) / (2 * h);
      }
    worst_grad = std::max(worst_grad, (g - fd).norm() / fd.norm());

    const NmpcSolution sol = solve(in.x0, in.refs, in.u, cfg, p);
    NmpcConfig measured = cfg;
    measured.tilt_penalty = sol.tilt_weight;
    c.expect(sol.cost <= objective(in.x0, in.u, in.refs, measured, p), "cost increased over warm start");
    check_solution(c, sol, cfg, "random " + std::to_string(t));
  }
  c.expect(worst_grad <= 1e-4, "gradient relative error " + fmt("%.3g", worst_grad));

  VehicleState h;
  h.position = {1, 2, 10};
  const NmpcSolution hov = solve(h, std::vector<OutputVector>(cfg.horizon, OutputVector(1, 2, 10, 0)), std::nullopt, cfg, p);
  c.expect(std::abs(hov.inputs.front().thrust - kGravity) <= 1e-3 && hov.inputs.front().torque.norm() <= 1e-3,
           "hover fixed point not recovered");

  // Closed loop on large steps, where the boxes bind.
  for (const OutputVector& target : {OutputVector(3, -2, 12, 0.5), OutputVector(-6, 4, 4, -1.0), OutputVector(0, 0, 30, 0)}) {
    VehicleState s;
    s.position = {0, 0, 10};
    NmpcControllerState st;
    const std::vector<OutputVector> refs(cfg.horizon, target);
    for (int k = 0; k < 40; ++k) {
      const NmpcStep step = control_step(st, s, refs, cfg, p);
      check_solution(c, step.solution, cfg, "step");
      st = step.next;
      for (int i = 0; i < 50; ++i) s = step_aerial(s, step.input, p, 1e-3);
    }
  }
}

// ---- 4: FSM ----------------------------------------------------------------

void fsm(Check& c) {
  for (const auto& s : all_states())
    for (const auto& e : event_alphabet()) {
      const ModeState n = step_fsm(s, e);
      c.expect(valid(n), "illegal state from " + to_string(s) + " via " + to_string(e));
      c.expect(n.gear == required_gear(n.medium), "gear invariant broken after " + to_string(s) + " + " + to_string(e));
      // Second-level reachability: everything reachable in two steps stays legal.
      for (const auto& e2 : event_alphabet()) c.expect(valid(step_fsm(n, e2)), "illegal two-step state");
    }
  using M = Medium;
  using S = SubState;
  const std::vector<ModeState> expected = {
      make_state(M::kTerrestrial, S::kStatic), make_state(M::kTerrestrial, S::kDriving),
      make_state(M::kTerrestrial, S::kStatic), make_state(M::kAerial, S::kStatic),
      make_state(M::kAerial, S::kTakeoff),     make_state(M::kAerial, S::kHovering),
      make_state(M::kAerial, S::kLanding),     make_state(M::kAerial, S::kHovering),
      make_state(M::kAerial, S::kLanding),     make_state(M::kAquatic, S::kStatic),
      make_state(M::kAquatic, S::kDriving)};
  const MissionEvents ev = mission_events(builtin_mission());
  c.expect(!ev.issue, "builtin mission has an issue");
  const auto trace = replay(start_state(builtin_mission()), ev.events);
  c.expect(trace == expected, "mission trace differs from the expected 11 states");
}

// ---- 5-7: CLI --------------------------------------------------------------

struct CliRun {
  int code = -1;
  double wall = 0;
  fs::path dir;
};

CliRun simulate(const std::string& controller, const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cmd = std::string(CYCLOSIM_PATH) + " simulate --mission builtin --controller " + controller +
                          " --out " + dir.string() + " > " + (dir / "stdout.txt").string() + " 2>&1";
  CliRun r;
  r.dir = dir;
  const auto t0 = Clock::now();
  const int st = std::system(cmd.c_str());
  r.wall = seconds_since(t0);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::map<std::string, std::string> read_kv(const fs::path& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

double num(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  return it == kv.end() ? std::nan("") : std::atof(it->second.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path kWork = fs::temp_directory_path() / "cyclo_acceptance";

void mission_run(Check& c, const std::string& controller) {
  const CliRun r = simulate(controller, kWork / controller);
  c.expect(r.code == 0, controller + ": exit " + std::to_string(r.code));
  c.expect(r.wall < 60.0, controller + ": wall clock " + fmt("%.1f s", r.wall));
  const auto kv = read_kv(r.dir / "metrics.txt");
  c.expect(kv.count("status") && kv.at("status") == "completed", controller + ": status not completed");
  c.expect(num(kv, "segments_completed") == 8, controller + ": segments completed " +
                                                   fmt("%g", num(kv, "segments_completed")));
  for (int i = 0; i < 8; ++i) {
    const std::string p = "seg" + std::to_string(i) + ".";
    c.expect(num(kv, p + "completed") == 1, controller + ": segment " + std::to_string(i) + " incomplete");
    c.expect(num(kv, p + "arrival_error") <= 0.5,
             controller + ": segment " + std::to_string(i) + " arrival error " + fmt("%.3g", num(kv, p + "arrival_error")));
  }
  c.expect(num(kv, "total_time") < 600.0, controller + ": simulated time " + fmt("%.1f", num(kv, "total_time")));
}

void full_mission(Check& c) {
  mission_run(c, "pid");
  mission_run(c, "nmpc");
}

void comparison(Check& c) {
  for (const char* ctl : {"pid", "nmpc"})
    if (!fs::exists(kWork / ctl / "metrics.txt")) simulate(ctl, kWork / ctl);
  const auto pid = read_kv(kWork / "pid" / "metrics.txt");
  const auto mpc = read_kv(kWork / "nmpc" / "metrics.txt");
  const double os_pid = num(pid, "takeoff_overshoot_pct"), os_mpc = num(mpc, "takeoff_overshoot_pct");
  const double rms_pid = num(pid, "aerial_rms"), rms_mpc = num(mpc, "aerial_rms");
  std::printf("  takeoff z overshoot: pid %.3f%%  nmpc %.3f%%\n", os_pid, os_mpc);
  std::printf("  aerial RMS error:    pid %.4f m  nmpc %.4f m\n", rms_pid, rms_mpc);
  c.expect(os_mpc <= os_pid, "nmpc takeoff overshoot exceeds pid");
  c.expect(rms_mpc <= rms_pid, "nmpc aerial RMS exceeds pid");
}

void determinism(Check& c) {
  const CliRun a = simulate("pid", kWork / "det_a");
  const CliRun b = simulate("pid", kWork / "det_b");
  c.expect(a.code == 0 && b.code == 0, "simulate failed");
  const std::string la = slurp(a.dir / "log.csv"), lb = slurp(b.dir / "log.csv");
  c.expect(!la.empty(), "empty log");
  c.expect(la == lb, "logs differ");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;  // s, wall clock
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria = {
      {"geometry suite", 1.0, geometry},
      {"dynamics oracles", 5.0, dynamics},
      {"nmpc solver suite", 30.0, nmpc},
      {"fsm exhaustive check", 1.0, fsm},
      {"full multimodal mission (pid, nmpc)", 120.0, full_mission},
      {"controller comparison (nmpc vs pid)", 1e9, comparison},
      {"determinism (byte-identical logs)", 1e9, determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto t0 = Clock::now();
    try {
      criteria[i].body(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double wall = seconds_since(t0);
    if (wall >= criteria[i].budget) c.failures.push_back("runtime " + fmt("%.2f s", wall));
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %zu %s (%.2f s)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name, wall);
    for (const auto& f : c.failures) std::printf("  - %s\n", f.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(kWork);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
