#ifndef CYCLO_NMPC_HPP_
#define CYCLO_NMPC_HPP_

// Nonlinear MPC for the aerial mode.
//
// Decision variables are N held inputs u_j = (c_j, eta_j). The model is the
// rigid-body plant integrated with one RK4 step per control period. The
// objective is
//
//   sum_j |y_{j+1} - yref_j|^2_Q + |u_j - u_hover|^2_R + w * tilt_excess^2
//
// where y = (x, y, z, yaw) of the predicted state after applying u_j, the
// input term is measured from the hover input (c = g, eta = 0), and the last
// term is a quadratic penalty on roll/pitch beyond the tilt bound. The
// collective thrust is hard-boxed, c - g in [accel_min, accel_max], and each
// torque is boxed to what the rotors and servo can produce.
//
// The solver is a projected Gauss-Newton method: the Gauss-Newton step is
// taken on the variables not held at an active bound, followed by a
// projected Armijo backtracking search. Sensitivities are propagated
// forward through the RK4 step analytically.
//
// The tilt penalty starts at the configured weight w. While the prediction
// leaves the tilt bound by more than kTiltTolerance, each angle's bound is
// tightened by its remaining overshoot (an augmented Lagrangian multiplier
// step) once descent stalls or after kTiltStageIters iterations, and w is
// raised tenfold when the overshoot is not shrinking. Descent continues from
// the current iterate within the same iteration budget.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cyclo/dynamics.hpp"
#include "cyclo/errors.hpp"
#include "cyclo/geom.hpp"
#include "cyclo/params.hpp"

namespace cyclo {

struct NmpcConfig {
  int horizon = 15;
  double period = 0.05;
  Vec4 q{10.0, 10.0, 10.0, 2.0};  // x, y, z, yaw
  Vec4 r{0.1, 0.5, 0.5, 0.5};     // c, eta_x, eta_y, eta_z
  double accel_min = -5.0;
  double accel_max = 15.0;
  Vec3 torque_max{5.0, 5.0, 0.5};  // |eta| bound per axis, N m
  double tilt_max = kPi / 6;
  double tilt_penalty = 1e3;
  int max_iters = 50;
  double tol = 1e-6;

  void validate() const {
    if (horizon < 2) throw InvalidArgument("nmpc.horizon must be >= 2");
    if (!(period > 0.0 && period <= 0.05)) throw InvalidArgument("nmpc.period must be in (0, 0.05]");
    if (!(q.allFinite() && (q.array() >= 0).all())) throw InvalidArgument("nmpc.q_* must be >= 0");
    if (!(r.allFinite() && (r.array() > 0).all())) throw InvalidArgument("nmpc.r_* must be > 0");
    if (!(accel_min < accel_max)) throw InvalidArgument("nmpc.accel_min must be < accel_max");
    if (!(torque_max.allFinite() && (torque_max.array() > 0).all()))
      throw InvalidArgument("nmpc.torque_max_* must be finite and > 0");
    if (!(tilt_max > 0.0 && tilt_max < kPi / 2)) throw InvalidArgument("nmpc.tilt_max must be in (0, pi/2)");
    if (!(tilt_penalty >= 0.0)) throw InvalidArgument("nmpc.tilt_penalty must be >= 0");
    if (max_iters < 1) throw InvalidArgument("nmpc.max_iters must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("nmpc.tol must be > 0");
  }
};

/// Tracked output (x, y, z, yaw).
using OutputVector = Eigen::Vector4d;

struct NmpcSolution {
  std::vector<AerialInput> inputs;
  std::vector<VehicleState> predicted;  // N + 1 states, predicted[0] = x0
  double cost = 0.0;                    // objective including tilt penalty
  double tilt_weight = 0.0;             // penalty weight the cost is measured with
  int iterations = 0;
  bool converged = false;
};

inline OutputVector output_of(const AerialVector& x) {
  const EulerAngles e = euler_with_jacobian(x.segment<4>(6), nullptr);
  return {x[0], x[1], x[2], e.yaw};
}

/// Predicted outputs y(k+1..k+N | k) for a held-input sequence.
inline std::vector<OutputVector> rollout(const VehicleState& x0, const std::vector<AerialInput>& inputs,
                                         const NmpcConfig& cfg, const VehicleParams& p) {
  if (static_cast<int>(inputs.size()) != cfg.horizon) throw InvalidArgument("rollout: inputs length must equal N");
  std::vector<OutputVector> out;
  out.reserve(inputs.size());
  AerialVector x = x0.pack();
  for (const auto& u : inputs) {
    x = step_aerial(x, u.pack(), p, cfg.period);
    out.push_back(output_of(x));
  }
  return out;
}

/// Tracking + effort cost over the horizon (no tilt penalty).
inline double evaluate_cost(const std::vector<OutputVector>& outputs, const std::vector<OutputVector>& refs,
                            const std::vector<AerialInput>& inputs, const NmpcConfig& cfg,
                            double gravity = kGravity) {
  if (outputs.size() != refs.size() || outputs.size() != inputs.size())
    throw InvalidArgument("evaluate_cost: sequence lengths differ");
  double j = 0.0;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    OutputVector e = outputs[k] - refs[k];
    e[3] = wrap_angle(e[3]);
    j += e.dot(cfg.q.cwiseProduct(e));
    const InputVector du = inputs[k].pack() - InputVector(gravity, 0, 0, 0);
    j += du.dot(cfg.r.cwiseProduct(du));
  }
  return j;
}

// Acceptable roll/pitch excursion past the bound in a returned prediction,
// and the ceiling for the tilt weight while chasing it.
inline constexpr double kTiltTolerance = 5e-4;
inline constexpr double kMaxTiltWeight = 1e8;
inline constexpr int kTiltStageIters = 6;

namespace detail {

inline constexpr int kResidualsPerStep = 10;

struct Linearization {
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;  // empty unless requested
  std::vector<AerialVector> states;
  double objective = 0.0;
  // Roll and pitch of predicted states 1..N, interleaved, the bound each is
  // penalized against, and their sensitivities (filled with the jacobian).
  Eigen::VectorXd tilt;
  Eigen::VectorXd tilt_bound;
  Eigen::MatrixXd tilt_jacobian;
};

/// Stacked residual vector whose squared norm is the objective. A shift,
/// one entry per predicted roll and pitch, tightens the tilt bound for that
/// angle; the solver uses it as a multiplier estimate.
inline Linearization linearize(const AerialVector& x0, const Eigen::VectorXd& u, const std::vector<OutputVector>& refs,
                               const NmpcConfig& cfg, const VehicleParams& p, bool with_jacobian,
                               const Eigen::VectorXd* shift = nullptr) {
  const int n = cfg.horizon;
  const int nu = 4 * n;
  Linearization lin;
  lin.residual.setZero(kResidualsPerStep * n);
  lin.tilt.setZero(2 * n);
  lin.tilt_bound.setConstant(2 * n, cfg.tilt_max);
  if (shift) lin.tilt_bound -= *shift;
  if (with_jacobian) {
    lin.jacobian.setZero(kResidualsPerStep * n, nu);
    lin.tilt_jacobian.setZero(2 * n, nu);
  }
  lin.states.reserve(n + 1);
  lin.states.push_back(x0);

  const Vec4 sq = cfg.q.cwiseSqrt();
  const Vec4 sr = cfg.r.cwiseSqrt();
  const double sw = std::sqrt(cfg.tilt_penalty);

  Eigen::Matrix<double, 13, Eigen::Dynamic> sens;
  if (with_jacobian) sens.setZero(13, nu);
  AerialStateJacobian ax;
  AerialInputJacobian bu;

  AerialVector x = x0;
  for (int j = 0; j < n; ++j) {
    const InputVector uj(u[4 * j] + p.gravity, u[4 * j + 1], u[4 * j + 2], u[4 * j + 3]);
    const int cols = 4 * (j + 1);
    if (with_jacobian) {
      x = step_aerial_with_jacobians(x, uj, p, cfg.period, ax, bu);
      sens.leftCols(cols) = (ax * sens.leftCols(cols)).eval();
      sens.block<13, 4>(0, 4 * j) += bu;
    } else {
      x = step_aerial(x, uj, p, cfg.period);
    }
    lin.states.push_back(x);

    Eigen::Matrix<double, 3, 4> de;
    const EulerAngles e = euler_with_jacobian(x.segment<4>(6), with_jacobian ? &de : nullptr);
    const int row = kResidualsPerStep * j;
    const OutputVector& ref = refs[j];

    for (int a = 0; a < 3; ++a) lin.residual[row + a] = sq[a] * (x[a] - ref[a]);
    lin.residual[row + 3] = sq[3] * wrap_angle(e.yaw - ref[3]);
    for (int a = 0; a < 4; ++a) lin.residual[row + 4 + a] = sr[a] * u[4 * j + a];
    lin.tilt[2 * j] = e.roll;
    lin.tilt[2 * j + 1] = e.pitch;
    const double excess_roll = std::copysign(std::max(0.0, std::abs(e.roll) - lin.tilt_bound[2 * j]), e.roll);
    const double excess_pitch = std::copysign(std::max(0.0, std::abs(e.pitch) - lin.tilt_bound[2 * j + 1]), e.pitch);
    lin.residual[row + 8] = sw * excess_roll;
    lin.residual[row + 9] = sw * excess_pitch;

    if (with_jacobian) {
      auto jb = lin.jacobian.block(row, 0, kResidualsPerStep, cols);
      for (int a = 0; a < 3; ++a) jb.row(a) = sq[a] * sens.row(a).head(cols);
      jb.row(3) = sq[3] * de.row(2) * sens.middleRows<4>(6).leftCols(cols);
      for (int a = 0; a < 4; ++a) lin.jacobian(row + 4 + a, 4 * j + a) = sr[a];
      auto tj = lin.tilt_jacobian.block(2 * j, 0, 2, cols);
      tj = de.topRows<2>() * sens.middleRows<4>(6).leftCols(cols);
      if (excess_roll != 0.0) jb.row(8) = sw * tj.row(0);
      if (excess_pitch != 0.0) jb.row(9) = sw * tj.row(1);
    }
  }
  lin.objective = lin.residual.squaredNorm();
  return lin;
}

/// Largest roll/pitch excursion beyond the bound over predicted states 1..N.
inline double max_tilt_excess(const std::vector<AerialVector>& states, double tilt_max) {
  double worst = 0.0;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const EulerAngles e = euler_with_jacobian(states[i].segment<4>(6), nullptr);
    worst = std::max({worst, std::abs(e.roll) - tilt_max, std::abs(e.pitch) - tilt_max});
  }
  return worst;
}

inline std::vector<OutputVector> pad_references(const std::vector<OutputVector>& refs, int n) {
  if (refs.empty()) throw InvalidArgument("nmpc: empty reference horizon");
  std::vector<OutputVector> out(refs.begin(), refs.begin() + std::min<std::size_t>(refs.size(), n));
  while (static_cast<int>(out.size()) < n) out.push_back(out.back());
  return out;
}

/// Stack absolute inputs into hover-relative decision variables.
inline Eigen::VectorXd stack(const std::vector<AerialInput>& inputs, double gravity) {
  Eigen::VectorXd u(4 * inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    u.segment<4>(4 * j) = inputs[j].pack();
    u[4 * j] -= gravity;
  }
  return u;
}

inline std::vector<AerialInput> unstack(const Eigen::VectorXd& u, double gravity) {
  std::vector<AerialInput> out(u.size() / 4);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].thrust = u[4 * j] + gravity;
    out[j].torque = u.segment<3>(4 * j + 1);
  }
  return out;
}

/// Round c toward the interior until c - g lands inside [lo, hi] in
/// floating point, so the box holds exactly for callers that recompute it.
inline double snap_thrust(double c, double gravity, double lo, double hi) {
  while (c - gravity > hi) c = std::nextafter(c, -INFINITY);
  while (c - gravity < lo) c = std::nextafter(c, INFINITY);
  return c;
}

inline double lower_bound(int i, const NmpcConfig& cfg) {
  return i % 4 == 0 ? cfg.accel_min : -cfg.torque_max[i % 4 - 1];
}

inline double upper_bound(int i, const NmpcConfig& cfg) {
  return i % 4 == 0 ? cfg.accel_max : cfg.torque_max[i % 4 - 1];
}

inline void project(Eigen::VectorXd& u, const NmpcConfig& cfg) {
  for (int i = 0; i < u.size(); ++i) u[i] = std::clamp(u[i], lower_bound(i, cfg), upper_bound(i, cfg));
}

/// Gauss-Newton step on the free variables. The tilt penalty is kept in its
/// piecewise-quadratic form, w max(0, |a + g d| - bound)^2 per angle, and
/// the resulting convex model is minimized by re-solving with the rows that
/// the linearized angles leave outside the bound, so the step does not swing
/// the attitude past the bound unseen. Returns the iterate with the lowest
/// model value; zero if none improves on d = 0.
inline Eigen::VectorXd gauss_newton_step(const Linearization& lin, const std::vector<int>& free_idx, double w) {
  const int nu = static_cast<int>(lin.jacobian.cols());
  const int nf = static_cast<int>(free_idx.size());
  const int nt = static_cast<int>(lin.tilt.size());
  Eigen::VectorXd step = Eigen::VectorXd::Zero(nu);
  if (nf == 0) return step;

  // Tracking and effort rows only.
  Eigen::MatrixXd jf(lin.jacobian.rows(), nf);
  Eigen::MatrixXd gf(nt, nf);
  for (int a = 0; a < nf; ++a) {
    jf.col(a) = lin.jacobian.col(free_idx[a]);
    gf.col(a) = lin.tilt_jacobian.col(free_idx[a]);
  }
  Eigen::VectorXd r = lin.residual;
  for (int row = 0; row < r.size(); row += kResidualsPerStep) {
    r.segment<2>(row + 8).setZero();
    jf.middleRows(row + 8, 2).setZero();
  }
  const Eigen::MatrixXd h0 = jf.transpose() * jf;
  const Eigen::VectorXd b0 = jf.transpose() * r;
  const Eigen::VectorXd& bound = lin.tilt_bound;

  const auto model = [&](const Eigen::VectorXd& d) {
    double m = (r + jf * d).squaredNorm();
    const Eigen::VectorXd a = lin.tilt + gf * d;
    for (int i = 0; i < nt; ++i) m += w * std::pow(std::max(0.0, std::abs(a[i]) - bound[i]), 2);
    return m;
  };

  Eigen::VectorXd d = Eigen::VectorXd::Zero(nf);
  Eigen::VectorXd best = d;
  double best_model = model(d);
  std::vector<int> side(nt, 0), prev;
  for (int pass = 0; pass < 12; ++pass) {
    const Eigen::VectorXd a = lin.tilt + gf * d;
    prev = side;
    for (int i = 0; i < nt; ++i) side[i] = a[i] > bound[i] ? 1 : (a[i] < -bound[i] ? -1 : 0);
    if (pass > 0 && side == prev) break;
    Eigen::MatrixXd h = h0;
    Eigen::VectorXd b = b0;
    for (int i = 0; i < nt; ++i) {
      if (side[i] == 0 || w <= 0.0) continue;
      h.noalias() += w * gf.row(i).transpose() * gf.row(i);
      b.noalias() += w * (lin.tilt[i] - side[i] * bound[i]) * gf.row(i).transpose();
    }
    h.diagonal() += 1e-8 * h.diagonal().cwiseMax(1e-6);
    d = h.ldlt().solve(-b);
    const double m = model(d);
    if (m < best_model) {
      best_model = m;
      best = d;
    }
  }
  for (int a = 0; a < nf; ++a) step[free_idx[a]] = best[a];
  return step;
}

}  // namespace detail

/// Objective (tracking + effort + tilt penalty) of an input sequence.
inline double objective(const VehicleState& x0, const std::vector<AerialInput>& inputs,
                        const std::vector<OutputVector>& refs, const NmpcConfig& cfg, const VehicleParams& p) {
  if (static_cast<int>(inputs.size()) != cfg.horizon) throw InvalidArgument("objective: inputs length must equal N");
  return detail::linearize(x0.pack(), detail::stack(inputs, p.gravity), detail::pad_references(refs, cfg.horizon),
                           cfg, p, false)
      .objective;
}

/// Gradient of objective() with respect to the stacked inputs
/// (c_0, eta_0, c_1, eta_1, ...).
inline Eigen::VectorXd cost_gradient(const VehicleState& x0, const std::vector<AerialInput>& inputs,
                                     const std::vector<OutputVector>& refs, const NmpcConfig& cfg,
                                     const VehicleParams& p) {
  if (static_cast<int>(inputs.size()) != cfg.horizon)
    throw InvalidArgument("cost_gradient: inputs length must equal N");
  const auto lin = detail::linearize(x0.pack(), detail::stack(inputs, p.gravity),
                                     detail::pad_references(refs, cfg.horizon), cfg, p, true);
  return 2.0 * lin.jacobian.transpose() * lin.residual;
}

inline std::vector<AerialInput> hover_inputs(int n, double gravity = kGravity) {
  return std::vector<AerialInput>(n, AerialInput{gravity, Vec3::Zero()});
}

/// Solve the finite-horizon problem from x0. References shorter than N are
/// padded by holding the last one.
inline NmpcSolution solve(const VehicleState& x0, const std::vector<OutputVector>& references,
                          const std::optional<std::vector<AerialInput>>& warm_start, const NmpcConfig& cfg,
                          const VehicleParams& p) {
  const int n = cfg.horizon;
  const auto refs = detail::pad_references(references, n);
  if (warm_start && static_cast<int>(warm_start->size()) != n)
    throw InvalidArgument("solve: warm start length must equal N");

  Eigen::VectorXd u = detail::stack(warm_start ? *warm_start : hover_inputs(n, p.gravity), p.gravity);
  detail::project(u, cfg);
  const AerialVector x = x0.pack();

  const Eigen::VectorXd u_warm = u;
  NmpcConfig wcfg = cfg;
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(2 * n);
  auto lin = detail::linearize(x, u, refs, wcfg, p, true, &shift);
  if (!std::isfinite(lin.objective)) throw SolverFailure("nmpc: non-finite cost at warm start", 0, lin.objective);

  NmpcSolution sol;
  const int nu = 4 * n;
  int it = 0;
  double last_excess = INFINITY;
  for (;;) {
    bool stationary = false;
    bool stage_done = false;
    const int stage_start = it;
    for (; it < cfg.max_iters; ++it) {
      if (wcfg.tilt_penalty > 0.0 && it - stage_start >= kTiltStageIters &&
          detail::max_tilt_excess(lin.states, cfg.tilt_max) > kTiltTolerance) {
        stage_done = true;
        break;
      }
      if (lin.objective <= 1e-14) {
        stationary = true;
        break;
      }
      const Eigen::VectorXd grad = 2.0 * lin.jacobian.transpose() * lin.residual;

      std::vector<int> free_idx;
      free_idx.reserve(nu);
      for (int i = 0; i < nu; ++i) {
        const bool at_lo = u[i] <= detail::lower_bound(i, cfg) + 1e-12 && grad[i] > 0.0;
        const bool at_hi = u[i] >= detail::upper_bound(i, cfg) - 1e-12 && grad[i] < 0.0;
        if (!at_lo && !at_hi) free_idx.push_back(i);
      }
      const Eigen::VectorXd step = detail::gauss_newton_step(lin, free_idx, wcfg.tilt_penalty);

      // Projected Armijo backtracking along u + alpha * step.
      double alpha = 1.0;
      bool accepted = false;
      Eigen::VectorXd trial;
      detail::Linearization trial_lin;
      for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
        trial = u + alpha * step;
        detail::project(trial, cfg);
        trial_lin = detail::linearize(x, trial, refs, wcfg, p, false, &shift);
        if (!std::isfinite(trial_lin.objective)) continue;
        if (trial_lin.objective <= lin.objective + 1e-4 * grad.dot(trial - u)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // No acceptable step at any damping: stationary up to precision.
        stationary = true;
        ++it;
        break;
      }
      const double decrease = lin.objective - trial_lin.objective;
      u = trial;
      lin = detail::linearize(x, u, refs, wcfg, p, true, &shift);
      if (!std::isfinite(lin.objective))
        throw SolverFailure("nmpc: non-finite cost during descent", it, trial_lin.objective);
      if (decrease <= cfg.tol * std::max(lin.objective + decrease, 1e-12)) {
        stationary = true;
        ++it;
        break;
      }
    }
    const double excess = detail::max_tilt_excess(lin.states, cfg.tilt_max);
    const bool tilt_ok = excess <= kTiltTolerance;
    if ((!stationary && !stage_done) || tilt_ok || it >= cfg.max_iters || wcfg.tilt_penalty <= 0.0) {
      sol.converged = stationary && tilt_ok;
      break;
    }
    // Multiplier step: tighten the bound of each angle by what it still
    // overshoots, and raise the weight if that is not closing the gap.
    for (int i = 0; i < 2 * n; ++i)
      shift[i] = std::clamp(shift[i] + std::abs(lin.tilt[i]) - cfg.tilt_max, 0.0, 0.5 * cfg.tilt_max);
    if (excess > 0.25 * last_excess && wcfg.tilt_penalty < kMaxTiltWeight) wcfg.tilt_penalty *= 10.0;
    last_excess = excess;
    lin = detail::linearize(x, u, refs, wcfg, p, true, &shift);
  }
  sol.iterations = std::max(it, 1);

  // The shifts are internal; cost is reported against the plain bound. The
  // weight used is the lowest at which the result does not score worse than
  // the warm start, unless the warm start is within the bound and still wins.
  NmpcConfig rcfg = cfg;
  rcfg.tilt_penalty = wcfg.tilt_penalty;
  lin = detail::linearize(x, u, refs, rcfg, p, false);
  auto warm_lin = detail::linearize(x, u_warm, refs, rcfg, p, false);
  const double own_excess = detail::max_tilt_excess(lin.states, cfg.tilt_max);
  while (warm_lin.objective < lin.objective && rcfg.tilt_penalty > 0.0 && rcfg.tilt_penalty < kMaxTiltWeight &&
         detail::max_tilt_excess(warm_lin.states, cfg.tilt_max) > std::max(own_excess, 0.0)) {
    rcfg.tilt_penalty *= 10.0;
    lin = detail::linearize(x, u, refs, rcfg, p, false);
    warm_lin = detail::linearize(x, u_warm, refs, rcfg, p, false);
  }
  if (warm_lin.objective < lin.objective) {
    u = u_warm;
    lin = warm_lin;
    sol.converged = false;
  }
  sol.tilt_weight = rcfg.tilt_penalty;

  sol.inputs = detail::unstack(u, p.gravity);
  for (auto& in : sol.inputs) in.thrust = detail::snap_thrust(in.thrust, p.gravity, cfg.accel_min, cfg.accel_max);
  sol.cost = lin.objective;
  sol.predicted.reserve(lin.states.size());
  for (const auto& s : lin.states) sol.predicted.push_back(VehicleState::unpack(s));
  return sol;
}

struct NmpcControllerState {
  std::optional<std::vector<AerialInput>> warm_start;
};

struct NmpcStep {
  AerialInput input;
  NmpcSolution solution;
  NmpcControllerState next;
};

/// One receding-horizon update: solve from the measured state, apply the
/// first input, and keep the solution for warm-starting the next call. The
/// next warm start is whichever of the stored sequence and its one-step
/// shift scores lower from the new state.
inline NmpcStep control_step(const NmpcControllerState& state, const VehicleState& x0,
                             const std::vector<OutputVector>& references, const NmpcConfig& cfg,
                             const VehicleParams& p) {
  std::optional<std::vector<AerialInput>> warm;
  if (state.warm_start && static_cast<int>(state.warm_start->size()) == cfg.horizon) {
    const auto& prev = *state.warm_start;
    std::vector<AerialInput> shifted(prev.begin() + 1, prev.end());
    shifted.push_back(prev.back());
    const double j_prev = objective(x0, prev, references, cfg, p);
    const double j_shift = objective(x0, shifted, references, cfg, p);
    warm = (j_shift <= j_prev) ? std::move(shifted) : prev;
  }
  NmpcStep out;
  out.solution = solve(x0, references, warm, cfg, p);
  out.input = out.solution.inputs.front();
  out.next.warm_start = out.solution.inputs;
  return out;
}

}  // namespace cyclo

#endif  // CYCLO_NMPC_HPP_
