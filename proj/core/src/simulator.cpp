#include "lexctrl/simulator.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace lexctrl {
namespace {

void maybe_dump(const StepHooks* hooks, const Hierarchy& h, long cycle, const char* tag) {
  if (!hooks || hooks->dump_dir.empty()) return;
  std::filesystem::create_directories(hooks->dump_dir);
  std::ofstream os(std::filesystem::path(hooks->dump_dir) /
                   ("hlsp_" + std::to_string(cycle) + "_" + tag + ".txt"));
  dump_hierarchy(h, os);
}

}  // namespace

int Scenario::steps() const { return static_cast<int>(std::ceil(duration / dt - 1e-9)); }

void Scenario::validate() const {
  if (!(dt > 0.0) || !(duration > dt))
    throw ConfigError("scenario: need dt > 0 and duration > dt");
  if (q0.size() != chain.dof() || qd0.size() != chain.dof())
    throw ConfigError("scenario: initial state size disagrees with the chain");
  if (tasks.empty()) throw ConfigError("scenario: no tasks");
  if (method == Method::kLm && formulation != Formulation::kAcc)
    throw ConfigError("scenario: the LM method is acceleration-based");
  if (method == Method::kNewtonAH && formulation != Formulation::kVel)
    throw ConfigError("scenario: the Newton method is velocity-based");
  if (!(mu >= 0.0)) throw ConfigError("scenario: mu must be nonnegative");
}

ControlState make_initial_state(const Scenario& scenario) {
  scenario.validate();
  ControlState state;
  state.dt = scenario.dt;
  state.q = scenario.q0;
  state.qd = scenario.qd0;
  state.nu = scenario.nu_scale * scenario.dt * scenario.dt;
  state.eps = scenario.eps;
  return state;
}

LogRow step(const Scenario& scenario, ControlState& state, HlspSolver& solver,
            const StepHooks* hooks) {
  const int n = scenario.chain.dof();
  const double dt = scenario.dt;
  const bool vel = scenario.formulation == Formulation::kVel;

  AssembledHierarchy ah = assemble_hierarchy(scenario.tasks, scenario.chain, state,
                                             scenario.formulation, scenario.method, scenario.mu);
  const int nlevels = ah.hierarchy.num_levels();
  if (state.mode.empty()) state.mode.assign(nlevels, Mode::kGaussNewton);
  if (state.cycle == 0) maybe_dump(hooks, ah.hierarchy, state.cycle, "initial");

  const auto t0 = std::chrono::steady_clock::now();
  const HlspSolution sol = solver.solve(ah.hierarchy);
  const auto t1 = std::chrono::steady_clock::now();

  if (sol.status != SolveStatus::kOptimal) {
    maybe_dump(hooks, ah.hierarchy, state.cycle, "failed");
    throw SolverFailure("active-set iteration limit at t = " + std::to_string(state.t));
  }

  LogRow row;
  row.t = state.t;
  row.q = state.q;
  row.qd = state.qd;
  if (vel) {
    const Eigen::VectorXd qd_next = sol.x.head(n);
    row.qdd = (qd_next - state.qd) / dt;
    row.tau = sol.x.tail(n) / dt;
  } else {
    row.qdd = sol.x.head(n);
    row.tau = sol.x.tail(n);
  }
  row.wnorm.resize(nlevels);
  row.mode.resize(nlevels);
  const double w_scale = vel ? 1.0 : dt;  // report slacks on the control (velocity) scale
  for (int l = 0; l < nlevels; ++l) {
    row.wnorm[l] = w_scale * sol.slacks[l].head(ah.meta[l].task_rows).norm();
    row.mode[l] = state.mode[l] == Mode::kNewton ? 1 : 0;
  }
  row.as_iterations = sol.iterations;
  row.solve_us = std::chrono::duration<double, std::micro>(t1 - t0).count();

  // Switch and curvature memory for the next cycle.
  state.residual.resize(nlevels);
  for (int l = 0; l < nlevels; ++l) {
    const double w = w_scale * sol.slacks[l].head(ah.meta[l].task_rows).norm();
    state.residual[l] = 0.5 * w * w;
  }
  state.lambda_curv = curvature_multipliers(sol, dt);
  state.prev_level_rows.resize(nlevels);
  for (int l = 0; l < nlevels; ++l) state.prev_level_rows[l] = ah.hierarchy.levels[l].rows();
  state.has_memory = true;
  if (scenario.method == Method::kNewtonAH) {
    for (int l = 0; l < nlevels; ++l) {
      if (!ah.meta[l].augmentable || state.cycle + 1 < 2)
        state.mode[l] = Mode::kGaussNewton;
      else
        state.mode[l] = newton_switch(state.residual[l], state.nu);
    }
  }

  // Positions integrate the pre-step velocity.
  const Eigen::VectorXd q_next = state.q + dt * state.qd;
  state.qd = vel ? Eigen::VectorXd(sol.x.head(n)) : Eigen::VectorXd(state.qd + dt * row.qdd);
  state.q = q_next;
  state.cycle += 1;
  state.t = static_cast<double>(state.cycle) * dt;
  return row;
}

RunResult run_scenario(const Scenario& scenario, const StepHooks* hooks) {
  scenario.validate();
  RunResult result;
  result.log.njoints = scenario.chain.dof();
  ControlState state = make_initial_state(scenario);
  HlspSolver solver;
  const int steps = scenario.steps();
  result.log.rows.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    try {
      result.log.rows.push_back(step(scenario, state, solver, hooks));
    } catch (const SolverFailure& e) {
      result.solver_failed = true;
      result.message = e.what();
      break;
    }
    if (k == 0) result.log.nlevels = static_cast<int>(result.log.rows[0].wnorm.size());
  }
  if (!result.log.rows.empty())
    result.log.nlevels = static_cast<int>(result.log.rows[0].wnorm.size());
  return result;
}

double closed_form_point_mass(double m, double kp, double kv, double q0, double qd0, double t) {
  if (!(m > 0.0) || !(kp > 0.0)) throw std::invalid_argument("point mass: need m, kp > 0");
  const double delta = kv / (2.0 * m);
  const double disc = delta * delta - kp / m;  // positive would be overdamped
  const double scale = std::max(delta * delta, kp / m);
  if (disc > 1e-12 * scale)
    throw std::invalid_argument("closed_form_point_mass: overdamped gains not supported");
  if (std::abs(disc) <= 1e-12 * scale) {
    // critical damping: q = exp(-delta t) (q0 + (qd0 + delta q0) t)
    return std::exp(-delta * t) * (q0 + (qd0 + delta * q0) * t);
  }
  const double wd = std::sqrt(-disc);
  const double c = q0;
  const double d = (qd0 + delta * q0) / wd;
  return std::exp(-delta * t) * (c * std::cos(wd * t) + d * std::sin(wd * t));
}

std::vector<PointMassLog> point_mass_study(const std::vector<double>& mus, GainRule rule,
                                           PointMassController controller, double mass, double kp,
                                           double dt, double duration, double q0, double qd0) {
  std::vector<PointMassLog> logs;
  logs.reserve(mus.size());
  const int steps = static_cast<int>(std::ceil(duration / dt - 1e-9));
  for (double mu : mus) {
    PointMassLog log;
    log.mu = mu;
    log.kv = rule == GainRule::kKvOfKp ? 2.0 * std::sqrt(mass * kp)
                                       : 2.0 * std::sqrt(mass * (1.0 + mu * mu) * kp);
    log.t.reserve(steps);
    log.q.reserve(steps);
    log.qd.reserve(steps);
    double q = q0, qd = qd0;
    const double damp = 1.0 + mu * mu;
    for (int k = 0; k < steps; ++k) {
      log.t.push_back(k * dt);
      log.q.push_back(q);
      log.qd.push_back(qd);
      double qd_next;
      if (controller == PointMassController::kAccDamped) {
        const double qdd = (-kp * q - log.kv * qd) / damp;
        qd_next = qd + dt * qdd;
      } else {
        qd_next = ((1.0 - dt * log.kv) * qd - dt * kp * q) / damp;
      }
      q += dt * qd;  // positions integrate the pre-step velocity
      qd = qd_next;
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace lexctrl
