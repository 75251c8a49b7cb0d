#pragma once

#include <string>
#include <vector>

#include "lexctrl/tasks.hpp"

namespace lexctrl {

// Everything needed to reproduce one closed-loop run.
struct Scenario {
  std::string name;
  PlanarChain chain;
  std::vector<TaskSpec> tasks;
  double dt = 0.005;
  double duration = 10.0;
  Formulation formulation = Formulation::kVel;
  Method method = Method::kGaussNewton;
  double mu = 0.1;  // damping weight of the LM method
  Eigen::VectorXd q0, qd0;
  double eps = 1e-8;        // eigenvalue floor
  double nu_scale = 1e-12;  // switch threshold nu = nu_scale * dt^2
  unsigned seed = 0;

  int steps() const;
  void validate() const;  // throws ConfigError
};

struct LogRow {
  double t = 0.0;
  Eigen::VectorXd q, qd, qdd, tau;
  Eigen::VectorXd wnorm;  // per level, control (velocity) scale, task rows only
  std::vector<int> mode;  // per level, 0 = Gauss-Newton, 1 = Newton
  int as_iterations = 0;
  double solve_us = 0.0;
};

struct TrajectoryLog {
  int njoints = 0;
  int nlevels = 0;
  std::vector<LogRow> rows;
};

struct RunResult {
  TrajectoryLog log;
  bool solver_failed = false;
  std::string message;
};

struct StepHooks {
  std::string dump_dir;  // when set, dump the step-0 hierarchy and any failing solve
};

ControlState make_initial_state(const Scenario& scenario);

// One control cycle: assemble the hierarchy at the current state, solve,
// integrate with the pre-step velocity, update the switch/curvature memory.
// Throws SolverFailure when the active-set solver hits its budget.
LogRow step(const Scenario& scenario, ControlState& state, HlspSolver& solver,
            const StepHooks* hooks = nullptr);

RunResult run_scenario(const Scenario& scenario, const StepHooks* hooks = nullptr);

// Exact solution of m qdd + kv qd + kp q = 0 for critically damped or
// underdamped gains (overdamped input is rejected).
double closed_form_point_mass(double m, double kp, double kv, double q0, double qd0, double t);

enum class PointMassController { kAccDamped, kVelPd };
enum class GainRule { kKvOfKp, kKvOfKpMu };

struct PointMassLog {
  double mu = 0.0;
  double kv = 0.0;
  std::vector<double> t, q, qd;
};

// Family of damped 1-D point-mass runs (the damping study data). Uses the
// closed-form per-cycle recurrences of the two controllers; the task
// pipeline reproduces them exactly (see the equivalence tests).
std::vector<PointMassLog> point_mass_study(const std::vector<double>& mus, GainRule rule,
                                           PointMassController controller, double mass = 1.0,
                                           double kp = 1.0, double dt = 0.005,
                                           double duration = 10.0, double q0 = 1.0,
                                           double qd0 = 0.0);

}  // namespace lexctrl
