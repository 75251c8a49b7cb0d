#include "lexctrl/builders.hpp"

#include <cmath>

namespace lexctrl {
namespace {

constexpr double kPi = 3.14159265358979323846;

TaskSpec eom_task(int level) {
  TaskSpec t;
  t.level = level;
  t.kind = TaskKind::kEom;
  return t;
}

TaskSpec torque_zero_task(int level, int joint = -1) {
  TaskSpec t;
  t.level = level;
  t.kind = TaskKind::kTorqueReg;
  t.joint = joint;
  return t;
}

TaskSpec velocity_reg_task(int level) {
  TaskSpec t;
  t.level = level;
  t.kind = TaskKind::kVelocityReg;
  return t;
}

TaskSpec trust_region_task(int level, double rho) {
  TaskSpec t;
  t.level = level;
  t.kind = TaskKind::kTrustRegion;
  t.rho = rho;
  return t;
}

TaskSpec tip_task(int level, double x, double z, double kp, double kv) {
  TaskSpec t;
  t.level = level;
  t.kind = TaskKind::kTipPosition;
  t.kp = kp;
  t.kv = kv;
  t.target = Eigen::Vector2d(x, z);
  t.augmentable = true;
  return t;
}

}  // namespace

Scenario example1_scenario() {
  Scenario s{.name = "example1",
             .chain = PlanarChain({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}),
             .tasks = {eom_task(1), torque_zero_task(1), velocity_reg_task(2)}};
  s.q0 = Eigen::Vector2d(-kPi / 2.0, 0.0);
  s.qd0 = Eigen::Vector2d::Zero();
  return s;
}

Scenario example2_scenario() {
  Scenario s{.name = "example2",
             .chain = PlanarChain({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}),
             .tasks = {eom_task(1), trust_region_task(2, 0.1), tip_task(3, 1.0, 1.0, 1.0, 2.0),
                       velocity_reg_task(4), torque_zero_task(5)}};
  s.q0 = Eigen::Vector2d(-kPi, 1.0);
  s.qd0 = Eigen::Vector2d::Zero();
  return s;
}

Scenario example3_scenario(Method method) {
  Scenario s{.name = "example3",
             .chain = PlanarChain({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}),
             .tasks = {eom_task(1), torque_zero_task(1, 0), trust_region_task(2, 0.1),
                       tip_task(3, 1.0, 1.0, 1.0, 2.0), velocity_reg_task(4),
                       torque_zero_task(5)}};
  s.method = method;
  s.formulation = method == Method::kLm ? Formulation::kAcc : Formulation::kVel;
  s.mu = 0.1;
  s.q0 = Eigen::Vector3d(-kPi, 1.0, 0.0);
  s.qd0 = Eigen::Vector3d::Zero();
  return s;
}

Scenario pointmass_acc_scenario(double mu, GainRule rule) {
  Scenario s{.name = "pointmass-acc", .chain = PlanarChain({{1.0, 1.0, 1.0}}, {0.0, 0.0})};
  TaskSpec task;
  task.level = 1;
  task.kind = TaskKind::kJointTarget;
  task.joint = 0;
  task.target = Eigen::VectorXd::Zero(1);
  task.kp = 1.0;
  task.kv = rule == GainRule::kKvOfKp ? 2.0 * std::sqrt(task.kp)
                                      : 2.0 * std::sqrt((1.0 + mu * mu) * task.kp);
  task.augmentable = true;
  s.tasks = {task};
  s.method = Method::kLm;
  s.formulation = Formulation::kAcc;
  s.mu = mu;
  s.q0 = Eigen::VectorXd::Constant(1, 1.0);
  s.qd0 = Eigen::VectorXd::Zero(1);
  return s;
}

Scenario pointmass_vel_scenario(double mu) {
  Scenario s = pointmass_acc_scenario(mu, GainRule::kKvOfKp);
  s.name = "pointmass-vel";
  s.formulation = Formulation::kVel;
  s.duration = 1200.0;  // the slow high-damping runs need a long window
  return s;
}

const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> scenarios = {
      {"example1", "Fig. 5", [] { return example1_scenario(); }},
      {"example2", "Fig. 8", [] { return example2_scenario(); }},
      {"example3", "Figs. 10-12", [] { return example3_scenario(Method::kNewtonAH); }},
      {"pointmass-acc", "Fig. 2", [] { return pointmass_acc_scenario(0.0, GainRule::kKvOfKp); }},
      {"pointmass-vel", "Fig. 3", [] { return pointmass_vel_scenario(0.5); }},
  };
  return scenarios;
}

}  // namespace lexctrl
