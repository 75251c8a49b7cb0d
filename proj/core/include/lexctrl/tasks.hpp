#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "lexctrl/chain.hpp"
#include "lexctrl/controllers.hpp"
#include "lexctrl/hierarchy.hpp"
#include "lexctrl/solver.hpp"

namespace lexctrl {

enum class TaskKind {
  kTipPosition,  // Cartesian tip task, PD controlled, may be augmented
  kJointTarget,  // joint-space target, PD controlled
  kVelocityReg,  // qdot = 0
  kTorqueReg,    // tau = 0 (one joint or all)
  kTrustRegion,  // ||qdot_{k+1}||_inf <= rho
  kEom,          // equation of motion rows
  kTorqueLimit,  // |tau| <= bound (one joint or all)
  kComBox        // box on the center-of-mass x coordinate
};

enum class Formulation { kVel, kAcc };
enum class Method { kGaussNewton, kNewtonAH, kLm };

// Declarative control task; compiled into priority-level rows each cycle.
struct TaskSpec {
  int level = 1;
  TaskKind kind = TaskKind::kEom;
  double kp = 0.0;
  double kv = 0.0;
  Eigen::VectorXd target;  // tip target (2) or joint target(s)
  bool augmentable = false;
  int joint = -1;  // joint selector for kTorqueReg/kTorqueLimit/kJointTarget, -1 = all
  double rho = 0.1;
  double bound = 0.0;  // torque limit magnitude
  double com_lower = -std::numeric_limits<double>::infinity();
  double com_upper = std::numeric_limits<double>::infinity();
};

// One priority level compiled from one or more tasks. The decision vector is
// x = [qdot_{k+1}; dt*tau] (velocity form) or x = [qddot; tau] (acceleration
// form), both of size 2n for the fixed-base chain without contacts.
struct AssembledLevel {
  PriorityLevel rows;
  std::vector<int> hessian_slot;        // per row, -1 when the row carries no curvature
  std::vector<Eigen::MatrixXd> slices;  // Hessian slices referenced by hessian_slot
  int task_rows = 0;                    // rows before any damping/curvature block
  bool augmentable = false;
};

struct AssembledHierarchy {
  Hierarchy hierarchy;
  std::vector<AssembledLevel> meta;  // aligned with hierarchy.levels
  int nq = 0;
};

// Velocity-form (or instantaneous) equation-of-motion rows
// [M  -S^T] [qdot_{k+1}; dt*tau] = M qdot_k - dt N, resp. [M -S^T][qddot; tau] = -N.
AssembledLevel assemble_eom_level(const PlanarChain& chain, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qd, double dt, Formulation form);

// Rows for every non-EOM task kind. `curvature_factor`, when given together
// with mode == kNewton, appends the rows (R, 0) over the joint block.
AssembledLevel assemble_task_level(const TaskSpec& task, const PlanarChain& chain,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& qd, double dt,
                                   Formulation form, Mode mode = Mode::kGaussNewton,
                                   const Eigen::MatrixXd* curvature_factor = nullptr);

// Acceleration-domain task rows with a constant damping block (mu I, 0).
AssembledLevel damped_acc_assemble(const TaskSpec& task, const PlanarChain& chain,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& qd, double dt,
                                   double mu);

// Multipliers ready for hierarchical_hessian. The solver reports multipliers
// against the controller-residual orientation of the assembled rows; the
// Lagrangian curvature is taken against the task-error orientation, which
// negates them, and the control-to-optimization rescaling contributes dt:
// lambda = -dt * lambda_ctrl.
std::vector<Eigen::VectorXd> curvature_multipliers(const HlspSolution& sol, double dt);

// Multiplier-weighted sum of the Hessian slices of all rows of levels
// 0..level with registered curvature. `lambda` is stacked per level as in
// HlspSolution::multipliers but may come from an assembly whose per-level
// row counts were `lambda_level_rows` (a previous cycle with extra
// curvature rows).
Eigen::MatrixXd hierarchical_hessian(int level, const std::vector<AssembledLevel>& meta,
                                     const std::vector<Eigen::VectorXd>& lambda,
                                     const std::vector<int>& lambda_level_rows, int nq);

// Discrete controller state threaded through the closed loop.
struct ControlState {
  double t = 0.0;
  double dt = 0.005;
  Eigen::VectorXd q, qd;
  long cycle = 0;
  double nu = 0.0;     // GN/Newton switch threshold (nu_scale * dt^2)
  double eps = 1e-8;   // eigenvalue floor of psd_factor
  std::vector<Mode> mode;  // per assembled level
  // Previous cycle data: per-level curvature multipliers and the row counts
  // they were stacked against.
  std::vector<Eigen::VectorXd> lambda_curv;
  std::vector<int> prev_level_rows;
  std::vector<double> residual;  // 0.5 * ||task-row slack||^2 per level, control scale
  bool has_memory = false;
};

// Compile the full task list into a hierarchy at the current state. Tasks
// sharing a level index are concatenated in list order. For kNewtonAH the
// per-level modes decide which augmentable levels receive curvature rows
// built from `state`'s previous-cycle multipliers; for kLm every augmentable
// task level receives the constant damping block.
AssembledHierarchy assemble_hierarchy(const std::vector<TaskSpec>& tasks, const PlanarChain& chain,
                                      const ControlState& state, Formulation form, Method method,
                                      double mu);

}  // namespace lexctrl
