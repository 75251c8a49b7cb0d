#include "lexctrl/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lexctrl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_rows(AssembledLevel& out, const AssembledLevel& in) {
  const int old_rows = out.rows.rows();
  const int old_slices = static_cast<int>(out.slices.size());
  Eigen::MatrixXd a(old_rows + in.rows.rows(), in.rows.A.cols());
  Eigen::VectorXd b(old_rows + in.rows.rows());
  if (old_rows > 0) {
    a.topRows(old_rows) = out.rows.A;
    b.head(old_rows) = out.rows.b;
  }
  a.bottomRows(in.rows.rows()) = in.rows.A;
  b.tail(in.rows.rows()) = in.rows.b;
  out.rows.A = std::move(a);
  out.rows.b = std::move(b);
  out.rows.relations.insert(out.rows.relations.end(), in.rows.relations.begin(),
                            in.rows.relations.end());
  for (int slot : in.hessian_slot) out.hessian_slot.push_back(slot < 0 ? -1 : slot + old_slices);
  out.slices.insert(out.slices.end(), in.slices.begin(), in.slices.end());
  out.task_rows += in.task_rows;
  out.augmentable = out.augmentable || in.augmentable;
}

AssembledLevel make_level(int rows, int xdim) {
  AssembledLevel level;
  level.rows.A = Eigen::MatrixXd::Zero(rows, xdim);
  level.rows.b = Eigen::VectorXd::Zero(rows);
  level.rows.relations.assign(rows, Relation::kEqual);
  level.hessian_slot.assign(rows, -1);
  level.task_rows = rows;
  return level;
}

std::vector<int> selected_joints(const TaskSpec& task, int n) {
  if (task.joint < 0) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  if (task.joint >= n) throw DimensionMismatch("TaskSpec: joint index out of range");
  return {task.joint};
}

void append_curvature_block(AssembledLevel& level, const Eigen::MatrixXd& factor, int n, int xdim) {
  if (factor.rows() != n || factor.cols() != n)
    throw DimensionMismatch("curvature factor must be n x n over the joint block");
  AssembledLevel block = make_level(n, xdim);
  block.rows.A.leftCols(n) = factor;
  block.task_rows = 0;
  append_rows(level, block);
}

}  // namespace

AssembledLevel assemble_eom_level(const PlanarChain& chain, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qd, double dt, Formulation form) {
  const int n = chain.dof();
  const Eigen::MatrixXd mass = chain.mass_matrix(q);
  const Eigen::VectorXd bias = chain.bias_forces(q, qd);
  AssembledLevel level = make_level(n, 2 * n);
  level.rows.A.leftCols(n) = mass;
  level.rows.A.rightCols(n) = -Eigen::MatrixXd::Identity(n, n);
  if (form == Formulation::kVel)
    level.rows.b = -(mass * qd - dt * bias);
  else
    level.rows.b = bias;
  return level;
}

AssembledLevel assemble_task_level(const TaskSpec& task, const PlanarChain& chain,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& qd, double dt,
                                   Formulation form, Mode mode,
                                   const Eigen::MatrixXd* curvature_factor) {
  const int n = chain.dof();
  const int xdim = 2 * n;
  const bool vel = form == Formulation::kVel;
  AssembledLevel level;

  switch (task.kind) {
    case TaskKind::kEom:
      level = assemble_eom_level(chain, q, qd, dt, form);
      break;

    case TaskKind::kTipPosition: {
      if (task.target.size() != 2) throw DimensionMismatch("kTipPosition: target must be 2-d");
      const Eigen::MatrixXd jac = chain.task_jacobian(q);
      const Eigen::MatrixXd jdot = chain.jacobian_time_derivative(q, qd);
      const Eigen::VectorXd e = chain.forward_kinematics(q) - task.target;
      const Eigen::VectorXd edot = jac * qd;
      level = make_level(2, xdim);
      level.rows.A.leftCols(n) = jac;
      if (vel)
        level.rows.b = -pd_vel_reference(e, edot, jdot, qd, dt, task.kp, task.kv);
      else
        level.rows.b = jdot * qd - pd_acc_reference(e, edot, task.kp, task.kv);
      if (task.augmentable) {
        level.slices = chain.task_hessian(q).slices;
        level.hessian_slot = {0, 1};
        level.augmentable = true;
      }
      break;
    }

    case TaskKind::kJointTarget: {
      const std::vector<int> sel = selected_joints(task, n);
      if (task.target.size() != static_cast<Eigen::Index>(sel.size()))
        throw DimensionMismatch("kJointTarget: target size disagrees with joint selection");
      level = make_level(static_cast<int>(sel.size()), xdim);
      for (size_t i = 0; i < sel.size(); ++i) {
        const double e = q[sel[i]] - task.target[i];
        const double edot = qd[sel[i]];
        const double acc_ref = -task.kp * e - task.kv * edot;
        level.rows.A(i, sel[i]) = 1.0;
        level.rows.b[i] = vel ? -(edot + dt * acc_ref) : -acc_ref;
      }
      break;
    }

    case TaskKind::kVelocityReg: {
      level = make_level(n, xdim);
      for (int i = 0; i < n; ++i) {
        level.rows.A(i, i) = 1.0;
        level.rows.b[i] = vel ? 0.0 : qd[i] / dt;
      }
      break;
    }

    case TaskKind::kTorqueReg: {
      const std::vector<int> sel = selected_joints(task, n);
      level = make_level(static_cast<int>(sel.size()), xdim);
      for (size_t i = 0; i < sel.size(); ++i) level.rows.A(i, n + sel[i]) = 1.0;
      break;
    }

    case TaskKind::kTrustRegion: {
      if (!(task.rho > 0.0)) throw std::invalid_argument("kTrustRegion: rho must be positive");
      level = make_level(2 * n, xdim);
      for (int i = 0; i < n; ++i) {
        level.rows.A(i, i) = 1.0;
        level.rows.relations[i] = Relation::kUpper;
        level.rows.b[i] = vel ? -task.rho : (qd[i] - task.rho) / dt;
        level.rows.A(n + i, i) = 1.0;
        level.rows.relations[n + i] = Relation::kLower;
        level.rows.b[n + i] = vel ? task.rho : (qd[i] + task.rho) / dt;
      }
      break;
    }

    case TaskKind::kTorqueLimit: {
      if (!(task.bound > 0.0)) throw std::invalid_argument("kTorqueLimit: bound must be positive");
      const std::vector<int> sel = selected_joints(task, n);
      const int m = static_cast<int>(sel.size());
      level = make_level(2 * m, xdim);
      const double scale = vel ? dt : 1.0;  // rows act on dt*tau resp. tau
      for (int i = 0; i < m; ++i) {
        level.rows.A(i, n + sel[i]) = 1.0;
        level.rows.relations[i] = Relation::kUpper;
        level.rows.b[i] = -scale * task.bound;
        level.rows.A(m + i, n + sel[i]) = 1.0;
        level.rows.relations[m + i] = Relation::kLower;
        level.rows.b[m + i] = scale * task.bound;
      }
      break;
    }

    case TaskKind::kComBox: {
      const double com_x = chain.com_position(q)[0];
      const Eigen::RowVectorXd jcx = chain.com_jacobian(q).row(0);
      const double drift = jcx.dot(qd);
      std::vector<std::pair<Relation, double>> bounds;
      if (task.com_upper < kInf) bounds.emplace_back(Relation::kUpper, task.com_upper);
      if (task.com_lower > -kInf) bounds.emplace_back(Relation::kLower, task.com_lower);
      if (bounds.empty()) throw std::invalid_argument("kComBox: no finite bound given");
      level = make_level(static_cast<int>(bounds.size()), xdim);
      for (size_t i = 0; i < bounds.size(); ++i) {
        level.rows.A.block(i, 0, 1, n) = jcx;
        level.rows.relations[i] = bounds[i].first;
        level.rows.b[i] = vel ? (com_x - bounds[i].second) / dt
                              : drift / dt + (com_x - bounds[i].second) / (dt * dt);
      }
      if (task.augmentable) {
        level.slices = {chain.com_hessian(q).slices[0]};
        level.hessian_slot.assign(level.rows.rows(), 0);
        level.augmentable = true;
      }
      break;
    }
  }

  if (mode == Mode::kNewton && curvature_factor != nullptr)
    append_curvature_block(level, *curvature_factor, n, xdim);
  return level;
}

AssembledLevel damped_acc_assemble(const TaskSpec& task, const PlanarChain& chain,
                                   const Eigen::VectorXd& q, const Eigen::VectorXd& qd, double dt,
                                   double mu) {
  AssembledLevel level = assemble_task_level(task, chain, q, qd, dt, Formulation::kAcc);
  if (mu != 0.0) {
    const int n = chain.dof();
    append_curvature_block(level, mu * Eigen::MatrixXd::Identity(n, n), n, 2 * n);
  }
  return level;
}

std::vector<Eigen::VectorXd> curvature_multipliers(const HlspSolution& sol, double dt) {
  std::vector<Eigen::VectorXd> out(sol.multipliers.size());
  for (size_t l = 0; l < sol.multipliers.size(); ++l) out[l] = -dt * sol.multipliers[l];
  return out;
}

Eigen::MatrixXd hierarchical_hessian(int level, const std::vector<AssembledLevel>& meta,
                                     const std::vector<Eigen::VectorXd>& lambda,
                                     const std::vector<int>& lambda_level_rows, int nq) {
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nq, nq);
  if (level >= static_cast<int>(lambda.size()))
    throw DimensionMismatch("hierarchical_hessian: no multipliers for this level");
  const Eigen::VectorXd& lam = lambda[level];
  int offset = 0;
  for (int i = 0; i <= level; ++i) {
    const AssembledLevel& m = meta[i];
    const int prev_rows = lambda_level_rows[i];
    for (int r = 0; r < m.rows.rows() && r < prev_rows; ++r) {
      const int slot = m.hessian_slot[r];
      if (slot < 0) continue;
      if (slot >= static_cast<int>(m.slices.size()))
        throw MissingHessian("hierarchical_hessian: row references a missing Hessian slice");
      const double coeff = lam[offset + r];
      if (coeff == 0.0) continue;
      if (m.slices[slot].rows() != nq || m.slices[slot].cols() != nq)
        throw MissingHessian("hierarchical_hessian: slice has wrong dimensions");
      hess.noalias() += coeff * m.slices[slot];
    }
    offset += prev_rows;
  }
  return hess;
}

AssembledHierarchy assemble_hierarchy(const std::vector<TaskSpec>& tasks, const PlanarChain& chain,
                                      const ControlState& state, Formulation form, Method method,
                                      double mu) {
  const int n = chain.dof();
  AssembledHierarchy out;
  out.nq = n;
  out.hierarchy.num_vars = 2 * n;

  std::map<int, std::vector<const TaskSpec*>> grouped;
  for (const TaskSpec& t : tasks) grouped[t.level].push_back(&t);

  for (const auto& [level_index, group] : grouped) {
    AssembledLevel merged;
    merged.rows.A = Eigen::MatrixXd::Zero(0, 2 * n);
    merged.rows.b = Eigen::VectorXd::Zero(0);
    merged.rows.level_index = level_index;
    for (const TaskSpec* t : group)
      append_rows(merged, assemble_task_level(*t, chain, state.q, state.qd, state.dt, form));
    out.meta.push_back(std::move(merged));
  }

  // Damping / curvature blocks at level granularity.
  for (size_t l = 0; l < out.meta.size(); ++l) {
    AssembledLevel& level = out.meta[l];
    if (!level.augmentable) continue;
    if (method == Method::kLm && mu != 0.0) {
      append_curvature_block(level, mu * Eigen::MatrixXd::Identity(n, n), n, 2 * n);
    } else if (method == Method::kNewtonAH && state.has_memory &&
               l < state.mode.size() && state.mode[l] == Mode::kNewton) {
      const Eigen::MatrixXd hess = hierarchical_hessian(static_cast<int>(l), out.meta,
                                                        state.lambda_curv,
                                                        state.prev_level_rows, n);
      append_curvature_block(level, psd_factor(hess, state.eps), n, 2 * n);
    }
  }

  out.hierarchy.levels.reserve(out.meta.size());
  for (AssembledLevel& level : out.meta) out.hierarchy.levels.push_back(level.rows);
  return out;
}

}  // namespace lexctrl
