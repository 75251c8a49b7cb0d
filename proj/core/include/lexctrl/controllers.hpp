#pragma once

#include <Eigen/Dense>
#include <utility>

namespace lexctrl {

// Controller conventions used throughout:
//   task error        e    = f(q) - f_target
//   task velocity     edot = J qdot           (targets are held fixed)
// Acceleration references command the task acceleration f_ddot, velocity
// references command the next-cycle task velocity J qdot_{k+1}. Task rows
// are assembled as (J, -reference) for velocity references and
// (J, Jdot qdot - reference) for acceleration references, so the level's
// slack is the controller-equation residual.

// PD reference in the acceleration domain: -kp e - kv edot.
Eigen::VectorXd pd_acc_reference(const Eigen::VectorXd& e, const Eigen::VectorXd& edot,
                                 double kp, double kv);

// Proportional reference in the velocity domain: -kp e.
Eigen::VectorXd p_vel_reference(const Eigen::VectorXd& e, double kp);

// Velocity-domain reference that emulates acceleration PD control:
// edot + dt * (pd_acc_reference(e, edot) - Jdot qdot).
Eigen::VectorXd pd_vel_reference(const Eigen::VectorXd& e, const Eigen::VectorXd& edot,
                                 const Eigen::MatrixXd& jdot, const Eigen::VectorXd& qdot,
                                 double dt, double kp, double kv);

// Factor R with R^T R = Q max(U, eps) Q^T from the spectral decomposition
// H = Q U Q^T of a symmetric matrix; clamping keeps the factor positive
// definite when H is indefinite.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& h, double eps);

enum class Mode { kGaussNewton, kNewton };

// Residual-keyed model switch: Newton iff the previous Gauss-Newton
// residual 0.5*||J qdot + ref||^2 reached nu.
inline Mode newton_switch(double residual, double nu) {
  return residual >= nu ? Mode::kNewton : Mode::kGaussNewton;
}

// Slack/multiplier rescaling between the control and optimization domains.
std::pair<Eigen::VectorXd, Eigen::VectorXd> rescale_to_optim(const Eigen::VectorXd& w_ctrl,
                                                             const Eigen::VectorXd& lambda_ctrl,
                                                             double dt);

}  // namespace lexctrl
