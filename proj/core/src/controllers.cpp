#include "lexctrl/controllers.hpp"

#include <Eigen/Eigenvalues>

namespace lexctrl {

Eigen::VectorXd pd_acc_reference(const Eigen::VectorXd& e, const Eigen::VectorXd& edot,
                                 double kp, double kv) {
  return -kp * e - kv * edot;
}

Eigen::VectorXd p_vel_reference(const Eigen::VectorXd& e, double kp) { return -kp * e; }

Eigen::VectorXd pd_vel_reference(const Eigen::VectorXd& e, const Eigen::VectorXd& edot,
                                 const Eigen::MatrixXd& jdot, const Eigen::VectorXd& qdot,
                                 double dt, double kp, double kv) {
  return edot + dt * (pd_acc_reference(e, edot, kp, kv) - jdot * qdot);
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& h, double eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(eps);
  return clamped.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> rescale_to_optim(const Eigen::VectorXd& w_ctrl,
                                                             const Eigen::VectorXd& lambda_ctrl,
                                                             double dt) {
  return {dt * w_ctrl, dt * lambda_ctrl};
}

}  // namespace lexctrl
