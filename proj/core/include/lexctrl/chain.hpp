#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lexctrl/errors.hpp"

namespace lexctrl {

struct Link {
  double length = 1.0;      // m, > 0
  double mass = 1.0;        // kg, > 0
  double com_offset = 1.0;  // m, in [0, length], measured from the proximal joint
};

struct KinematicState {
  Eigen::VectorXd q;   // rad
  Eigen::VectorXd qd;  // rad/s
};

// Second derivatives of the tip map: one symmetric n x n slice per
// Cartesian component.
struct TaskHessian {
  std::vector<Eigen::MatrixXd> slices;
};

// Fixed-base planar serial chain of revolute joints, world plane (x, z),
// gravity along -z by default. Each link is a point mass at com_offset
// from its proximal joint.
//
// Angle convention: q = 0 hangs the chain straight down along -z; the
// direction of link i is u(Theta_i) = (-sin Theta_i, -cos Theta_i) with
// Theta_i = q_1 + ... + q_i.
class PlanarChain {
 public:
  PlanarChain(std::vector<Link> links, Eigen::Vector2d gravity = {0.0, -9.81});

  int dof() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const Eigen::Vector2d& gravity() const { return gravity_; }

  // Tip of the distal link in the world frame.
  Eigen::Vector2d forward_kinematics(const Eigen::VectorXd& q) const;

  // All joint frames including the base (n + 1 points).
  std::vector<Eigen::Vector2d> joint_positions(const Eigen::VectorXd& q) const;

  // 2 x n Jacobian of the tip map: d(tip)/dt = J qdot.
  Eigen::MatrixXd task_jacobian(const Eigen::VectorXd& q) const;

  // 2 x n time derivative of the tip Jacobian along qdot.
  Eigen::MatrixXd jacobian_time_derivative(const Eigen::VectorXd& q,
                                           const Eigen::VectorXd& qd) const;

  // Analytic second derivatives of the tip map, O(n^2) assembly.
  TaskHessian task_hessian(const Eigen::VectorXd& q) const;

  // Symmetric positive definite joint-space inertia.
  Eigen::MatrixXd mass_matrix(const Eigen::VectorXd& q) const;

  // Coriolis, centrifugal and gravity torques N(q, qd) with
  // M qdd + N = tau for the unconstrained fixed-base chain.
  Eigen::VectorXd bias_forces(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) const;

  // Kinetic plus potential energy; potential datum is the configuration
  // with every link aligned with gravity (zero when gravity is zero).
  double total_energy(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) const;

  // Whole-chain center of mass, its 2 x n Jacobian and Hessian slices.
  Eigen::Vector2d com_position(const Eigen::VectorXd& q) const;
  Eigen::MatrixXd com_jacobian(const Eigen::VectorXd& q) const;
  TaskHessian com_hessian(const Eigen::VectorXd& q) const;

 private:
  void check_q(const Eigen::VectorXd& q) const;
  void check_qd(const Eigen::VectorXd& qd) const;
  // COM Jacobian of link i (2 x n) and its time derivative.
  Eigen::MatrixXd link_com_jacobian(const Eigen::VectorXd& theta, int link) const;
  Eigen::MatrixXd link_com_jacobian_dot(const Eigen::VectorXd& theta,
                                        const Eigen::VectorXd& theta_dot, int link) const;

  std::vector<Link> links_;
  Eigen::Vector2d gravity_;
  double total_mass_ = 0.0;
};

}  // namespace lexctrl
