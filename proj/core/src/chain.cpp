#include "lexctrl/chain.hpp"

#include <cmath>

namespace lexctrl {
namespace {

inline Eigen::Vector2d u_dir(double theta) { return {-std::sin(theta), -std::cos(theta)}; }
inline Eigen::Vector2d u_dir1(double theta) { return {-std::cos(theta), std::sin(theta)}; }
inline Eigen::Vector2d u_dir2(double theta) { return {std::sin(theta), std::cos(theta)}; }

Eigen::VectorXd prefix_sums(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += v[i];
    out[i] = acc;
  }
  return out;
}

}  // namespace

PlanarChain::PlanarChain(std::vector<Link> links, Eigen::Vector2d gravity)
    : links_(std::move(links)), gravity_(std::move(gravity)) {
  if (links_.empty()) throw std::invalid_argument("PlanarChain: need at least one link");
  for (const Link& l : links_) {
    if (!(l.length > 0.0) || !std::isfinite(l.length))
      throw std::invalid_argument("PlanarChain: link length must be positive");
    if (!(l.mass > 0.0) || !std::isfinite(l.mass))
      throw std::invalid_argument("PlanarChain: link mass must be positive");
    if (!(l.com_offset >= 0.0 && l.com_offset <= l.length))
      throw std::invalid_argument("PlanarChain: com_offset must lie in [0, length]");
    total_mass_ += l.mass;
  }
  if (!gravity_.allFinite()) throw std::invalid_argument("PlanarChain: gravity must be finite");
}

void PlanarChain::check_q(const Eigen::VectorXd& q) const {
  if (q.size() != dof()) throw DimensionMismatch("PlanarChain: q has wrong size");
  if (!q.allFinite()) throw std::invalid_argument("PlanarChain: q must be finite");
}

void PlanarChain::check_qd(const Eigen::VectorXd& qd) const {
  if (qd.size() != dof()) throw DimensionMismatch("PlanarChain: qd has wrong size");
  if (!qd.allFinite()) throw std::invalid_argument("PlanarChain: qd must be finite");
}

std::vector<Eigen::Vector2d> PlanarChain::joint_positions(const Eigen::VectorXd& q) const {
  check_q(q);
  const Eigen::VectorXd theta = prefix_sums(q);
  std::vector<Eigen::Vector2d> p(links_.size() + 1);
  p[0].setZero();
  for (size_t i = 0; i < links_.size(); ++i) p[i + 1] = p[i] + links_[i].length * u_dir(theta[i]);
  return p;
}

Eigen::Vector2d PlanarChain::forward_kinematics(const Eigen::VectorXd& q) const {
  return joint_positions(q).back();
}

Eigen::MatrixXd PlanarChain::task_jacobian(const Eigen::VectorXd& q) const {
  check_q(q);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  Eigen::MatrixXd jac(2, n);
  Eigen::Vector2d suffix = Eigen::Vector2d::Zero();
  for (int j = n - 1; j >= 0; --j) {
    suffix += links_[j].length * u_dir1(theta[j]);
    jac.col(j) = suffix;
  }
  return jac;
}

Eigen::MatrixXd PlanarChain::jacobian_time_derivative(const Eigen::VectorXd& q,
                                                      const Eigen::VectorXd& qd) const {
  check_q(q);
  check_qd(qd);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  const Eigen::VectorXd theta_dot = prefix_sums(qd);
  Eigen::MatrixXd jdot(2, n);
  Eigen::Vector2d suffix = Eigen::Vector2d::Zero();
  for (int j = n - 1; j >= 0; --j) {
    suffix += links_[j].length * theta_dot[j] * u_dir2(theta[j]);
    jdot.col(j) = suffix;
  }
  return jdot;
}

TaskHessian PlanarChain::task_hessian(const Eigen::VectorXd& q) const {
  check_q(q);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  // suffix[j] = sum_{k >= j} l_k u''(theta_k); slice entry (i, j) is suffix[max(i, j)].
  std::vector<Eigen::Vector2d> suffix(n);
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (int j = n - 1; j >= 0; --j) {
    acc += links_[j].length * u_dir2(theta[j]);
    suffix[j] = acc;
  }
  TaskHessian h;
  h.slices.assign(2, Eigen::MatrixXd(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d& s = suffix[std::max(i, j)];
      h.slices[0](i, j) = s[0];
      h.slices[1](i, j) = s[1];
    }
  return h;
}

Eigen::MatrixXd PlanarChain::link_com_jacobian(const Eigen::VectorXd& theta, int link) const {
  const int n = dof();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, n);
  Eigen::Vector2d acc = links_[link].com_offset * u_dir1(theta[link]);
  jac.col(link) = acc;
  for (int j = link - 1; j >= 0; --j) {
    acc += links_[j].length * u_dir1(theta[j]);
    jac.col(j) = acc;
  }
  return jac;
}

Eigen::MatrixXd PlanarChain::link_com_jacobian_dot(const Eigen::VectorXd& theta,
                                                   const Eigen::VectorXd& theta_dot,
                                                   int link) const {
  const int n = dof();
  Eigen::MatrixXd jdot = Eigen::MatrixXd::Zero(2, n);
  Eigen::Vector2d acc = links_[link].com_offset * theta_dot[link] * u_dir2(theta[link]);
  jdot.col(link) = acc;
  for (int j = link - 1; j >= 0; --j) {
    acc += links_[j].length * theta_dot[j] * u_dir2(theta[j]);
    jdot.col(j) = acc;
  }
  return jdot;
}

Eigen::MatrixXd PlanarChain::mass_matrix(const Eigen::VectorXd& q) const {
  check_q(q);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd ji = link_com_jacobian(theta, i);
    m.noalias() += links_[i].mass * ji.transpose() * ji;
  }
  return m;
}

Eigen::VectorXd PlanarChain::bias_forces(const Eigen::VectorXd& q,
                                         const Eigen::VectorXd& qd) const {
  check_q(q);
  check_qd(qd);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  const Eigen::VectorXd theta_dot = prefix_sums(qd);
  Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd ji = link_com_jacobian(theta, i);
    const Eigen::MatrixXd jdi = link_com_jacobian_dot(theta, theta_dot, i);
    bias.noalias() += links_[i].mass * ji.transpose() * (jdi * qd - gravity_);
  }
  return bias;
}

double PlanarChain::total_energy(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) const {
  check_q(q);
  check_qd(qd);
  const double kinetic = 0.5 * qd.dot(mass_matrix(q) * qd);
  const double g_norm = gravity_.norm();
  double potential = 0.0;
  const Eigen::VectorXd theta = prefix_sums(q);
  const std::vector<Eigen::Vector2d> p = joint_positions(q);
  double reach = 0.0;  // distance of the link COM from the base when fully aligned
  for (size_t i = 0; i < links_.size(); ++i) {
    const Eigen::Vector2d r = p[i] + links_[i].com_offset * u_dir(theta[i]);
    reach += links_[i].com_offset;
    potential += links_[i].mass * (g_norm * reach - gravity_.dot(r));
    reach += links_[i].length - links_[i].com_offset;
  }
  return kinetic + potential;
}

Eigen::Vector2d PlanarChain::com_position(const Eigen::VectorXd& q) const {
  check_q(q);
  const Eigen::VectorXd theta = prefix_sums(q);
  const std::vector<Eigen::Vector2d> p = joint_positions(q);
  Eigen::Vector2d com = Eigen::Vector2d::Zero();
  for (size_t i = 0; i < links_.size(); ++i)
    com += links_[i].mass * (p[i] + links_[i].com_offset * u_dir(theta[i]));
  return com / total_mass_;
}

Eigen::MatrixXd PlanarChain::com_jacobian(const Eigen::VectorXd& q) const {
  check_q(q);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, n);
  for (int i = 0; i < n; ++i) jac += links_[i].mass * link_com_jacobian(theta, i);
  return jac / total_mass_;
}

TaskHessian PlanarChain::com_hessian(const Eigen::VectorXd& q) const {
  check_q(q);
  const int n = dof();
  const Eigen::VectorXd theta = prefix_sums(q);
  TaskHessian h;
  h.slices.assign(2, Eigen::MatrixXd::Zero(n, n));
  // d^2 r_i / dq_a dq_b contributes u''(theta_k) for every segment k <= i
  // reached by both joints, weighted like the COM Jacobian columns.
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a <= i; ++a)
      for (int b = 0; b <= i; ++b) {
        Eigen::Vector2d acc = Eigen::Vector2d::Zero();
        for (int k = std::max(a, b); k <= i; ++k) {
          const double len = (k == i) ? links_[k].com_offset : links_[k].length;
          acc += len * u_dir2(theta[k]);
        }
        acc *= links_[i].mass / total_mass_;
        h.slices[0](a, b) += acc[0];
        h.slices[1](a, b) += acc[1];
      }
  }
  return h;
}

}  // namespace lexctrl
