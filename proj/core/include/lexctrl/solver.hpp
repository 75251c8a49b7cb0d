#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lexctrl/hierarchy.hpp"

namespace lexctrl {

struct SolverOptions {
  double tolerance = 1e-9;       // KKT / feasibility tolerance
  int max_iterations = 500;      // active-set iteration budget
  double rank_threshold = 1e-10; // relative pivot threshold of the orthogonal factorizations
  bool warm_start = true;        // reuse the previous active set when shapes match
};

enum class SolveStatus { kOptimal, kIterationLimit };

// Per-row activity flags; equality rows are always active.
using ActiveSet = std::vector<std::vector<char>>;

struct HlspSolution {
  Eigen::VectorXd x;
  // slacks[l] has one entry per row of level l; inactive inequality rows hold 0.
  std::vector<Eigen::VectorXd> slacks;
  // multipliers[l] stacks the multipliers of every row of levels 0..l
  // (hierarchy row order); lambda_{l,l} = -w_l on active rows, zero on
  // inactive rows.
  std::vector<Eigen::VectorXd> multipliers;
  ActiveSet active;
  int iterations = 0;
  SolveStatus status = SolveStatus::kOptimal;

  double slack_squared_norm(int level) const { return slacks[level].squaredNorm(); }
};

struct KktReport {
  double stationarity = 0.0;    // max |J^T lambda| and |w + lambda_{l,l}| residual
  double primal = 0.0;          // max violation of the slack definition per relation
  double complementarity = 0.0; // max |lambda| on inactive inequality rows
  double sign_violation = 0.0;  // max wrong-signed multiplier magnitude on active rows

  bool passed(double tol) const {
    return stationarity < tol && primal < tol && complementarity < tol && sign_violation < tol;
  }
};

// Lexicographic least-squares solver with slack relaxation. A solver
// instance carries warm-start state; use one instance per control loop.
class HlspSolver {
 public:
  explicit HlspSolver(SolverOptions opts = {}) : opts_(opts) {}

  // Full solve: primal active-set iteration over the inequality rows.
  HlspSolution solve(const Hierarchy& h);

  // Equality-constrained solve on a fixed active set (nullspace cascade,
  // min-norm at every level; rank deficiency is not an error).
  HlspSolution solve_equality(const Hierarchy& h, const ActiveSet& active) const;

  void reset_warm_start() { warm_active_.clear(); }
  const SolverOptions& options() const { return opts_; }

 private:
  SolverOptions opts_;
  ActiveSet warm_active_;
};

// Exhaustive oracle: enumerates all activity assignments of the inequality
// rows (at most 12), filters by primal feasibility and multiplier signs,
// returns the lexicographically best survivor.
HlspSolution brute_force_oracle(const Hierarchy& h, const SolverOptions& opts = {});

// KKT residuals of a candidate solution; see KktReport.
KktReport check_kkt(const Hierarchy& h, const HlspSolution& sol);

}  // namespace lexctrl
