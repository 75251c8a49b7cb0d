#include "lexctrl/solver.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace lexctrl {
namespace {

struct GatheredRows {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<int> rows;  // original row indices within the level

  bool empty() const { return rows.empty(); }
  int count() const { return static_cast<int>(rows.size()); }
};

GatheredRows gather_active(const PriorityLevel& level, const std::vector<char>& act) {
  GatheredRows g;
  for (int r = 0; r < level.rows(); ++r)
    if (act[r]) g.rows.push_back(r);
  g.A.resize(g.count(), level.A.cols());
  g.b.resize(g.count());
  for (int i = 0; i < g.count(); ++i) {
    g.A.row(i) = level.A.row(g.rows[i]);
    g.b[i] = level.b[g.rows[i]];
  }
  return g;
}

ActiveSet normalized_active(const Hierarchy& h, const ActiveSet* seed) {
  ActiveSet act(h.num_levels());
  for (int l = 0; l < h.num_levels(); ++l) {
    const PriorityLevel& level = h.levels[l];
    act[l].assign(level.rows(), 0);
    for (int r = 0; r < level.rows(); ++r) {
      if (level.relations[r] == Relation::kEqual)
        act[l][r] = 1;
      else if (seed)
        act[l][r] = (*seed)[l][r];
    }
  }
  return act;
}

bool shapes_match(const Hierarchy& h, const ActiveSet& act) {
  if (static_cast<int>(act.size()) != h.num_levels()) return false;
  for (int l = 0; l < h.num_levels(); ++l)
    if (static_cast<int>(act[l].size()) != h.levels[l].rows()) return false;
  return true;
}

inline double row_value(const PriorityLevel& level, int r, const Eigen::VectorXd& x) {
  return level.A.row(r).dot(x) + level.b[r];
}

// Positive when the inactive row is violated.
inline double violation(Relation rel, double value) {
  return rel == Relation::kUpper ? value : (rel == Relation::kLower ? -value : 0.0);
}

// Positive when an active row's multiplier has the wrong sign, meaning the
// row wants to leave the active set.
inline double wrong_sign(Relation rel, double lambda) {
  return rel == Relation::kUpper ? lambda : (rel == Relation::kLower ? -lambda : 0.0);
}

}  // namespace

HlspSolution HlspSolver::solve_equality(const Hierarchy& h, const ActiveSet& active) const {
  h.validate();
  if (!shapes_match(h, active)) throw DimensionMismatch("solve_equality: active set shape");

  const int n = h.num_vars;
  const int p = h.num_levels();

  HlspSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  sol.active = normalized_active(h, &active);
  sol.slacks.resize(p);
  sol.multipliers.resize(p);

  std::vector<GatheredRows> acts(p);
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(n, n);
  int null_dim = n;

  for (int l = 0; l < p; ++l) {
    acts[l] = gather_active(h.levels[l], sol.active[l]);
    if (acts[l].empty() || null_dim == 0) continue;

    const auto z_basis = null_basis.leftCols(null_dim);
    const Eigen::MatrixXd a_bar = acts[l].A * z_basis;
    const Eigen::VectorXd b_bar = acts[l].A * sol.x + acts[l].b;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a_bar, Eigen::ComputeThinU | Eigen::ComputeFullV);
    svd.setThreshold(opts_.rank_threshold);
    const Eigen::VectorXd step = svd.solve(-b_bar);  // min-norm least squares
    sol.x += z_basis * step;

    const int rank = static_cast<int>(svd.rank());
    if (rank >= null_dim) {
      null_dim = 0;
    } else if (rank > 0) {
      const Eigen::MatrixXd next = z_basis * svd.matrixV().rightCols(null_dim - rank);
      null_basis.leftCols(null_dim - rank) = next;
      null_dim -= rank;
    }
  }

  // Slacks at the final iterate: active rows carry their residual, inactive
  // rows carry zero.
  for (int l = 0; l < p; ++l) {
    sol.slacks[l] = Eigen::VectorXd::Zero(h.levels[l].rows());
    if (acts[l].empty()) continue;
    const Eigen::VectorXd w = acts[l].A * sol.x + acts[l].b;
    for (int i = 0; i < acts[l].count(); ++i) sol.slacks[l][acts[l].rows[i]] = w[i];
  }

  // Multipliers per level from stationarity: the own-level block is -w, the
  // higher-priority block is the min-norm solution of
  // A_hat^T lambda = A_l^T w_l over the active rows of levels < l.
  for (int l = 0; l < p; ++l) {
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(h.row_offset(l) + h.levels[l].rows());
    const int off_l = h.row_offset(l);
    for (int i = 0; i < acts[l].count(); ++i)
      lam[off_l + acts[l].rows[i]] = -sol.slacks[l][acts[l].rows[i]];

    if (l > 0 && !acts[l].empty()) {
      int hi_rows = 0;
      for (int i = 0; i < l; ++i) hi_rows += acts[i].count();
      if (hi_rows > 0) {
        Eigen::MatrixXd a_hat(hi_rows, n);
        std::vector<std::pair<int, int>> slots;  // (level, original row)
        slots.reserve(hi_rows);
        int at = 0;
        for (int i = 0; i < l; ++i)
          for (int k = 0; k < acts[i].count(); ++k) {
            a_hat.row(at++) = acts[i].A.row(k);
            slots.emplace_back(i, acts[i].rows[k]);
          }
        Eigen::VectorXd w_act(acts[l].count());
        for (int i = 0; i < acts[l].count(); ++i) w_act[i] = sol.slacks[l][acts[l].rows[i]];
        const Eigen::VectorXd rhs = acts[l].A.transpose() * w_act;

        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a_hat.transpose());
        cod.setThreshold(opts_.rank_threshold);
        const Eigen::VectorXd lam_hi = cod.solve(rhs);
        for (int i = 0; i < hi_rows; ++i)
          lam[h.row_offset(slots[i].first) + slots[i].second] = lam_hi[i];
      }
    }
    sol.multipliers[l] = std::move(lam);
  }
  return sol;
}

HlspSolution HlspSolver::solve(const Hierarchy& h) {
  h.validate();
  const double tol = opts_.tolerance;
  const int p = h.num_levels();

  ActiveSet act = normalized_active(
      h, (opts_.warm_start && shapes_match(h, warm_active_)) ? &warm_active_ : nullptr);

  Eigen::VectorXd x_cur = Eigen::VectorXd::Zero(h.num_vars);
  // Activate whatever the start point already violates so the ratio test
  // starts from a consistent iterate.
  for (int l = 0; l < p; ++l)
    for (int r = 0; r < h.levels[l].rows(); ++r)
      if (!act[l][r] && violation(h.levels[l].relations[r], row_value(h.levels[l], r, x_cur)) > tol)
        act[l][r] = 1;

  const int bland_after = 3 * std::max(1, h.total_rows());
  HlspSolution sol;
  int iter = 0;
  while (true) {
    sol = solve_equality(h, act);
    sol.iterations = iter;
    if (iter++ >= opts_.max_iterations) {
      sol.status = SolveStatus::kIterationLimit;
      break;
    }

    // Ratio test: largest step from x_cur toward the candidate that keeps
    // every inactive inequality row satisfied.
    double alpha = 1.0;
    int blk_level = -1, blk_row = -1;
    for (int l = 0; l < p; ++l) {
      const PriorityLevel& level = h.levels[l];
      for (int r = 0; r < level.rows(); ++r) {
        if (act[l][r] || level.relations[r] == Relation::kEqual) continue;
        const double viol_cur = violation(level.relations[r], row_value(level, r, x_cur));
        const double viol_cand = violation(level.relations[r], row_value(level, r, sol.x));
        if (viol_cand > tol && viol_cur <= tol) {
          const double denom = viol_cand - viol_cur;
          if (denom <= 0.0) continue;
          const double a = std::clamp(-viol_cur / denom, 0.0, 1.0);
          if (a < alpha - 1e-15) {
            alpha = a;
            blk_level = l;
            blk_row = r;
          }
        }
      }
    }
    if (blk_level >= 0 && alpha < 1.0) {
      x_cur += alpha * (sol.x - x_cur);
      act[blk_level][blk_row] = 1;
      continue;
    }
    x_cur = sol.x;

    // A previously deactivated row may still sit beyond its bound at the
    // full step; bring it back in (lowest index first).
    int viol_level = -1, viol_row = -1;
    for (int l = 0; l < p && viol_level < 0; ++l)
      for (int r = 0; r < h.levels[l].rows(); ++r) {
        if (act[l][r]) continue;
        if (violation(h.levels[l].relations[r], row_value(h.levels[l], r, x_cur)) > tol) {
          viol_level = l;
          viol_row = r;
          break;
        }
      }
    if (viol_level >= 0) {
      act[viol_level][viol_row] = 1;
      continue;
    }

    // Dual test: an active inequality row with a wrong-signed multiplier on
    // its own or any lower level leaves the active set. Highest-priority
    // level first, then the largest violation; plain lowest index once the
    // Bland budget is exceeded.
    int out_level = -1, out_row = -1;
    double out_viol = tol;
    for (int i = 0; i < p && out_level < 0; ++i) {
      for (int r = 0; r < h.levels[i].rows(); ++r) {
        if (!act[i][r] || h.levels[i].relations[r] == Relation::kEqual) continue;
        double worst = 0.0;
        for (int l = i; l < p; ++l)
          worst = std::max(worst, wrong_sign(h.levels[i].relations[r],
                                             sol.multipliers[l][h.row_offset(i) + r]));
        if (worst > out_viol) {
          if (iter > bland_after) {  // lowest index wins outright
            out_level = i;
            out_row = r;
            break;
          }
          out_viol = worst;
          out_level = i;
          out_row = r;
        }
      }
      if (out_level == i) break;  // stay on the highest-priority offending level
    }
    if (out_level < 0) {
      sol.status = SolveStatus::kOptimal;
      break;
    }
    act[out_level][out_row] = 0;
  }

  warm_active_ = sol.active;
  return sol;
}

KktReport check_kkt(const Hierarchy& h, const HlspSolution& sol) {
  h.validate();
  const int p = h.num_levels();
  if (static_cast<int>(sol.slacks.size()) != p || static_cast<int>(sol.multipliers.size()) != p ||
      !shapes_match(h, sol.active) || sol.x.size() != h.num_vars)
    throw DimensionMismatch("check_kkt: solution shape disagrees with hierarchy");

  KktReport rep;
  for (int l = 0; l < p; ++l) {
    // Stationarity block: sum of A_i^T lambda_{i,l} plus the slack/multiplier
    // link on the level's own active rows.
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(h.num_vars);
    for (int i = 0; i <= l; ++i)
      grad += h.levels[i].A.transpose() * sol.multipliers[l].segment(h.row_offset(i),
                                                                     h.levels[i].rows());
    rep.stationarity = std::max(rep.stationarity, grad.lpNorm<Eigen::Infinity>());

    const PriorityLevel& level = h.levels[l];
    const int off_l = h.row_offset(l);
    for (int r = 0; r < level.rows(); ++r) {
      const double v = row_value(level, r, sol.x);
      const double w = sol.slacks[l][r];
      double w_expected = v;
      if (!sol.active[l][r])
        w_expected = level.relations[r] == Relation::kUpper ? std::max(v, 0.0) : std::min(v, 0.0);
      rep.primal = std::max(rep.primal, std::abs(w - w_expected));
      if (sol.active[l][r])
        rep.stationarity = std::max(rep.stationarity, std::abs(v + sol.multipliers[l][off_l + r]));
    }

    // Complementarity and sign conditions over the inequality rows of all
    // levels i <= l, as seen by level l's multipliers.
    for (int i = 0; i <= l; ++i) {
      const PriorityLevel& hi = h.levels[i];
      for (int r = 0; r < hi.rows(); ++r) {
        if (hi.relations[r] == Relation::kEqual) continue;
        const double lam = sol.multipliers[l][h.row_offset(i) + r];
        if (!sol.active[i][r])
          rep.complementarity = std::max(rep.complementarity, std::abs(lam));
        else
          rep.sign_violation = std::max(rep.sign_violation, wrong_sign(hi.relations[r], lam));
      }
    }
  }
  return rep;
}

HlspSolution brute_force_oracle(const Hierarchy& h, const SolverOptions& opts) {
  h.validate();
  std::vector<std::pair<int, int>> ineq;
  for (int l = 0; l < h.num_levels(); ++l)
    for (int r = 0; r < h.levels[l].rows(); ++r)
      if (h.levels[l].relations[r] != Relation::kEqual) ineq.emplace_back(l, r);
  const int m = static_cast<int>(ineq.size());
  if (m > 12) throw TooLargeError("brute_force_oracle: more than 12 inequality rows");

  const double ptol = std::max(1e-7, 10.0 * opts.tolerance);
  const double dtol = ptol;
  HlspSolver solver(opts);

  auto lex_norms = [&](const HlspSolution& s) {
    std::vector<double> norms(h.num_levels());
    for (int l = 0; l < h.num_levels(); ++l) norms[l] = s.slack_squared_norm(l);
    return norms;
  };
  auto lex_better = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
      const double t = 1e-10 * std::max({1.0, a[i], b[i]});
      if (a[i] < b[i] - t) return true;
      if (a[i] > b[i] + t) return false;
    }
    return false;
  };

  std::optional<HlspSolution> best;          // fully filtered
  std::optional<HlspSolution> best_primal;   // primal-feasible fallback
  std::vector<double> best_norms, best_primal_norms;

  for (long mask = 0; mask < (1L << m); ++mask) {
    ActiveSet act = normalized_active(h, nullptr);
    for (int k = 0; k < m; ++k)
      if (mask & (1L << k)) act[ineq[k].first][ineq[k].second] = 1;

    HlspSolution cand = solver.solve_equality(h, act);

    bool primal_ok = true;
    for (int k = 0; k < m && primal_ok; ++k) {
      const auto [l, r] = ineq[k];
      if (act[l][r]) continue;
      if (violation(h.levels[l].relations[r], row_value(h.levels[l], r, cand.x)) > ptol)
        primal_ok = false;
    }
    if (!primal_ok) continue;

    bool dual_ok = true;
    for (int k = 0; k < m && dual_ok; ++k) {
      const auto [i, r] = ineq[k];
      if (!act[i][r]) continue;
      for (int l = i; l < h.num_levels(); ++l)
        if (wrong_sign(h.levels[i].relations[r], cand.multipliers[l][h.row_offset(i) + r]) > dtol) {
          dual_ok = false;
          break;
        }
    }

    const std::vector<double> norms = lex_norms(cand);
    if (!best_primal || lex_better(norms, best_primal_norms)) {
      best_primal = cand;
      best_primal_norms = norms;
    }
    if (dual_ok && (!best || lex_better(norms, best_norms))) {
      best = cand;
      best_norms = norms;
    }
  }
  if (best) return *best;
  if (best_primal) return *best_primal;
  // Everything primal-infeasible can only happen numerically; fall back to
  // the all-active assignment.
  ActiveSet act = normalized_active(h, nullptr);
  for (auto& [l, r] : ineq) act[l][r] = 1;
  return solver.solve_equality(h, act);
}

}  // namespace lexctrl
