#pragma once

#include <random>
#include <string>
#include <vector>

#include "lexctrl/simulator.hpp"

namespace lexctrl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<CheckResult>& results);

// Random hierarchy generator shared by the solver checks: n <= max_vars,
// up to max_levels levels with up to max_rows rows each, mixed relations,
// at most max_ineq inequality rows in total.
Hierarchy random_hierarchy(std::mt19937& rng, int max_vars = 6, int max_levels = 4,
                           int max_rows = 3, int max_ineq = 12);

// Finite-difference verification of the chain derivatives (Jacobian,
// Jacobian derivative, task Hessian), inertia properties, power balance and
// the hierarchical Hessian against a finite difference of the Lagrangian
// gradient.
std::vector<CheckResult> check_derivatives(int configs = 100, unsigned seed = 7);

// Active-set solve against the brute-force enumeration oracle.
std::vector<CheckResult> check_hlsp_oracle(int seeds = 50);

// KKT residuals of solver outputs plus a perturbation sensitivity probe.
std::vector<CheckResult> check_kkt_residuals(int seeds = 20);

// Velocity/acceleration route agreement: one-cycle identity, the 1-D
// recurrences against the task pipeline, and short closed-loop runs of the
// shipped scenarios.
std::vector<CheckResult> check_equivalence();

}  // namespace lexctrl
