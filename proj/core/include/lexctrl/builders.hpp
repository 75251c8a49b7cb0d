#pragma once

#include "lexctrl/simulator.hpp"

namespace lexctrl {

// Canonical scenarios behind the shipped config files. The CLI resolves
// these by name when no file of that name exists.
Scenario example1_scenario();
Scenario example2_scenario();
Scenario example3_scenario(Method method = Method::kNewtonAH);
Scenario pointmass_acc_scenario(double mu = 0.0, GainRule rule = GainRule::kKvOfKp);
Scenario pointmass_vel_scenario(double mu = 0.5);

struct BuiltinScenario {
  const char* name;
  const char* figure;
  Scenario (*make)();
};

const std::vector<BuiltinScenario>& builtin_scenarios();

}  // namespace lexctrl
