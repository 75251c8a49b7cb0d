#pragma once

#include <string>
#include <vector>

#include "lexctrl/simulator.hpp"

namespace lexctrl {

// Key override applied on top of a parsed config, e.g. "run.method=GN".
struct ConfigOverride {
  std::string section;
  std::string key;
  std::string raw_value;
};

ConfigOverride parse_override(const std::string& spec);

// Scenario files are plain text with three sections:
//
//   [chain]
//   links = [{length = 1.0, mass = 1.0, com_offset = 1.0}, ...]
//   gravity = [0.0, -9.81]
//
//   [tasks]
//   task = {level = 1, kind = EOM}
//   task = {level = 3, kind = TIP_POSITION, kp = 1.0, kv = 2.0,
//           target = [1.0, 1.0], augmentable = true}
//
//   [run]
//   dt = 0.005
//   duration = 10.0
//   formulation = VEL        # VEL | ACC
//   method = NEWTON_AH       # GN | NEWTON_AH | LM
//   mu = 0.1
//   seed = 0
//   q0 = [-3.141592653589793, 1.0]
//   qd0 = [0.0, 0.0]
//
// '#' starts a comment. Unknown sections or keys are rejected.
Scenario load_scenario_text(const std::string& text, const std::string& name,
                            const std::vector<ConfigOverride>& overrides = {});
Scenario load_scenario_file(const std::string& path,
                            const std::vector<ConfigOverride>& overrides = {});

}  // namespace lexctrl
