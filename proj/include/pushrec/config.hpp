#pragma once

#include <string>
#include <vector>

#include "pushrec/integrator.hpp"
#include "pushrec/planner.hpp"
#include "pushrec/recovery.hpp"
#include "pushrec/sweep.hpp"

namespace pushrec {

struct OutputConfig {
  std::string dir = "out";
  bool csv = true;
  bool svg = true;
  int jobs = 1;
  std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};
};

struct RunConfig {
  RobotParams robot;
  SimConfig sim;
  GridSpec grid;
  StepParams step;
  SwingProfile swing;
  PolicyBundle policy;
  OutputConfig output;
};

/**
 * Sectioned key = value configuration text.
 *
 * Sections: [robot], [sim], [grid], [step], [policy], [output].
 * '#' and ';' start comments. Unknown sections or keys, type mismatches and
 * invariant violations raise ConfigError with the key and line number.
 * Unset keys take the built-in defaults; quantities derived from others
 * (tau_a_max, i_p, l_pend, m_fly, m_pend, CoP bounds, t_init, the swing
 * duration and the policy control period) follow the final base values
 * unless set explicitly.
 */
RunConfig parse_config(const std::string& text);

// Reads and parses a file; an empty path yields the defaults.
RunConfig load_config_file(const std::string& path);

}  // namespace pushrec
