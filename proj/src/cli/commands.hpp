#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "richcore/types.hpp"

namespace richcore::cli {

struct RunConfig {
  std::string mode = "simple";
  std::vector<Index> r_values;
  std::string input_path;
  std::vector<std::string> target_paths;
  int target_col = -1;  // >= 0: take this column of the input as the target
  bool header = false;
  std::string domain = "unconstrained";
  std::uint64_t seed = 0;
  std::string out_path;  // empty: stdout
  Index trials = 20;
  // adversarial subcommand
  Index adv_n = 0;
  Index adv_d = 2;
  Index adv_ell = -1;  // < 0 selects the deterministic worst-case check
};

std::string run_build(const RunConfig& config);
std::string run_verify(const RunConfig& config);
std::string run_bench(const RunConfig& config);
std::string run_adversarial(const RunConfig& config);

/// Writes to config.out_path, or stdout when no path is set.
void emit_report(const RunConfig& config, const std::string& report);

/// 0 on success, 2 on parse failures, 3 on violated preconditions,
/// 4 on solver or numerical failures.
int exit_code_for_current_exception();

}  // namespace richcore::cli
