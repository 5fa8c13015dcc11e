#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chronosat::cli {

struct FlagSpec {
  std::string name;
  std::string value_name;  // empty for switches
  std::string help;
  std::vector<std::string> commands;
  std::string default_value;
  bool repeatable = false;

  bool is_switch() const { return value_name.empty(); }
  bool applies_to(const std::string& command) const;
};

/// Every flag accepted by any subcommand. Config files use the same keys.
const std::vector<FlagSpec>& flag_table();
const std::vector<std::string>& subcommands();

/// Runs one invocation. Exit status: 0 plan/valid, 10 no plan, 20 timeout,
/// 30 unknown, 1 error or invalid plan, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chronosat::cli
