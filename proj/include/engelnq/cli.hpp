#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "engelnq/common.hpp"

namespace engelnq {

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string word;        // collect
  std::string group_name;  // pick one block from a multi-group file
  int max_class = 0;
  int depth = 0;
  long bound = 4096;
  bool json = false;
  bool full = false;  // consistency: unbounded overlap set
  unsigned long long seed = 0;
  double budget_seconds = 7200.0;
  long long budget_rows = 100000000;
};

// Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
// 2 = usage or parse error, 3 = resource budget exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace engelnq
