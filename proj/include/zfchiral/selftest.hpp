#pragma once

// Invariant checks run by the `selftest` subcommand.

#include <string>
#include <vector>

namespace zfchiral {

struct SelftestCheck {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestCheck> run_selftest();

}  // namespace zfchiral
