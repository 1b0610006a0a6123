#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtbounds/measure_family.hpp"

namespace mtb::runner {

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::size_t families = 200;
  std::size_t max_members = 9;
  std::size_t max_atoms = 20;
  std::size_t minimax_iters = 20000;
  std::optional<std::filesystem::path> scenario;  // check one scenario's family instead
  std::filesystem::path reproducer = "verify_reproducer.json";
  // Test hook: scales the VJ bounds before the soundness checks. 1 in normal runs.
  double vj_fault_scale = 1.0;
};

struct InvariantTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
};

struct VerifyOutcome {
  std::vector<InvariantTally> tallies;
  std::optional<FiniteFamily> failing_family;  // smallest family with a failure
  std::string first_failure;
  bool ok() const { return !failing_family.has_value(); }
};

VerifyOutcome run_verify(const VerifyOptions& options);

// Prints the tallies, writes the reproducer on failure, returns the exit code (0 or 3).
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mtb::runner
