#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtbounds/runner/report.hpp"
#include "mtbounds/runner/scenario.hpp"

namespace mtb::runner {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitDomain = 2,
  kExitViolation = 3,
};

Report run_eval(const Scenario& scenario);
Report run_sweep(const Scenario& scenario, const std::vector<unsigned>& n_list);

// "1,2,5,10" -> {1, 2, 5, 10}; SchemaError on empty entries, zero or garbage.
std::vector<unsigned> parse_n_list(const std::string& text);

// Runs a command end to end and maps failures onto the exit-code contract. The report
// goes to `out_path` when given, otherwise to `out`; diagnostics go to `err`.
int cmd_eval(const std::filesystem::path& scenario_path, Format format,
             const std::optional<std::filesystem::path>& out_path, std::ostream& out,
             std::ostream& err);
int cmd_sweep(const std::filesystem::path& scenario_path, const std::vector<unsigned>& n_list,
              Format format, const std::optional<std::filesystem::path>& out_path,
              std::ostream& out, std::ostream& err);

}  // namespace mtb::runner
