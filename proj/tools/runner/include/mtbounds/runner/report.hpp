#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtbounds/compare.hpp"

namespace mtb::runner {

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

// One report line. Empty optionals render as "n/a".
struct ReportRow {
  std::string method;
  std::string target;
  std::optional<double> value;
  std::optional<double> raw_value;
  bool vacuous = false;
  std::optional<double> lambda_star;
  std::string reference_label;
  unsigned n = 1;
  std::optional<double> minimax_risk_lower_bound;  // 1 - value, clamped to [0, 1]
  std::string notes;

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::string command;
  nlohmann::json scenario;  // echo with defaults filled
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
};

inline constexpr std::string_view kCsvHeader =
    "method,target,value,raw_value,vacuous,lambda_star,reference_label,n,"
    "minimax_risk_lower_bound,notes";

// Rows for one comparison: the bounds (sorted by method), then the Bayes success and
// the minimax bracket.
std::vector<ReportRow> rows_from_comparison(const Comparison& comparison, unsigned n,
                                            const std::string& reference_label);

// 12 significant digits; "inf" for infinity, "n/a" for missing values.
std::string format_number(std::optional<double> v);
// Rounds to the 12 significant digits used in serialized output.
double round_for_output(double v);

std::string render_csv(const Report& report);
std::string render_json(const Report& report);
std::string render(const Report& report, Format format);

std::vector<ReportRow> parse_json_rows(std::string_view text);

// Writes to a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace mtb::runner
