#include "mtbounds/runner/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mtbounds/runner/scenario.hpp"

namespace mtb::runner {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::optional<double> risk_lower_bound(std::optional<double> value) {
  if (!value || std::isnan(*value)) return std::nullopt;
  return std::clamp(1.0 - *value, 0.0, 1.0);
}

std::string join_inputs(const BoundResult& b) {
  std::string out;
  for (const auto& [name, v] : b.divergence_inputs) {
    if (!out.empty()) out += ';';
    out += name + "=" + format_number(v);
  }
  if (!b.notes.empty()) {
    if (!out.empty()) out += ';';
    out += b.notes;
  }
  return out;
}

ordered_json number_json(std::optional<double> v) {
  if (!v || std::isnan(*v)) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return round_for_output(*v);
}

std::optional<double> number_from_json(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("report: unexpected string number '" + s + "'");
  }
  return v.get<double>();
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw SchemaError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

double round_for_output(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string format_number(std::optional<double> v) {
  if (!v || std::isnan(*v)) return "n/a";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", *v);
  return buf;
}

std::vector<ReportRow> rows_from_comparison(const Comparison& c, unsigned n,
                                            const std::string& reference_label_text) {
  std::vector<ReportRow> rows;
  for (const auto& b : c.bounds) {
    ReportRow row;
    row.method = b.method;
    row.target = std::string(target_name(b.target));
    if (b.available) {
      row.value = b.value;
      row.raw_value = b.raw_value;
      row.vacuous = b.vacuous;
    }
    row.lambda_star = b.lambda_used;
    row.reference_label = b.reference_used ? reference_label(*b.reference_used) : "-";
    row.n = n;
    row.minimax_risk_lower_bound = risk_lower_bound(row.value);
    row.notes = join_inputs(b);
    rows.push_back(std::move(row));
  }

  ReportRow bayes;
  bayes.target = "bayes_success";
  bayes.n = n;
  if (const auto* mc = std::get_if<MonteCarloEstimate>(&c.risk.bayes_method)) {
    bayes.method = "mc_bayes";
    bayes.reference_label = reference_label_text;
    bayes.notes = "ci_low=" + format_number(mc->ci_low) + ";ci_high=" + format_number(mc->ci_high) +
                  ";samples=" + std::to_string(mc->samples) + ";seed=" + std::to_string(mc->seed) +
                  ";kurtosis=" + format_number(mc->kurtosis);
  } else {
    bayes.method = "exact_bayes";
    bayes.reference_label = "-";
  }
  if (c.bayes_available) {
    bayes.value = c.risk.bayes_success;
    bayes.raw_value = c.risk.bayes_success;
  } else {
    bayes.notes = "n/a: product alphabet exceeds the size cap";
  }
  bayes.minimax_risk_lower_bound = risk_lower_bound(bayes.value);
  rows.push_back(std::move(bayes));

  if (c.risk.minimax) {
    const auto& mm = *c.risk.minimax;
    const std::string iterations = "iterations=" + std::to_string(mm.iterations);
    for (const auto& [name, v] : {std::pair{"minimax_lower", mm.lower}, {"minimax_upper", mm.upper}}) {
      ReportRow row;
      row.method = name;
      row.target = "minimax_success";
      row.value = v;
      row.raw_value = v;
      row.reference_label = "-";
      row.n = n;
      row.minimax_risk_lower_bound = risk_lower_bound(v);
      row.notes = iterations;
      rows.push_back(std::move(row));
    }
  }
  if (c.risk.deterministic_minimax) {
    ReportRow row;
    row.method = "minimax_deterministic";
    row.target = "minimax_success";
    row.value = *c.risk.deterministic_minimax;
    row.raw_value = row.value;
    row.reference_label = "-";
    row.n = n;
    row.minimax_risk_lower_bound = risk_lower_bound(row.value);
    row.notes = "best deterministic rule (exhaustive)";
    rows.push_back(std::move(row));
  }
  // Rows carry exactly what gets serialized, so a JSON round trip reproduces them.
  auto round = [](std::optional<double>& v) {
    if (v) v = round_for_output(*v);
  };
  for (auto& r : rows) {
    round(r.value);
    round(r.raw_value);
    round(r.lambda_star);
    round(r.minimax_risk_lower_bound);
  }
  return rows;
}

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << csv_field(r.method) << ',' << csv_field(r.target) << ',' << format_number(r.value) << ','
        << format_number(r.raw_value) << ','
        << (r.value ? (r.vacuous ? "true" : "false") : "n/a") << ','
        << (r.lambda_star ? format_number(r.lambda_star) : "") << ','
        << csv_field(r.reference_label) << ',' << r.n << ','
        << format_number(r.minimax_risk_lower_bound) << ',' << csv_field(r.notes) << '\n';
  }
  return out.str();
}

std::string render_json(const Report& report) {
  ordered_json doc;
  doc["command"] = report.command;
  doc["scenario"] = ordered_json::parse(report.scenario.dump());
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["method"] = r.method;
    row["target"] = r.target;
    row["value"] = number_json(r.value);
    row["raw_value"] = number_json(r.raw_value);
    row["vacuous"] = r.vacuous;
    row["lambda_star"] = number_json(r.lambda_star);
    row["reference_label"] = r.reference_label;
    row["n"] = r.n;
    row["minimax_risk_lower_bound"] = number_json(r.minimax_risk_lower_bound);
    row["notes"] = r.notes;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

std::string render(const Report& report, Format format) {
  return format == Format::Csv ? render_csv(report) : render_json(report);
}

std::vector<ReportRow> parse_json_rows(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  std::vector<ReportRow> rows;
  for (const auto& r : doc.at("rows")) {
    ReportRow row;
    row.method = r.at("method").get<std::string>();
    row.target = r.at("target").get<std::string>();
    row.value = number_from_json(r.at("value"));
    row.raw_value = number_from_json(r.at("raw_value"));
    row.vacuous = r.at("vacuous").get<bool>();
    row.lambda_star = number_from_json(r.at("lambda_star"));
    row.reference_label = r.at("reference_label").get<std::string>();
    row.n = r.at("n").get<unsigned>();
    row.minimax_risk_lower_bound = number_from_json(r.at("minimax_risk_lower_bound"));
    row.notes = r.at("notes").get<std::string>();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw ParseError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mtb::runner
