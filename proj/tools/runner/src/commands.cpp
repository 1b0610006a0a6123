#include "mtbounds/runner/commands.hpp"

#include <charconv>
#include <ostream>

namespace mtb::runner {
namespace {

Comparison evaluate(const Family& family, const EvaluationConfig& cfg, unsigned n,
                    std::size_t product_cap) {
  if (const auto* finite = std::get_if<FiniteFamily>(&family)) {
    return n == 1 ? compare_all(*finite, cfg) : compare_product(*finite, cfg, n, product_cap);
  }
  const auto& gaussian = std::get<GaussianFamily>(family);
  return n == 1 ? compare_all(gaussian, cfg) : compare_product(gaussian, cfg, n);
}

void append(Report& report, const Comparison& c, unsigned n, const std::string& label) {
  auto rows = rows_from_comparison(c, n, label);
  report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  for (const auto& w : c.warnings) report.warnings.push_back("n=" + std::to_string(n) + ": " + w);
}

template <typename Run>
int guarded(Run&& run, std::ostream& err) {
  try {
    return run();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitParse;
  } catch (const TheoremViolation& e) {
    err << "theorem violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitParse;
  }
}

void emit(const Report& report, Format format, const std::optional<std::filesystem::path>& out_path,
          std::ostream& out, std::ostream& err) {
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  const std::string text = render(report, format);
  if (out_path) {
    write_atomically(*out_path, text);
  } else {
    out << text;
  }
}

}  // namespace

Report run_eval(const Scenario& scenario) {
  const Family family = build_family(scenario);
  const EvaluationConfig cfg = evaluation_config(scenario);
  Report report;
  report.command = "eval";
  report.scenario = scenario_to_json(scenario);
  append(report, evaluate(family, cfg, scenario.product_n, scenario.oracle.product_size_cap),
         scenario.product_n, reference_label(cfg.reference));
  return report;
}

Report run_sweep(const Scenario& scenario, const std::vector<unsigned>& n_list) {
  if (n_list.empty()) throw SchemaError("sweep: --n needs at least one value");
  const Family family = build_family(scenario);
  EvaluationConfig cfg = evaluation_config(scenario);
  cfg.minimax = false;
  Report report;
  report.command = "sweep";
  report.scenario = scenario_to_json(scenario);
  for (unsigned n : n_list) {
    if (n == 0) throw SchemaError("sweep: n values must be positive");
    Comparison c;
    if (const auto* finite = std::get_if<FiniteFamily>(&family)) {
      c = compare_product(*finite, cfg, n, scenario.oracle.product_size_cap);
    } else {
      c = compare_product(std::get<GaussianFamily>(family), cfg, n);
    }
    append(report, c, n, reference_label(cfg.reference));
  }
  return report;
}

std::vector<unsigned> parse_n_list(const std::string& text) {
  std::vector<unsigned> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string_view item(text.data() + start, end - start);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw SchemaError("--n: '" + std::string(item) + "' is not a positive integer");
    }
    if (value == 0) throw SchemaError("--n: product sizes must be positive (got 0)");
    out.push_back(value);
    start = end + 1;
  }
  return out;
}

int cmd_eval(const std::filesystem::path& scenario_path, Format format,
             const std::optional<std::filesystem::path>& out_path, std::ostream& out,
             std::ostream& err) {
  return guarded(
      [&] {
        const Scenario scenario = parse_scenario(scenario_path);
        emit(run_eval(scenario), format, out_path, out, err);
        return static_cast<int>(kExitOk);
      },
      err);
}

int cmd_sweep(const std::filesystem::path& scenario_path, const std::vector<unsigned>& n_list,
              Format format, const std::optional<std::filesystem::path>& out_path,
              std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const Scenario scenario = parse_scenario(scenario_path);
        emit(run_sweep(scenario, n_list), format, out_path, out, err);
        return static_cast<int>(kExitOk);
      },
      err);
}

}  // namespace mtb::runner
