#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mtbounds/runner/commands.hpp"
#include "mtbounds/runner/verify.hpp"

namespace runner = mtb::runner;

int main(int argc, char** argv) {
  CLI::App app{"mtbounds: Bayes and minimax success bounds for multiple testing"};
  app.require_subcommand(1);

  std::string scenario;
  std::string format = "csv";
  std::string out_path;
  std::string n_list;

  auto* eval = app.add_subcommand("eval", "Evaluate the bounds of one scenario");
  eval->add_option("scenario", scenario, "Scenario JSON file")->required();
  eval->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  eval->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Evaluate the scenario on n-fold products");
  sweep->add_option("scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--n", n_list, "Comma-separated product sizes, e.g. 1,2,5,10")->required();
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out_path, "Write the report here instead of stdout");

  runner::VerifyOptions vopt;
  std::string verify_scenario;
  std::string fault;
  auto* verify = app.add_subcommand("verify", "Check every invariant on random families");
  verify->add_option("--seed", vopt.seed, "Root seed");
  verify->add_option("--families", vopt.families, "Number of random families");
  verify->add_option("--scenario", verify_scenario, "Check this scenario's family instead");
  verify->add_option("--reproducer", vopt.reproducer, "Where to write a failing family");
  verify->add_option("--inject-fault", fault, "Self-test hook")->check(CLI::IsMember({"vj_half"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? runner::kExitOk : runner::kExitParse;
  }

  const std::optional<std::filesystem::path> out =
      out_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_path);
  const auto fmt = runner::parse_format(format);

  if (eval->parsed()) return runner::cmd_eval(scenario, fmt, out, std::cout, std::cerr);
  if (sweep->parsed()) {
    std::vector<unsigned> ns;
    try {
      ns = runner::parse_n_list(n_list);
    } catch (const runner::SchemaError& e) {
      std::cerr << "schema error: " << e.what() << '\n';
      return runner::kExitParse;
    }
    return runner::cmd_sweep(scenario, ns, fmt, out, std::cout, std::cerr);
  }
  if (!verify_scenario.empty()) vopt.scenario = verify_scenario;
  if (fault == "vj_half") vopt.vj_fault_scale = 0.5;
  return runner::cmd_verify(vopt, std::cout, std::cerr);
}
