#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtbounds/compare.hpp"
#include "mtbounds/error.hpp"
#include "mtbounds/measure_family.hpp"

namespace mtb::runner {

// Malformed JSON or unreadable file. Exit code 1.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed JSON that does not match the scenario schema. Exit code 1.
class SchemaError : public Error {
 public:
  using Error::Error;
};

struct FiniteFamilySpec {
  std::vector<std::string> atoms;
  std::vector<double> weights;
  std::vector<std::vector<double>> density_matrix;
};

struct GaussianFamilySpec {
  std::vector<std::vector<double>> means;
  double sigma = 1.0;
};

using FamilySpec = std::variant<FiniteFamilySpec, GaussianFamilySpec>;

struct McSettings {
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
};

struct OracleSettings {
  std::size_t minimax_iters = 100000;
  std::size_t enum_cap = 100000;
  std::size_t product_size_cap = kDefaultProductCap;
};

struct Scenario {
  FamilySpec family_spec;
  unsigned product_n = 1;
  ReferenceSpec reference = UniformMixture{};
  std::vector<Method> bounds;
  LambdaPolicy lambda_policy = FixedLambda{1.0};
  McSettings mc;
  OracleSettings oracle;
};

using Family = std::variant<FiniteFamily, GaussianFamily>;

// Parses and validates a scenario. Family construction errors surface as DomainError;
// a method that does not apply to the family's arity is reported as a SchemaError.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text);
Scenario scenario_from_json(const nlohmann::json& doc);

// Canonical JSON form with every default filled in.
nlohmann::json scenario_to_json(const Scenario& scenario);

Family build_family(const Scenario& scenario);
EvaluationConfig evaluation_config(const Scenario& scenario);

// Finite scenario wrapping an existing family; used for verification reproducers.
Scenario scenario_for_family(const FiniteFamily& family, std::vector<Method> bounds);

}  // namespace mtb::runner
