#include "mtbounds/runner/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace mtb::runner {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& key, const std::string& what) {
  throw SchemaError("scenario key '" + key + "': " + what);
}

std::string child(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& value, const std::string& path) {
  if (!value.is_object()) schema_error(path, "expected an object");
}

void check_keys(const json& object, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      std::string list;
      for (auto a : allowed) {
        if (!list.empty()) list += ", ";
        list += a;
      }
      schema_error(child(path, key), "unknown key (allowed: " + list + ")");
    }
  }
}

const json& required(const json& object, const std::string& path, const std::string& key) {
  const auto it = object.find(key);
  if (it == object.end()) schema_error(child(path, key), "missing required key");
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) schema_error(path, "expected a number");
  return value.get<double>();
}

std::uint64_t as_unsigned(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  schema_error(path, "expected a non-negative integer");
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) schema_error(path, "expected a string");
  return value.get<std::string>();
}

std::vector<double> as_number_array(const json& value, const std::string& path) {
  if (!value.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_number(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& value, const std::string& path) {
  if (!value.is_array()) schema_error(path, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_number_array(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

FamilySpec parse_family(const json& value) {
  const std::string path = "family_spec";
  require_object(value, path);
  const std::string kind = as_string(required(value, path, "kind"), child(path, "kind"));
  if (kind == "finite") {
    check_keys(value, path, {"kind", "atoms", "weights", "density_matrix"});
    FiniteFamilySpec spec;
    spec.density_matrix =
        as_matrix(required(value, path, "density_matrix"), child(path, "density_matrix"));
    if (spec.density_matrix.empty()) schema_error(child(path, "density_matrix"), "no rows");
    const std::size_t atoms = spec.density_matrix.front().size();
    if (auto it = value.find("atoms"); it != value.end()) {
      if (!it->is_array()) schema_error(child(path, "atoms"), "expected an array of labels");
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& label = (*it)[i];
        if (label.is_string()) {
          spec.atoms.push_back(label.get<std::string>());
        } else if (label.is_number_integer()) {
          spec.atoms.push_back(std::to_string(label.get<std::int64_t>()));
        } else {
          schema_error(child(path, "atoms"), "labels must be strings or integers");
        }
      }
    } else {
      for (std::size_t x = 0; x < atoms; ++x) spec.atoms.push_back(std::to_string(x));
    }
    if (auto it = value.find("weights"); it != value.end()) {
      spec.weights = as_number_array(*it, child(path, "weights"));
    } else {
      spec.weights.assign(spec.atoms.size(), 1.0);
    }
    return spec;
  }
  if (kind == "gaussian") {
    check_keys(value, path, {"kind", "means", "sigma"});
    GaussianFamilySpec spec;
    spec.means = as_matrix(required(value, path, "means"), child(path, "means"));
    spec.sigma = as_number(required(value, path, "sigma"), child(path, "sigma"));
    return spec;
  }
  schema_error(child(path, "kind"), "expected \"finite\" or \"gaussian\", got \"" + kind + "\"");
}

ReferenceSpec parse_reference(const json& value) {
  const std::string path = "reference";
  require_object(value, path);
  const std::string kind = as_string(required(value, path, "kind"), child(path, "kind"));
  if (kind == "uniform_mixture") {
    check_keys(value, path, {"kind"});
    return UniformMixture{};
  }
  if (kind == "indexed") {
    check_keys(value, path, {"kind", "index"});
    return Indexed{static_cast<std::size_t>(
        as_unsigned(required(value, path, "index"), child(path, "index")))};
  }
  if (kind == "custom_weights") {
    check_keys(value, path, {"kind", "weights"});
    return CustomWeights{as_number_array(required(value, path, "weights"), child(path, "weights"))};
  }
  if (kind == "custom_density") {
    check_keys(value, path, {"kind", "density"});
    return CustomDensity{as_number_array(required(value, path, "density"), child(path, "density"))};
  }
  schema_error(child(path, "kind"),
               "expected uniform_mixture, indexed, custom_weights or custom_density");
}

std::vector<Method> parse_bounds(const json& value) {
  if (!value.is_array() || value.empty()) {
    schema_error("bounds", "expected a non-empty array of method names");
  }
  std::vector<Method> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string name = as_string(value[i], "bounds[" + std::to_string(i) + "]");
    const auto method = parse_method(name);
    if (!method) {
      schema_error("bounds", "unknown method \"" + name + "\" (valid: " + method_names_joined() + ")");
    }
    out.push_back(*method);
  }
  return out;
}

LambdaPolicy parse_lambda_policy(const json& value) {
  const std::string path = "lambda_policy";
  require_object(value, path);
  const std::string kind = as_string(required(value, path, "kind"), child(path, "kind"));
  if (kind == "fixed") {
    check_keys(value, path, {"kind", "lambda"});
    const double lambda = as_number(required(value, path, "lambda"), child(path, "lambda"));
    if (!(lambda > 0.0)) schema_error(child(path, "lambda"), "must be positive");
    return FixedLambda{lambda};
  }
  if (kind == "optimize") {
    check_keys(value, path, {"kind", "range", "points", "tol"});
    OptimizeLambda policy;
    if (auto it = value.find("range"); it != value.end()) {
      const auto range = as_number_array(*it, child(path, "range"));
      if (range.size() != 2) schema_error(child(path, "range"), "expected [lambda_min, lambda_max]");
      policy.search.lambda_min = range[0];
      policy.search.lambda_max = range[1];
    }
    if (auto it = value.find("points"); it != value.end()) {
      policy.search.grid_points = as_unsigned(*it, child(path, "points"));
    }
    if (auto it = value.find("tol"); it != value.end()) {
      policy.search.refine_tol = as_number(*it, child(path, "tol"));
    }
    try {
      validate(policy.search);
    } catch (const ParameterError& e) {
      schema_error(path, e.what());
    }
    return policy;
  }
  schema_error(child(path, "kind"), "expected \"fixed\" or \"optimize\"");
}

json reference_to_json(const ReferenceSpec& ref) {
  struct Visitor {
    json operator()(const UniformMixture&) const { return {{"kind", "uniform_mixture"}}; }
    json operator()(const Indexed& r) const { return {{"kind", "indexed"}, {"index", r.index}}; }
    json operator()(const CustomWeights& r) const {
      return {{"kind", "custom_weights"}, {"weights", r.weights}};
    }
    json operator()(const CustomDensity& r) const {
      return {{"kind", "custom_density"}, {"density", r.density}};
    }
  };
  return std::visit(Visitor{}, ref);
}

void validate_against_family(const Scenario& scenario) {
  const Family family = build_family(scenario);
  const std::size_t members =
      std::visit([](const auto& f) { return f.members(); }, family);
  for (Method m : scenario.bounds) {
    if (m == Method::TwoPoint && members != 2) {
      schema_error("bounds", "method \"two_point\" requires N = 1 but the family has N = " +
                                 std::to_string(members - 1));
    }
    if (m == Method::FanoIH && members < 3) {
      schema_error("bounds", "method \"fano_ih\" requires N >= 2 (log N = 0 for N = 1)");
    }
  }
  if (const auto* finite = std::get_if<FiniteFamily>(&family)) {
    resolve_reference_unchecked(*finite, scenario.reference);
  } else if (std::holds_alternative<CustomDensity>(scenario.reference)) {
    schema_error("reference", "custom_density is only available for finite families");
  }
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  require_object(doc, "<root>");
  check_keys(doc, "",
             {"family_spec", "product_n", "reference", "bounds", "lambda_policy", "mc", "oracle"});
  Scenario s;
  s.family_spec = parse_family(required(doc, "", "family_spec"));
  if (auto it = doc.find("product_n"); it != doc.end()) {
    const auto n = as_unsigned(*it, "product_n");
    if (n == 0) schema_error("product_n", "must be a positive integer");
    s.product_n = static_cast<unsigned>(n);
  }
  if (auto it = doc.find("reference"); it != doc.end()) s.reference = parse_reference(*it);
  s.bounds = parse_bounds(required(doc, "", "bounds"));
  if (auto it = doc.find("lambda_policy"); it != doc.end()) s.lambda_policy = parse_lambda_policy(*it);
  if (auto it = doc.find("mc"); it != doc.end()) {
    require_object(*it, "mc");
    check_keys(*it, "mc", {"samples", "seed"});
    if (auto v = it->find("samples"); v != it->end()) s.mc.samples = as_unsigned(*v, "mc.samples");
    if (auto v = it->find("seed"); v != it->end()) s.mc.seed = as_unsigned(*v, "mc.seed");
    if (s.mc.samples < kMinMonteCarloSamples) {
      schema_error("mc.samples", "must be at least " + std::to_string(kMinMonteCarloSamples));
    }
  }
  if (auto it = doc.find("oracle"); it != doc.end()) {
    require_object(*it, "oracle");
    check_keys(*it, "oracle", {"minimax_iters", "enum_cap", "product_size_cap"});
    if (auto v = it->find("minimax_iters"); v != it->end()) {
      s.oracle.minimax_iters = as_unsigned(*v, "oracle.minimax_iters");
      if (s.oracle.minimax_iters == 0) schema_error("oracle.minimax_iters", "must be positive");
    }
    if (auto v = it->find("enum_cap"); v != it->end()) {
      s.oracle.enum_cap = as_unsigned(*v, "oracle.enum_cap");
    }
    if (auto v = it->find("product_size_cap"); v != it->end()) {
      s.oracle.product_size_cap = as_unsigned(*v, "oracle.product_size_cap");
    }
  }
  validate_against_family(s);
  return s;
}

Scenario parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed scenario JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
  return scenario_from_json(doc);
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

json scenario_to_json(const Scenario& s) {
  json doc;
  if (const auto* f = std::get_if<FiniteFamilySpec>(&s.family_spec)) {
    doc["family_spec"] = {{"kind", "finite"},
                          {"atoms", f->atoms},
                          {"weights", f->weights},
                          {"density_matrix", f->density_matrix}};
  } else {
    const auto& g = std::get<GaussianFamilySpec>(s.family_spec);
    doc["family_spec"] = {{"kind", "gaussian"}, {"means", g.means}, {"sigma", g.sigma}};
  }
  doc["product_n"] = s.product_n;
  doc["reference"] = reference_to_json(s.reference);
  json bounds = json::array();
  for (Method m : s.bounds) bounds.push_back(std::string(method_name(m)));
  doc["bounds"] = bounds;
  if (const auto* fixed = std::get_if<FixedLambda>(&s.lambda_policy)) {
    doc["lambda_policy"] = {{"kind", "fixed"}, {"lambda", fixed->lambda}};
  } else {
    const auto& search = std::get<OptimizeLambda>(s.lambda_policy).search;
    doc["lambda_policy"] = {{"kind", "optimize"},
                            {"range", {search.lambda_min, search.lambda_max}},
                            {"points", search.grid_points},
                            {"tol", search.refine_tol}};
  }
  doc["mc"] = {{"samples", s.mc.samples}, {"seed", s.mc.seed}};
  doc["oracle"] = {{"minimax_iters", s.oracle.minimax_iters},
                   {"enum_cap", s.oracle.enum_cap},
                   {"product_size_cap", s.oracle.product_size_cap}};
  return doc;
}

Family build_family(const Scenario& scenario) {
  if (const auto* f = std::get_if<FiniteFamilySpec>(&scenario.family_spec)) {
    return make_finite_family(f->atoms, f->weights, f->density_matrix);
  }
  const auto& g = std::get<GaussianFamilySpec>(scenario.family_spec);
  return make_gaussian_family(g.means, g.sigma);
}

EvaluationConfig evaluation_config(const Scenario& scenario) {
  EvaluationConfig cfg;
  cfg.methods = scenario.bounds;
  cfg.reference = scenario.reference;
  cfg.lambda = scenario.lambda_policy;
  cfg.minimax_iters = scenario.oracle.minimax_iters;
  cfg.enum_cap = scenario.oracle.enum_cap;
  cfg.mc_samples = scenario.mc.samples;
  cfg.mc_seed = scenario.mc.seed;
  return cfg;
}

Scenario scenario_for_family(const FiniteFamily& family, std::vector<Method> bounds) {
  FiniteFamilySpec spec;
  spec.atoms = family.space().labels();
  const auto w = family.space().weights();
  spec.weights.assign(w.begin(), w.end());
  for (std::size_t j = 0; j < family.members(); ++j) {
    const auto row = family.density(j);
    spec.density_matrix.emplace_back(row.begin(), row.end());
  }
  Scenario s;
  s.family_spec = std::move(spec);
  s.bounds = std::move(bounds);
  return s;
}

}  // namespace mtb::runner
