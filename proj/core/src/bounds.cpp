#include "mtbounds/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mtbounds/divergence.hpp"
#include "mtbounds/error.hpp"

namespace mtb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVacuousSnap = 1e-12;

struct MethodEntry {
  Method method;
  std::string_view name;
};

constexpr std::array<MethodEntry, 10> kMethods{{
    {Method::TwoPoint, "two_point"},
    {Method::FanoIH, "fano_ih"},
    {Method::FanoNew, "fano_new"},
    {Method::Birge, "birge"},
    {Method::BirgeMassart, "birge_massart"},
    {Method::VJ, "vj"},
    {Method::VJImproved, "vj_improved"},
    {Method::PhiHinge, "phi_hinge"},
    {Method::PhiEntropy, "phi_entropy"},
    {Method::PhiPower, "phi_power"},
}};

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be positive and finite");
  }
}

}  // namespace

std::string_view target_name(Target target) {
  return target == Target::BayesSuccess ? "bayes_success" : "minimax_success";
}

std::string_view method_name(Method method) {
  for (const auto& e : kMethods) {
    if (e.method == method) return e.name;
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& e : kMethods) {
    if (e.name == name) return e.method;
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> out;
    for (const auto& e : kMethods) out.push_back(e.method);
    return out;
  }();
  return methods;
}

std::string method_names_joined() {
  std::string out;
  for (const auto& e : kMethods) {
    if (!out.empty()) out += ", ";
    out += e.name;
  }
  return out;
}

BoundResult make_bound(std::string method, Target target, double raw_value, std::size_t members) {
  BoundResult r;
  r.method = std::move(method);
  r.target = target;
  // Rounding noise around 1 (e.g. point masses, where the bound is exactly 1) counts as 1.
  if (std::abs(raw_value - 1.0) <= kVacuousSnap) raw_value = 1.0;
  r.raw_value = raw_value;
  const double floor = 1.0 / static_cast<double>(members);
  r.value = std::min(std::max(raw_value, floor), 1.0);
  r.vacuous = !(raw_value < 1.0);
  return r;
}

BoundResult unavailable_bound(std::string method, Target target, std::string reason) {
  BoundResult r;
  r.method = std::move(method);
  r.target = target;
  r.raw_value = std::numeric_limits<double>::quiet_NaN();
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.vacuous = false;
  r.available = false;
  r.notes = std::move(reason);
  return r;
}

double phi_moment_sum(const FiniteFamily& family, const PhiFunction& phi,
                      const FiniteDistribution& q) {
  if (first_undominated_member(family, q)) return kInf;
  const auto mu = family.space().weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < family.members(); ++j) {
    for (std::size_t x = 0; x < family.atoms(); ++x) {
      if (q[x] == 0.0) continue;
      sum += phi(family.density(j, x) / q[x]) * q[x] * mu[x];
    }
  }
  return sum;
}

BoundResult phi_bound(const FiniteFamily& family, const PhiFunction& phi, const ReferenceSpec& ref) {
  const FiniteDistribution q = resolve_reference_unchecked(family, ref);
  const double budget = phi_moment_sum(family, phi, q);
  const double members = static_cast<double>(family.members());
  std::string name = "phi_" + phi.name();
  if (phi.kind() == PhiFunction::Kind::TruncatedEntropy) name = "phi_entropy";
  BoundResult r = make_bound(std::move(name), Target::BayesSuccess,
                             invert_phi_uncapped(phi, budget) / members, family.members());
  r.reference_used = ref;
  r.divergence_inputs.emplace_back("phi_sum", budget);
  if (phi.kind() == PhiFunction::Kind::Power) r.lambda_used = phi.lambda();
  if (auto j = first_undominated_member(family, q)) {
    r.notes = "reference " + reference_label(ref) + " does not dominate P" + std::to_string(*j);
  }
  return r;
}

BoundResult two_point_bound_from_tv(double total_variation) {
  if (!(total_variation >= 0.0) || total_variation > 1.0 + 1e-12) {
    throw ParameterError("two_point: total variation must lie in [0, 1]");
  }
  BoundResult r = make_bound("two_point", Target::BayesSuccess, 0.5 * (1.0 + total_variation), 2);
  r.divergence_inputs.emplace_back("tv", total_variation);
  return r;
}

BoundResult two_point_bound(const FiniteDistribution& p0, const FiniteDistribution& p1) {
  return two_point_bound_from_tv(total_variation(p0, p1).value);
}

BoundResult two_point_bound(const FiniteFamily& family) {
  if (family.members() != 2) {
    throw ArityError("two_point requires exactly two members (N = 1), got N = " +
                     std::to_string(family.max_index()));
  }
  return two_point_bound(family.member(0), family.member(1));
}

BoundResult fano_ih_bound(double k_tilde, std::size_t max_index) {
  if (max_index <= 1) {
    throw ArityError("fano_ih requires N >= 2 (log N vanishes for N = 1), got N = " +
                     std::to_string(max_index));
  }
  if (std::isnan(k_tilde) || k_tilde < 0.0) throw ParameterError("fano_ih: K~ must be >= 0");
  const double raw = (k_tilde + std::log(2.0)) / std::log(static_cast<double>(max_index));
  BoundResult r = make_bound("fano_ih", Target::MinimaxSuccess, raw, max_index + 1);
  r.reference_used = UniformMixture{};
  r.divergence_inputs.emplace_back("k_tilde", k_tilde);
  return r;
}

BoundResult fano_ih_bound(const FiniteFamily& family) {
  return fano_ih_bound(avg_kl(family, uniform_mixture(family)), family.max_index());
}

BoundResult fano_new_bound(double k_tilde, std::size_t max_index) {
  if (max_index < 1) throw ArityError("fano_new requires N >= 1");
  if (std::isnan(k_tilde) || k_tilde < 0.0) throw ParameterError("fano_new: K~ must be >= 0");
  const double n = static_cast<double>(max_index);
  const double log_m = std::log(n + 1.0);
  const double raw = (k_tilde + n / (n + 1.0)) / log_m;
  const double loose = (k_tilde + 1.0) / log_m;
  BoundResult r = make_bound("fano_new", Target::BayesSuccess, raw, max_index + 1);
  r.reference_used = UniformMixture{};
  r.divergence_inputs.emplace_back("k_tilde", k_tilde);
  r.divergence_inputs.emplace_back("loose_variant", loose);
  return r;
}

BoundResult fano_new_bound(const FiniteFamily& family) {
  return fano_new_bound(avg_kl(family, uniform_mixture(family)), family.max_index());
}

BoundResult birge_bound(double k_bar, std::size_t max_index, double kappa) {
  if (max_index < 1) throw ArityError("birge requires N >= 1");
  if (!(kappa > 0.0 && kappa < 1.0)) throw ParameterError("birge: kappa must lie in (0, 1)");
  if (std::isnan(k_bar) || k_bar < 0.0) throw ParameterError("birge: K_bar must be >= 0");
  const double n = static_cast<double>(max_index);
  const double second = (1.0 + 1.0 / n) * k_bar / std::log(n + 1.0);
  const std::string name = kappa == kMassartKappa ? "birge_massart" : "birge";
  BoundResult r = make_bound(name, Target::MinimaxSuccess, std::max(kappa, second), max_index + 1);
  r.reference_used = Indexed{0};
  r.divergence_inputs.emplace_back("k_bar", k_bar);
  r.divergence_inputs.emplace_back("kappa", kappa);
  return r;
}

BoundResult birge_bound(const FiniteFamily& family, double kappa) {
  const FiniteDistribution p0 = family.member(0);
  BoundResult r = birge_bound(avg_kl(family, p0), family.max_index(), kappa);
  if (auto j = first_undominated_member(family, p0)) {
    r.notes = "K(P" + std::to_string(*j) + ",P0)=inf: P0 does not dominate P" + std::to_string(*j);
  }
  return r;
}

double vj_constant(double lambda) {
  check_lambda(lambda);
  return (1.0 + lambda) * std::pow(lambda, -lambda / (1.0 + lambda));
}

BoundResult vj_bound_from_log(double log_power_sum, double lambda, std::size_t max_index,
                              bool improved) {
  check_lambda(lambda);
  if (std::isnan(log_power_sum)) throw ParameterError("vj: power sum is NaN");
  const double members = static_cast<double>(max_index + 1);
  const double improved_raw = std::exp(log_power_sum / (1.0 + lambda) - std::log(members));
  const double raw = improved ? improved_raw : vj_constant(lambda) * improved_raw;
  BoundResult r =
      make_bound(improved ? "vj_improved" : "vj", Target::BayesSuccess, raw, max_index + 1);
  r.lambda_used = lambda;
  r.divergence_inputs.emplace_back("log_power_sum", log_power_sum);
  return r;
}

BoundResult vj_bound(double power_sum, double lambda, std::size_t max_index, bool improved) {
  if (std::isnan(power_sum) || power_sum < 0.0) throw ParameterError("vj: power sum must be >= 0");
  check_lambda(lambda);
  const double members = static_cast<double>(max_index + 1);
  const double improved_raw = std::pow(power_sum, 1.0 / (1.0 + lambda)) / members;
  const double raw = improved ? improved_raw : vj_constant(lambda) * improved_raw;
  BoundResult r =
      make_bound(improved ? "vj_improved" : "vj", Target::BayesSuccess, raw, max_index + 1);
  r.lambda_used = lambda;
  r.divergence_inputs.emplace_back("power_sum", power_sum);
  return r;
}

double log_power_sum(const FiniteFamily& family, const FiniteDistribution& q, double lambda) {
  std::vector<double> logs(family.members());
  for (std::size_t j = 0; j < family.members(); ++j) {
    logs[j] = log_power_divergence(family.member(j), q, lambda);
    if (std::isinf(logs[j])) return kInf;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - top);
  return top + std::log(sum);
}

BoundResult vj_bound(const FiniteFamily& family, const ReferenceSpec& ref, double lambda,
                     bool improved) {
  const FiniteDistribution q = resolve_reference_unchecked(family, ref);
  BoundResult r = vj_bound_from_log(log_power_sum(family, q, lambda), lambda, family.max_index(),
                                    improved);
  r.reference_used = ref;
  if (auto j = first_undominated_member(family, q)) {
    r.notes = "reference " + reference_label(ref) + " does not dominate P" + std::to_string(*j);
  }
  return r;
}

}  // namespace mtb
