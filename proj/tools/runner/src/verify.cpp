#include "mtbounds/runner/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "mtbounds/bounds.hpp"
#include "mtbounds/compare.hpp"
#include "mtbounds/divergence.hpp"
#include "mtbounds/error.hpp"
#include "mtbounds/phi.hpp"
#include "mtbounds/random_family.hpp"
#include "mtbounds/risk.hpp"
#include "mtbounds/runner/commands.hpp"
#include "mtbounds/runner/report.hpp"
#include "mtbounds/runner/scenario.hpp"

namespace mtb::runner {
namespace {

constexpr std::size_t kProductAtomCap = 10000;
constexpr std::size_t kRuleEnumerationCap = 5000;

bool close_rel(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

std::string str(double v) { return format_number(v); }

std::vector<Method> applicable_methods(const FiniteFamily& family) {
  std::vector<Method> out;
  for (Method m : all_methods()) {
    if (m == Method::TwoPoint && family.max_index() != 1) continue;
    if (m == Method::FanoIH && family.max_index() < 2) continue;
    out.push_back(m);
  }
  return out;
}

FiniteFamily first_two(const FiniteFamily& family) {
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < 2; ++j) {
    const auto d = family.density(j);
    rows.emplace_back(d.begin(), d.end());
  }
  return FiniteFamily(family.space_ref(), std::move(rows));
}

std::size_t pow_capped(std::size_t base, unsigned n, std::size_t cap) {
  std::size_t out = 1;
  for (unsigned k = 0; k < n; ++k) {
    if (out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

// Runs every invariant on one family. `check` records one evaluation of a named invariant.
class FamilyChecker {
 public:
  using Check = std::function<void(const std::string&, bool, const std::string&)>;

  FamilyChecker(const FiniteFamily& family, std::mt19937_64& rng, const VerifyOptions& options,
                Check check)
      : f_(family), rng_(rng), opt_(options), check_(std::move(check)) {}

  void run() {
    bayes_ = exact_bayes_success(f_);
    normalization();
    divergences();
    q_independence();
    ml_optimality();
    master_inequality();
    specializations();
    two_point();
    soundness();
    tensorization();
  }

 private:
  void normalization() {
    const auto mu = f_.space().weights();
    for (std::size_t j = 0; j < f_.members(); ++j) {
      double total = 0.0;
      for (std::size_t x = 0; x < f_.atoms(); ++x) total += f_.density(j, x) * mu[x];
      check_("normalization", std::abs(total - 1.0) <= 1e-10,
             "member " + std::to_string(j) + " integrates to " + str(total));
    }
    check_("mixture_domination", dominates(uniform_mixture(f_), f_),
           "uniform mixture misses a member's support");
  }

  void divergences() {
    const FiniteDistribution mix = uniform_mixture(f_);
    for (std::size_t i = 0; i < f_.members(); ++i) {
      const FiniteDistribution pi = f_.member(i);
      for (std::size_t j = i + 1; j < f_.members(); ++j) {
        const FiniteDistribution pj = f_.member(j);
        const double a = total_variation(pi, pj).value;
        const double b = total_variation(pj, pi).value;
        const double c = total_variation_positive_part(pi, pj);
        check_("tv_symmetry", std::abs(a - b) <= 1e-12 && std::abs(a - c) <= 1e-12,
               "TV(P" + std::to_string(i) + ",P" + std::to_string(j) + ") routes disagree: " +
                   str(a) + " " + str(b) + " " + str(c));
      }
      for (double lambda : {0.5, 1.0, 2.0}) {
        const double d = power_divergence(pi, mix, lambda).value;
        check_("power_at_least_one", d >= 1.0 - 1e-12,
               "D_" + str(lambda) + "(P" + std::to_string(i) + ",mixture) = " + str(d));
      }
    }
  }

  void q_independence() {
    const double members = static_cast<double>(f_.members());
    check_("bayes_floor", members * bayes_ >= 1.0 - 1e-12, "(N+1)B = " + str(members * bayes_));

    std::vector<FiniteDistribution> refs{uniform_mixture(f_)};
    const auto w = random_simplex_point(rng_, f_.members());
    refs.push_back(mixture(f_, w));
    auto pi = random_simplex_point(rng_, f_.atoms());
    const auto mu = f_.space().weights();
    for (std::size_t x = 0; x < pi.size(); ++x) pi[x] /= mu[x];
    refs.emplace_back(f_.space_ref(), std::move(pi));
    for (std::size_t k = 0; k < refs.size(); ++k) {
      const double via = bayes_success_via_reference(f_, refs[k]);
      check_("q_independence", std::abs(via - bayes_) <= 1e-10,
             "reference #" + std::to_string(k) + " gives " + str(via) + " vs exact " + str(bayes_));
    }
  }

  void ml_optimality() {
    const double avg = average_success(f_, ml_rule(f_));
    check_("ml_optimality", std::abs(avg - bayes_) <= 1e-12,
           "ML rule average success " + str(avg) + " vs exact " + str(bayes_));
    if (pow_capped(f_.members(), static_cast<unsigned>(f_.atoms()), kRuleEnumerationCap) >
        kRuleEnumerationCap) {
      return;
    }
    DecisionRule rule{std::vector<std::size_t>(f_.atoms(), 0)};
    double best = 0.0;
    for (;;) {
      best = std::max(best, average_success(f_, rule));
      std::size_t pos = f_.atoms();
      while (pos > 0 && ++rule.assignment[pos - 1] == f_.members()) rule.assignment[--pos] = 0;
      if (pos == 0) break;
    }
    check_("ml_optimality", best <= bayes_ + 1e-12,
           "a deterministic rule reaches " + str(best) + " > " + str(bayes_));
  }

  void master_inequality() {
    std::vector<std::pair<std::string, FiniteDistribution>> refs{{"mixture", uniform_mixture(f_)}};
    for (std::size_t j = 0; j < f_.members(); ++j) {
      FiniteDistribution pj = f_.member(j);
      if (dominates(pj, f_)) refs.emplace_back("P" + std::to_string(j), std::move(pj));
    }
    const double u = static_cast<double>(f_.members()) * bayes_;
    for (const PhiFunction& phi :
         {PhiFunction::hinge(), PhiFunction::truncated_entropy(), PhiFunction::power(1.0)}) {
      for (const auto& [label, q] : refs) {
        const double lhs = phi(u);
        const double rhs = phi_moment_sum(f_, phi, q);
        check_("master_inequality", lhs <= rhs + 1e-10,
               phi.name() + " with Q=" + label + ": phi((N+1)B) = " + str(lhs) + " > S = " + str(rhs));
      }
    }
  }

  void specializations() {
    for (double lambda : {0.5, 1.0, 2.0}) {
      const double a = phi_bound(f_, PhiFunction::power(lambda), UniformMixture{}).raw_value;
      const double b = vj_bound(f_, UniformMixture{}, lambda, true).raw_value;
      check_("phi_power_equals_vj", close_rel(a, b, 1e-12),
             "lambda=" + str(lambda) + ": phi_power " + str(a) + " vs vj_improved " + str(b));
    }
    const double entropy = phi_bound(f_, PhiFunction::truncated_entropy(), UniformMixture{}).raw_value;
    const double fano = fano_new_bound(f_).raw_value;
    check_("entropy_within_fano", entropy <= fano + 1e-10,
           "phi_entropy " + str(entropy) + " > fano_new " + str(fano));
  }

  void two_point() {
    const FiniteFamily pair = first_two(f_);
    const double exact = exact_bayes_success(pair);
    const double tp = two_point_bound(pair).raw_value;
    check_("two_point_equality", std::abs(tp - exact) <= 1e-10,
           "two_point " + str(tp) + " vs exact " + str(exact) + " on the first two members");
    const double hinge = phi_bound(pair, PhiFunction::hinge(), UniformMixture{}).raw_value;
    check_("two_point_equality", close_rel(hinge, tp, 1e-12),
           "phi_hinge " + str(hinge) + " vs two_point " + str(tp));
  }

  void soundness() {
    EvaluationConfig cfg;
    cfg.methods = applicable_methods(f_);
    cfg.minimax_iters = opt_.minimax_iters;
    Comparison c;
    try {
      c = compare_all(f_, cfg);
    } catch (const TheoremViolation& e) {
      check_("bound_soundness", false, e.what());
      return;
    }
    for (auto& b : c.bounds) {
      if (b.method == "vj" || b.method == "vj_improved") {
        b.raw_value *= opt_.vj_fault_scale;
        b.value = make_bound(b.method, b.target, b.raw_value, f_.members()).value;
      }
    }
    try {
      check_soundness(c);
      check_("bound_soundness", true, "");
    } catch (const TheoremViolation& e) {
      check_("bound_soundness", false, e.what());
    }

    const auto& mm = *c.risk.minimax;
    bool ok = mm.lower <= mm.upper + 1e-12 && mm.upper <= bayes_ + 1e-9;
    std::string detail = "bracket [" + str(mm.lower) + ", " + str(mm.upper) + "] vs B " + str(bayes_);
    if (c.risk.deterministic_minimax) {
      ok = ok && *c.risk.deterministic_minimax <= mm.upper + 1e-9;
      detail += ", deterministic " + str(*c.risk.deterministic_minimax);
    }
    check_("minimax_sandwich", ok, detail);
  }

  void tensorization() {
    const FiniteDistribution q = uniform_mixture(f_);
    double previous = bayes_;
    for (unsigned n : {2u, 3u}) {
      if (pow_capped(f_.atoms(), n, kProductAtomCap) > kProductAtomCap) break;
      const FiniteFamily prod = product_extend(f_, n, kProductAtomCap);
      const FiniteDistribution qn = product_power(q, n, kProductAtomCap);
      for (std::size_t j = 0; j < f_.members(); ++j) {
        const FiniteDistribution pj = f_.member(j);
        const FiniteDistribution pn = prod.member(j);
        const double k1 = tensorize(kl(pj, q), n).value;
        const double kn = kl(pn, qn).value;
        const double d1 = tensorize(power_divergence(pj, q, 1.0), n).value;
        const double dn = power_divergence(pn, qn, 1.0).value;
        check_("tensorization", close_rel(kn, k1, 1e-10) && close_rel(dn, d1, 1e-10),
               "n=" + std::to_string(n) + " member " + std::to_string(j) + ": KL " + str(kn) +
                   " vs " + str(k1) + ", D_1 " + str(dn) + " vs " + str(d1));
      }
      const double b = exact_bayes_success(prod);
      check_("bayes_monotone_in_n", b >= previous - 1e-12,
             "B(n=" + std::to_string(n) + ") = " + str(b) + " < " + str(previous));
      previous = b;
    }
  }

  const FiniteFamily& f_;
  std::mt19937_64& rng_;
  const VerifyOptions& opt_;
  Check check_;
  double bayes_ = 0.0;
};

std::vector<FiniteFamily> families_for(const VerifyOptions& options) {
  if (options.scenario) {
    const Family family = build_family(parse_scenario(*options.scenario));
    const auto* finite = std::get_if<FiniteFamily>(&family);
    if (!finite) throw SchemaError("verify --scenario needs a finite family");
    return {*finite};
  }
  std::mt19937_64 rng(options.seed);
  RandomFamilyOptions ro;
  ro.max_members = options.max_members;
  ro.max_atoms = options.max_atoms;
  std::vector<FiniteFamily> out;
  out.reserve(options.families);
  for (std::size_t k = 0; k < options.families; ++k) {
    ro.counting_measure = (k % 2 == 0);
    out.push_back(random_family(rng, ro));
  }
  return out;
}

}  // namespace

VerifyOutcome run_verify(const VerifyOptions& options) {
  const std::vector<FiniteFamily> families = families_for(options);
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::string> order;
  std::map<std::string, InvariantTally> tallies;
  VerifyOutcome outcome;
  for (const auto& family : families) {
    std::string failure;
    FamilyChecker checker(family, rng, options,
                          [&](const std::string& name, bool ok, const std::string& detail) {
                            auto [it, inserted] = tallies.try_emplace(name, InvariantTally{name});
                            if (inserted) order.push_back(name);
                            ++it->second.checked;
                            if (ok) {
                              ++it->second.passed;
                            } else if (failure.empty()) {
                              failure = name + ": " + detail;
                            }
                          });
    checker.run();
    if (failure.empty()) continue;
    const auto size = [](const FiniteFamily& f) { return f.members() * f.atoms(); };
    if (!outcome.failing_family || size(family) < size(*outcome.failing_family)) {
      outcome.failing_family = family;
      outcome.first_failure = failure;
    }
  }
  for (const auto& name : order) outcome.tallies.push_back(tallies.at(name));
  return outcome;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  VerifyOutcome outcome;
  try {
    outcome = run_verify(options);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  }

  for (const auto& t : outcome.tallies) {
    out << t.name << ": " << t.passed << "/" << t.checked << (t.passed == t.checked ? " ok" : " FAIL")
        << '\n';
  }
  if (outcome.ok()) {
    out << "verify: all invariants hold\n";
    return kExitOk;
  }
  const FiniteFamily& f = *outcome.failing_family;
  const Scenario repro = scenario_for_family(f, applicable_methods(f));
  try {
    write_atomically(options.reproducer, scenario_to_json(repro).dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "could not write reproducer: " << e.what() << '\n';
  }
  out << "verify: FAILED (" << outcome.first_failure << ")\n";
  err << "reproducer (" << f.members() << " members, " << f.atoms() << " atoms) written to "
      << options.reproducer.string() << '\n';
  return kExitViolation;
}

}  // namespace mtb::runner
