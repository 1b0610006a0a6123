#include "mtbounds/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "mtbounds/divergence.hpp"
#include "mtbounds/error.hpp"

namespace mtb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSoundnessSlack = 1e-9;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

double log_sum_exp(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  if (std::isinf(top)) return top;
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - top);
  return top + std::log(sum);
}

// Divergence inputs for one family, however they are obtained.
class DivergenceSource {
 public:
  virtual ~DivergenceSource() = default;
  virtual std::size_t members() const = 0;
  // K~ against the uniform mixture, or an upper bound on it (explained in `note`).
  virtual std::optional<double> mixture_kl(std::string& note) const = 0;
  // K_bar against P_0.
  virtual double first_member_kl(std::string& note) const = 0;
  // log sum_j D_lambda(P_j, Q) for the configured reference.
  virtual std::optional<double> log_power_sum(double lambda, std::string& note) const = 0;
  // sum_j E_Q[phi(p_j / q)] for the configured reference.
  virtual std::optional<double> phi_sum(const PhiFunction& phi, std::string& note) const = 0;
  virtual std::optional<double> total_variation(std::string& note) const = 0;
};

std::string domination_note(const FiniteFamily& family, const FiniteDistribution& q,
                            const std::string& label) {
  if (auto j = first_undominated_member(family, q)) {
    return "reference " + label + " does not dominate P" + std::to_string(*j);
  }
  return {};
}

class FiniteSource final : public DivergenceSource {
 public:
  FiniteSource(const FiniteFamily& family, const ReferenceSpec& ref)
      : family_(family), q_(resolve_reference_unchecked(family, ref)), label_(reference_label(ref)) {}

  std::size_t members() const override { return family_.members(); }

  std::optional<double> mixture_kl(std::string&) const override {
    return avg_kl(family_, uniform_mixture(family_));
  }

  double first_member_kl(std::string& note) const override {
    const FiniteDistribution p0 = family_.member(0);
    if (auto j = first_undominated_member(family_, p0)) {
      note = "K(P" + std::to_string(*j) + ",P0)=inf: P0 does not dominate P" + std::to_string(*j);
      return kInf;
    }
    return avg_kl(family_, p0);
  }

  std::optional<double> log_power_sum(double lambda, std::string& note) const override {
    note = domination_note(family_, q_, label_);
    return mtb::log_power_sum(family_, q_, lambda);
  }

  std::optional<double> phi_sum(const PhiFunction& phi, std::string& note) const override {
    note = domination_note(family_, q_, label_);
    return phi_moment_sum(family_, phi, q_);
  }

  std::optional<double> total_variation(std::string&) const override {
    return mtb::total_variation(family_.member(0), family_.member(1)).value;
  }

 private:
  const FiniteFamily& family_;
  FiniteDistribution q_;
  std::string label_;
};

// n-fold product of a finite family with the product reference Q^{(x)n}.
class TensorSource final : public DivergenceSource {
 public:
  TensorSource(const FiniteFamily& base, const ReferenceSpec& ref, unsigned n,
               const FiniteFamily* product, std::optional<FiniteDistribution> product_q)
      : base_(base),
        q_(resolve_reference_unchecked(base, ref)),
        label_(reference_label(ref)),
        n_(n),
        product_(product),
        product_q_(std::move(product_q)) {}

  std::size_t members() const override { return base_.members(); }

  std::optional<double> mixture_kl(std::string& note) const override {
    if (n_ > 1) note = "K~ bounded by n*avg K(P_j,mixture) (product of mixtures)";
    return static_cast<double>(n_) * avg_kl(base_, uniform_mixture(base_));
  }

  double first_member_kl(std::string& note) const override {
    const FiniteDistribution p0 = base_.member(0);
    if (auto j = first_undominated_member(base_, p0)) {
      note = "K(P" + std::to_string(*j) + ",P0)=inf: P0 does not dominate P" + std::to_string(*j);
      return kInf;
    }
    return static_cast<double>(n_) * avg_kl(base_, p0);
  }

  std::optional<double> log_power_sum(double lambda, std::string& note) const override {
    note = domination_note(base_, q_, label_);
    std::vector<double> logs(base_.members());
    for (std::size_t j = 0; j < base_.members(); ++j) {
      const double l = log_power_divergence(base_.member(j), q_, lambda);
      logs[j] = std::isinf(l) ? kInf : static_cast<double>(n_) * l;
    }
    return log_sum_exp(logs);
  }

  std::optional<double> phi_sum(const PhiFunction& phi, std::string& note) const override {
    if (!product_) {
      note = "n/a: product alphabet exceeds the size cap";
      return std::nullopt;
    }
    note = domination_note(*product_, *product_q_, label_ + "^n");
    return phi_moment_sum(*product_, phi, *product_q_);
  }

  std::optional<double> total_variation(std::string& note) const override {
    if (!product_) {
      note = "n/a: total variation does not tensorize and the product exceeds the size cap";
      return std::nullopt;
    }
    return mtb::total_variation(product_->member(0), product_->member(1)).value;
  }

 private:
  const FiniteFamily& base_;
  FiniteDistribution q_;
  std::string label_;
  unsigned n_;
  const FiniteFamily* product_;
  std::optional<FiniteDistribution> product_q_;
};

class GaussianSource final : public DivergenceSource {
 public:
  GaussianSource(const GaussianFamily& family, const ReferenceSpec& ref)
      : family_(family), ref_(ref) {}

  std::size_t members() const override { return family_.members(); }

  std::optional<double> mixture_kl(std::string& note) const override {
    // The mixture minimizes the average KL, so any member reference gives an upper bound.
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < family_.members(); ++i) {
      const auto div = gaussian_divergences(family_, Indexed{i}, 1.0);
      double sum = 0.0;
      for (const auto& d : div) sum += d.kl;
      const double avg = sum / static_cast<double>(family_.members());
      if (avg < best) {
        best = avg;
        arg = i;
      }
    }
    note = "K~ bounded by avg K(P_j,P" + std::to_string(arg) + ")";
    return best;
  }

  double first_member_kl(std::string&) const override {
    const auto div = gaussian_divergences(family_, Indexed{0}, 1.0);
    double sum = 0.0;
    for (const auto& d : div) sum += d.kl;
    return sum / static_cast<double>(family_.members());
  }

  std::optional<double> log_power_sum(double lambda, std::string& note) const override {
    if (!std::holds_alternative<Indexed>(ref_)) {
      note = "n/a: no closed form for a " + reference_label(ref_) +
             " reference; use an indexed reference";
      return std::nullopt;
    }
    const auto div = gaussian_divergences(family_, ref_, lambda);
    std::vector<double> logs;
    logs.reserve(div.size());
    for (const auto& d : div) logs.push_back(d.log_power);
    return log_sum_exp(logs);
  }

  std::optional<double> phi_sum(const PhiFunction&, std::string& note) const override {
    note = "n/a: no closed form for this phi on a gaussian family";
    return std::nullopt;
  }

  std::optional<double> total_variation(std::string&) const override {
    return gaussian_total_variation(family_, 0, 1);
  }

 private:
  const GaussianFamily& family_;
  ReferenceSpec ref_;
};

void append_note(BoundResult& r, const std::string& note) {
  if (note.empty()) return;
  if (!r.notes.empty()) r.notes += ";";
  r.notes += note;
}

std::vector<BoundResult> evaluate_bounds(const DivergenceSource& src, const EvaluationConfig& cfg) {
  const std::size_t members = src.members();
  const std::size_t max_index = members - 1;

  double lambda = 1.0;
  std::string lambda_note;
  if (const auto* fixed = std::get_if<FixedLambda>(&cfg.lambda)) {
    lambda = fixed->lambda;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  } else {
    const auto& search = std::get<OptimizeLambda>(cfg.lambda).search;
    validate(search);
    std::string note;
    if (src.log_power_sum(1.0, note)) {
      const auto opt = minimize_vj_exponent(
          [&](double l) {
            std::string ignored;
            return *src.log_power_sum(l, ignored);
          },
          search);
      lambda = opt.lambda;
      lambda_note = "lambda optimized";
    }
  }

  std::set<Method> seen;
  std::vector<BoundResult> rows;
  for (Method method : cfg.methods) {
    if (!seen.insert(method).second) continue;
    const std::string name(method_name(method));
    std::string note;
    BoundResult row;
    switch (method) {
      case Method::TwoPoint: {
        if (members != 2) {
          throw ArityError("two_point requires N = 1, family has N = " + std::to_string(max_index));
        }
        if (auto tv = src.total_variation(note)) {
          row = two_point_bound_from_tv(std::min(1.0, *tv));
        } else {
          row = unavailable_bound(name, Target::BayesSuccess, note);
          note.clear();
        }
        break;
      }
      case Method::FanoIH:
      case Method::FanoNew: {
        if (method == Method::FanoIH && max_index <= 1) {
          throw ArityError("fano_ih requires N >= 2, family has N = " + std::to_string(max_index));
        }
        const auto k = src.mixture_kl(note);
        row = method == Method::FanoIH ? fano_ih_bound(*k, max_index) : fano_new_bound(*k, max_index);
        break;
      }
      case Method::Birge:
      case Method::BirgeMassart: {
        const double k = src.first_member_kl(note);
        row = birge_bound(k, max_index, method == Method::Birge ? kBirgeKappa : kMassartKappa);
        break;
      }
      case Method::VJ:
      case Method::VJImproved: {
        if (auto log_sum = src.log_power_sum(lambda, note)) {
          row = vj_bound_from_log(*log_sum, lambda, max_index, method == Method::VJImproved);
          row.reference_used = cfg.reference;
          append_note(row, lambda_note);
        } else {
          row = unavailable_bound(name, Target::BayesSuccess, note);
          note.clear();
        }
        break;
      }
      case Method::PhiPower: {
        if (auto log_sum = src.log_power_sum(lambda, note)) {
          const double raw = std::exp(*log_sum / (1.0 + lambda)) / static_cast<double>(members);
          row = make_bound(name, Target::BayesSuccess, raw, members);
          row.lambda_used = lambda;
          row.reference_used = cfg.reference;
          row.divergence_inputs.emplace_back("log_phi_sum", *log_sum);
          append_note(row, lambda_note);
        } else {
          row = unavailable_bound(name, Target::BayesSuccess, note);
          note.clear();
        }
        break;
      }
      case Method::PhiHinge:
      case Method::PhiEntropy: {
        const PhiFunction phi =
            method == Method::PhiHinge ? PhiFunction::hinge() : PhiFunction::truncated_entropy();
        if (auto sum = src.phi_sum(phi, note)) {
          row = make_bound(name, Target::BayesSuccess,
                           invert_phi_uncapped(phi, *sum) / static_cast<double>(members), members);
          row.reference_used = cfg.reference;
          row.divergence_inputs.emplace_back("phi_sum", *sum);
        } else {
          row = unavailable_bound(name, Target::BayesSuccess, note);
          note.clear();
        }
        break;
      }
    }
    append_note(row, note);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const BoundResult& a, const BoundResult& b) { return a.method < b.method; });
  return rows;
}

void add_monte_carlo_warning(Comparison& out) {
  const auto* mc = std::get_if<MonteCarloEstimate>(&out.risk.bayes_method);
  if (mc && mc->kurtosis > kHeavyTailKurtosis) {
    out.warnings.push_back("monte carlo integrand is heavy-tailed (kurtosis " + fmt(mc->kurtosis) +
                           "); the confidence interval may be unreliable");
  }
}

}  // namespace

Comparison compare_all(const FiniteFamily& family, const EvaluationConfig& config) {
  Comparison out;
  FiniteSource source(family, config.reference);
  out.bounds = evaluate_bounds(source, config);
  out.risk.bayes_success = exact_bayes_success(family);
  out.risk.bayes_method = ExactSum{};
  if (config.minimax) {
    out.risk.minimax = minimax_success_bracket(family, config.minimax_iters, config.minimax_tol);
    try {
      out.risk.deterministic_minimax = enumerate_deterministic(family, config.enum_cap);
    } catch (const SizeCapError&) {
      // enumeration is an optional cross-check
    }
  }
  check_soundness(out);
  return out;
}

Comparison compare_all(const GaussianFamily& family, const EvaluationConfig& config) {
  Comparison out;
  GaussianSource source(family, config.reference);
  out.bounds = evaluate_bounds(source, config);
  const MonteCarloEstimate mc =
      mc_bayes_success(family, config.reference, config.mc_samples, config.mc_seed);
  out.risk.bayes_success = mc.estimate;
  out.risk.bayes_method = mc;
  add_monte_carlo_warning(out);
  check_soundness(out);
  return out;
}

Comparison compare_product(const FiniteFamily& family, const EvaluationConfig& config, unsigned n,
                           std::size_t product_cap) {
  if (n == 0) throw ParameterError("product size n must be positive");
  std::optional<FiniteFamily> product;
  std::optional<FiniteDistribution> product_q;
  try {
    product = product_extend(family, n, product_cap);
    product_q = product_power(resolve_reference_unchecked(family, config.reference), n,
                              product_cap);
  } catch (const SizeCapError&) {
    product.reset();
    product_q.reset();
  }

  Comparison out;
  TensorSource source(family, config.reference, n, product ? &*product : nullptr, product_q);
  out.bounds = evaluate_bounds(source, config);
  if (product) {
    out.risk.bayes_success = exact_bayes_success(*product);
    out.risk.bayes_method = ExactSum{};
  } else {
    out.bayes_available = false;
    out.risk.bayes_success = std::numeric_limits<double>::quiet_NaN();
  }
  check_soundness(out);
  return out;
}

Comparison compare_product(const GaussianFamily& family, const EvaluationConfig& config,
                           unsigned n) {
  return compare_all(product_extend(family, n), config);
}

void check_soundness(const Comparison& c) {
  double bayes_floor = -kInf;
  if (c.bayes_available) {
    if (const auto* mc = std::get_if<MonteCarloEstimate>(&c.risk.bayes_method)) {
      // a doubled 99% interval: a sound bound falls below this with negligible probability
      bayes_floor = mc->ci_low - (mc->ci_high - mc->ci_low) - kSoundnessSlack;
    } else {
      bayes_floor = c.risk.bayes_success - kSoundnessSlack;
    }
  }
  double minimax_floor = -kInf;
  if (c.risk.minimax) minimax_floor = c.risk.minimax->lower - kSoundnessSlack;
  if (c.risk.deterministic_minimax) {
    minimax_floor = std::max(minimax_floor, *c.risk.deterministic_minimax - kSoundnessSlack);
  }

  for (const auto& b : c.bounds) {
    if (!b.available) continue;
    const double floor = b.target == Target::BayesSuccess ? bayes_floor : minimax_floor;
    if (b.value < floor) {
      throw TheoremViolation("bound " + b.method + " = " + fmt(b.value) + " falls below its " +
                             std::string(target_name(b.target)) + " floor " +
                             fmt(floor + kSoundnessSlack));
    }
  }
  if (c.risk.minimax && c.bayes_available &&
      std::holds_alternative<ExactSum>(c.risk.bayes_method) &&
      c.risk.minimax->upper > c.risk.bayes_success + kSoundnessSlack) {
    throw TheoremViolation("minimax bracket upper " + fmt(c.risk.minimax->upper) +
                           " exceeds the Bayes success " + fmt(c.risk.bayes_success));
  }
}

}  // namespace mtb
