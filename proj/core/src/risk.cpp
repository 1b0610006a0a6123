#include "mtbounds/risk.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "mtbounds/error.hpp"

namespace mtb {
namespace {

// z such that P(|Z| <= z) = 0.99.
constexpr double kZ99 = 2.5758293035489004;
constexpr std::size_t kMonteCarloBatch = 8192;

std::vector<double> project_to_simplex(const std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

// F(pi) = sum_x max_j pi_j p_j(x) mu(x); fills the Bayes rule and its per-member successes.
double weighted_bayes(const FiniteFamily& family, const std::vector<double>& prior,
                      std::vector<double>* member_successes) {
  const auto mu = family.space().weights();
  if (member_successes) member_successes->assign(family.members(), 0.0);
  double value = 0.0;
  for (std::size_t x = 0; x < family.atoms(); ++x) {
    std::size_t best = 0;
    double best_value = prior[0] * family.density(0, x);
    for (std::size_t j = 1; j < family.members(); ++j) {
      const double v = prior[j] * family.density(j, x);
      if (v > best_value) {
        best_value = v;
        best = j;
      }
    }
    value += best_value * mu[x];
    if (member_successes) (*member_successes)[best] += family.density(best, x) * mu[x];
  }
  return value;
}

std::vector<double> reference_mixture_weights(const GaussianFamily& family,
                                              const ReferenceSpec& ref) {
  struct Visitor {
    const GaussianFamily& family;
    std::vector<double> operator()(const UniformMixture&) const {
      return std::vector<double>(family.members(), 1.0 / static_cast<double>(family.members()));
    }
    std::vector<double> operator()(const Indexed& r) const {
      if (r.index >= family.members()) throw ParameterError("reference index out of range");
      std::vector<double> w(family.members(), 0.0);
      w[r.index] = 1.0;
      return w;
    }
    std::vector<double> operator()(const CustomWeights& r) const {
      if (r.weights.size() != family.members()) {
        throw WeightError("reference weights: expected one weight per member");
      }
      double total = 0.0;
      for (double w : r.weights) {
        if (!(w >= 0.0)) throw WeightError("reference weights must be non-negative");
        total += w;
      }
      if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw WeightError("reference weights must sum to 1");
      }
      return r.weights;
    }
    std::vector<double> operator()(const CustomDensity&) const {
      throw UnsupportedReferenceError("gaussian families cannot use a custom density reference");
    }
  };
  return std::visit(Visitor{family}, ref);
}

void fill_batch(const GaussianFamily& family, const std::vector<double>& weights,
                std::uint64_t seed, std::size_t batch, std::span<double> out) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const std::size_t m = family.members();
  const std::size_t d = family.dim();
  const double sigma = family.sigma();
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> cumulative(m);
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  std::vector<double> log_weights(m);
  for (std::size_t k = 0; k < m; ++k) {
    log_weights[k] = weights[k] > 0.0 ? std::log(weights[k]) : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> x(d);
  std::vector<double> log_density(m);

  const auto point = std::find(weights.begin(), weights.end(), 1.0);
  for (double& y : out) {
    std::size_t component = static_cast<std::size_t>(point - weights.begin());
    if (point == weights.end()) {
      const double u = uniform(rng) * cumulative.back();
      component = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      component = std::min(component, m - 1);
      while (weights[component] == 0.0 && component > 0) --component;
    }
    const auto& center = family.mean(component);
    for (std::size_t k = 0; k < d; ++k) x[k] = center[k] + sigma * normal(rng);

    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      const auto& theta = family.mean(j);
      double d2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = x[k] - theta[k];
        d2 += diff * diff;
      }
      log_density[j] = -d2 * inv_two_var;
      top = std::max(top, log_density[j]);
    }
    // log q(x) relative to the same constant, shifted by the max for stability
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (weights[k] > 0.0) acc += std::exp(log_weights[k] + log_density[k] - top);
    }
    y = 1.0 / (acc * static_cast<double>(m));
  }
}

}  // namespace

double exact_bayes_success(const FiniteFamily& family) {
  const auto mu = family.space().weights();
  double sum = 0.0;
  for (std::size_t x = 0; x < family.atoms(); ++x) {
    double best = 0.0;
    for (std::size_t j = 0; j < family.members(); ++j) best = std::max(best, family.density(j, x));
    sum += best * mu[x];
  }
  return sum / static_cast<double>(family.members());
}

double bayes_success_via_reference(const FiniteFamily& family, const FiniteDistribution& q) {
  if (auto j = first_undominated_member(family, q)) {
    throw DominationError("reference does not dominate member P" + std::to_string(*j));
  }
  const auto mu = family.space().weights();
  double sum = 0.0;
  for (std::size_t x = 0; x < family.atoms(); ++x) {
    if (q[x] == 0.0) continue;
    double best = 0.0;
    for (std::size_t j = 0; j < family.members(); ++j) {
      best = std::max(best, family.density(j, x) / q[x]);
    }
    sum += best * q[x] * mu[x];
  }
  return sum / static_cast<double>(family.members());
}

DecisionRule ml_rule(const FiniteFamily& family) {
  DecisionRule rule;
  rule.assignment.resize(family.atoms());
  for (std::size_t x = 0; x < family.atoms(); ++x) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < family.members(); ++j) {
      if (family.density(j, x) > family.density(best, x)) best = j;
    }
    rule.assignment[x] = best;
  }
  return rule;
}

std::vector<double> member_success(const FiniteFamily& family, const DecisionRule& rule) {
  if (rule.assignment.size() != family.atoms()) {
    throw DimensionError("decision rule must assign every atom");
  }
  const auto mu = family.space().weights();
  std::vector<double> success(family.members(), 0.0);
  for (std::size_t x = 0; x < family.atoms(); ++x) {
    const std::size_t j = rule.assignment[x];
    if (j >= family.members()) throw ParameterError("decision rule assigns an invalid index");
    success[j] += family.density(j, x) * mu[x];
  }
  return success;
}

double average_success(const FiniteFamily& family, const DecisionRule& rule) {
  const auto s = member_success(family, rule);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(family.members());
}

double worst_success(const FiniteFamily& family, const DecisionRule& rule) {
  const auto s = member_success(family, rule);
  return *std::min_element(s.begin(), s.end());
}

MonteCarloEstimate mc_bayes_success(const GaussianFamily& family, const ReferenceSpec& ref,
                                    std::size_t samples, std::uint64_t seed) {
  if (samples < kMinMonteCarloSamples) {
    throw ParameterError("monte carlo: at least " + std::to_string(kMinMonteCarloSamples) +
                         " samples are required");
  }
  const std::vector<double> weights = reference_mixture_weights(family, ref);
  std::vector<double> values(samples);
  const std::size_t batches = (samples + kMonteCarloBatch - 1) / kMonteCarloBatch;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), batches));

  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t b = w; b < batches; b += workers) {
        const std::size_t begin = b * kMonteCarloBatch;
        const std::size_t count = std::min(kMonteCarloBatch, samples - begin);
        fill_batch(family, weights, seed, b, std::span<double>(values).subspan(begin, count));
      }
    }));
  }
  for (auto& job : jobs) job.get();

  const double n = static_cast<double>(samples);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  const double sd = std::sqrt(m2 * n / (n - 1.0));

  MonteCarloEstimate est;
  est.estimate = mean;
  est.std_error = sd / std::sqrt(n);
  est.ci_low = mean - kZ99 * est.std_error;
  est.ci_high = mean + kZ99 * est.std_error;
  est.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  est.samples = samples;
  est.seed = seed;
  return est;
}

MinimaxBracket minimax_success_bracket(const FiniteFamily& family, std::size_t max_iters,
                                       double tol) {
  if (max_iters == 0) throw ParameterError("minimax bracket: max_iters must be positive");
  const std::size_t m = family.members();
  std::vector<double> prior(m, 1.0 / static_cast<double>(m));
  std::vector<double> averaged_prior(m, 0.0);
  std::vector<double> averaged_success(m, 0.0);
  std::vector<double> success(m);
  double step_total = 0.0;

  MinimaxBracket out;
  out.lower = 0.0;
  out.upper = std::numeric_limits<double>::infinity();

  for (std::size_t t = 1; t <= max_iters; ++t) {
    const double value = weighted_bayes(family, prior, &success);
    if (value < out.upper) {
      out.upper = value;
      out.prior = prior;
    }
    // the Bayes rule for this prior is a deterministic estimator
    out.lower = std::max(out.lower, *std::min_element(success.begin(), success.end()));

    const double step = 1.0 / std::sqrt(static_cast<double>(t));
    step_total += step;
    for (std::size_t j = 0; j < m; ++j) {
      averaged_success[j] += step * success[j];
      averaged_prior[j] += step * prior[j];
    }
    // mixing the visited Bayes rules with the step weights is a randomized estimator
    double mixed_worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      mixed_worst = std::min(mixed_worst, averaged_success[j] / step_total);
    }
    out.lower = std::max(out.lower, mixed_worst);

    std::vector<double> polyak(m);
    for (std::size_t j = 0; j < m; ++j) polyak[j] = averaged_prior[j] / step_total;
    const double polyak_value = weighted_bayes(family, polyak, nullptr);
    if (polyak_value < out.upper) {
      out.upper = polyak_value;
      out.prior = polyak;
    }

    out.iterations = t;
    if (out.upper - out.lower <= tol) break;

    std::vector<double> moved(m);
    for (std::size_t j = 0; j < m; ++j) moved[j] = prior[j] - step * success[j];
    prior = project_to_simplex(moved);
  }
  return out;
}

double enumerate_deterministic(const FiniteFamily& family, std::size_t cap) {
  const std::size_t base = family.members();
  std::size_t total = 1;
  for (std::size_t x = 0; x < family.atoms(); ++x) {
    if (total > cap / base) {
      throw SizeCapError("enumerate_deterministic: (N + 1)^atoms exceeds the cap " +
                         std::to_string(cap));
    }
    total *= base;
  }
  if (total > cap) {
    throw SizeCapError("enumerate_deterministic: (N + 1)^atoms exceeds the cap " +
                       std::to_string(cap));
  }
  DecisionRule rule;
  rule.assignment.assign(family.atoms(), 0);
  double best = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    best = std::max(best, worst_success(family, rule));
    for (std::size_t x = family.atoms(); x-- > 0;) {
      if (++rule.assignment[x] < base) break;
      rule.assignment[x] = 0;
    }
  }
  return best;
}

}  // namespace mtb
