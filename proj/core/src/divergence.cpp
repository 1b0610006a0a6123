#include "mtbounds/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mtbounds/error.hpp"

namespace mtb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("power divergence: lambda must be positive and finite");
  }
}

}  // namespace

bool DivergenceValue::finite() const { return std::isfinite(value); }

DivergenceValue total_variation(const FiniteDistribution& p0, const FiniteDistribution& p1) {
  require_same_space(p0, p1);
  const auto mu = p0.space().weights();
  double sum = 0.0;
  for (std::size_t x = 0; x < p0.size(); ++x) sum += std::abs(p1[x] - p0[x]) * mu[x];
  return {DivergenceKind::TotalVariation, std::min(1.0, 0.5 * sum)};
}

double total_variation_positive_part(const FiniteDistribution& p0, const FiniteDistribution& p1) {
  require_same_space(p0, p1);
  const auto mu = p0.space().weights();
  double sum = 0.0;
  for (std::size_t x = 0; x < p0.size(); ++x) sum += std::max(p1[x] - p0[x], 0.0) * mu[x];
  return std::min(1.0, sum);
}

DivergenceValue kl(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_space(p, q);
  const auto mu = p.space().weights();
  double sum = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return {DivergenceKind::KullbackLeibler, kInf};
    sum += p[x] * std::log(p[x] / q[x]) * mu[x];
  }
  return {DivergenceKind::KullbackLeibler, std::max(0.0, sum)};
}

DivergenceValue power_divergence(const FiniteDistribution& p, const FiniteDistribution& q,
                                 double lambda) {
  check_lambda(lambda);
  require_same_space(p, q);
  const auto mu = p.space().weights();
  double sum = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return {DivergenceKind::Power, kInf};
    sum += p[x] * mu[x] * std::pow(p[x] / q[x], lambda);
  }
  return {DivergenceKind::Power, std::max(1.0, sum)};
}

double log_power_divergence(const FiniteDistribution& p, const FiniteDistribution& q,
                            double lambda) {
  check_lambda(lambda);
  require_same_space(p, q);
  const auto mu = p.space().weights();
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return kInf;
    terms.push_back(std::log(p[x] * mu[x]) + lambda * std::log(p[x] / q[x]));
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return std::max(0.0, top + std::log(sum));
}

DivergenceValue tensorize(DivergenceValue value, unsigned n) {
  if (n == 0) throw ParameterError("tensorize: n must be positive");
  switch (value.kind) {
    case DivergenceKind::KullbackLeibler:
      return {value.kind, static_cast<double>(n) * value.value};
    case DivergenceKind::Power:
      return {value.kind, std::pow(value.value, static_cast<double>(n))};
    case DivergenceKind::TotalVariation:
      break;
  }
  throw KindError("tensorize: total variation does not tensorize over products");
}

double avg_kl(const FiniteFamily& family, const FiniteDistribution& q) {
  double sum = 0.0;
  for (std::size_t j = 0; j < family.members(); ++j) {
    const double k = kl(family.member(j), q).value;
    if (!std::isfinite(k)) return kInf;
    sum += k;
  }
  return sum / static_cast<double>(family.members());
}

std::vector<GaussianDivergence> gaussian_divergences(const GaussianFamily& family,
                                                     const ReferenceSpec& ref, double lambda) {
  check_lambda(lambda);
  const auto* indexed = std::get_if<Indexed>(&ref);
  if (indexed == nullptr) {
    throw UnsupportedReferenceError(
        "gaussian divergences have closed forms only for a member reference (got " +
        reference_label(ref) + ")");
  }
  if (indexed->index >= family.members()) {
    throw ParameterError("reference index " + std::to_string(indexed->index) + " out of range");
  }
  const double two_var = 2.0 * family.sigma() * family.sigma();
  std::vector<GaussianDivergence> out(family.members());
  for (std::size_t i = 0; i < family.members(); ++i) {
    const double k = family.squared_distance(i, indexed->index) / two_var;
    out[i].kl = k;
    out[i].log_power = lambda * (1.0 + lambda) * k;
    out[i].power = std::exp(out[i].log_power);
  }
  return out;
}

double gaussian_total_variation(const GaussianFamily& family, std::size_t i, std::size_t j) {
  const double dist = std::sqrt(family.squared_distance(i, j));
  return std::erf(dist / (2.0 * std::sqrt(2.0) * family.sigma()));
}

}  // namespace mtb
