#include "mtbounds/measure_family.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "mtbounds/error.hpp"

namespace mtb {
namespace {

double weighted_mass(std::span<const double> density, std::span<const double> weights) {
  double mass = 0.0;
  for (std::size_t x = 0; x < density.size(); ++x) mass += density[x] * weights[x];
  return mass;
}

void check_density(std::span<const double> density, const MeasureSpace& space,
                   const std::string& what) {
  if (density.size() != space.size()) {
    std::ostringstream msg;
    msg << what << ": expected " << space.size() << " density values, got " << density.size();
    throw DimensionError(msg.str());
  }
  for (double v : density) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw NormalizationError(what + ": density values must be finite and non-negative");
    }
  }
  const double mass = weighted_mass(density, space.weights());
  if (std::abs(mass - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg.precision(15);
    msg << what << ": total mass " << mass << " deviates from 1";
    throw NormalizationError(msg.str());
  }
}

std::size_t checked_power(std::size_t base, unsigned n, std::size_t cap) {
  std::size_t size = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (base != 0 && size > cap / base) {
      std::ostringstream msg;
      msg << "product alphabet " << base << "^" << n << " exceeds the size cap " << cap;
      throw SizeCapError(msg.str());
    }
    size *= base;
  }
  if (size > cap) {
    std::ostringstream msg;
    msg << "product alphabet " << base << "^" << n << " exceeds the size cap " << cap;
    throw SizeCapError(msg.str());
  }
  return size;
}

// Odometer over the product alphabet, last coordinate fastest.
template <typename Visit>
void for_each_tuple(std::size_t base, unsigned n, Visit&& visit) {
  std::vector<std::size_t> digits(n, 0);
  while (true) {
    visit(digits);
    int pos = static_cast<int>(n) - 1;
    while (pos >= 0 && ++digits[pos] == base) {
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

SpaceRef product_space(const MeasureSpace& space, unsigned n, std::size_t size) {
  if (n == 1) return std::make_shared<const MeasureSpace>(space);
  std::vector<std::string> labels;
  std::vector<double> weights;
  labels.reserve(size);
  weights.reserve(size);
  for_each_tuple(space.size(), n, [&](const std::vector<std::size_t>& digits) {
    std::string label = "(";
    double w = 1.0;
    for (unsigned i = 0; i < n; ++i) {
      if (i) label += ',';
      label += space.labels()[digits[i]];
      w *= space.weight(digits[i]);
    }
    label += ')';
    labels.push_back(std::move(label));
    weights.push_back(w);
  });
  return std::make_shared<const MeasureSpace>(std::move(labels), std::move(weights));
}

std::vector<double> product_density(std::span<const double> density, unsigned n, std::size_t size) {
  std::vector<double> out;
  out.reserve(size);
  for_each_tuple(density.size(), n, [&](const std::vector<std::size_t>& digits) {
    double v = 1.0;
    for (std::size_t d : digits) v *= density[d];
    out.push_back(v);
  });
  return out;
}

}  // namespace

MeasureSpace::MeasureSpace(std::vector<std::string> labels, std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (labels_.size() != weights_.size()) {
    throw DimensionError("measure space: label count and weight count differ");
  }
  if (labels_.empty()) throw DimensionError("measure space: at least one atom is required");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw WeightError("measure space: every atom weight must be finite and strictly positive");
    }
  }
  std::unordered_set<std::string> seen;
  seen.reserve(labels_.size());
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw DimensionError("measure space: duplicate atom label '" + label + "'");
    }
  }
}

MeasureSpace MeasureSpace::counting(std::vector<std::string> labels) {
  std::vector<double> weights(labels.size(), 1.0);
  return MeasureSpace(std::move(labels), std::move(weights));
}

MeasureSpace MeasureSpace::counting(std::size_t atoms) {
  std::vector<std::string> labels(atoms);
  for (std::size_t x = 0; x < atoms; ++x) labels[x] = std::to_string(x);
  return counting(std::move(labels));
}

FiniteDistribution::FiniteDistribution(SpaceRef space, std::vector<double> density)
    : space_(std::move(space)), density_(std::move(density)) {
  check_density(density_, *space_, "distribution");
}

bool same_space(const MeasureSpace& a, const MeasureSpace& b) { return &a == &b || a == b; }

void require_same_space(const FiniteDistribution& a, const FiniteDistribution& b) {
  if (!same_space(a.space(), b.space())) {
    throw SpaceMismatchError("distributions are defined on different measure spaces");
  }
}

FiniteFamily::FiniteFamily(SpaceRef space, std::vector<std::vector<double>> densities)
    : space_(std::move(space)), members_(densities.size()) {
  if (members_ < 2) throw DimensionError("family: at least two members (N + 1 >= 2) are required");
  const std::size_t k = space_->size();
  densities_.reserve(members_ * k);
  for (std::size_t j = 0; j < members_; ++j) {
    if (densities[j].size() != k) {
      std::ostringstream msg;
      msg << "family: row " << j << " has " << densities[j].size() << " entries, expected " << k;
      throw DimensionError(msg.str());
    }
  }
  for (std::size_t j = 0; j < members_; ++j) {
    check_density(densities[j], *space_, "family member " + std::to_string(j));
    densities_.insert(densities_.end(), densities[j].begin(), densities[j].end());
  }
  for (std::size_t i = 0; i < members_; ++i) {
    for (std::size_t j = i + 1; j < members_; ++j) {
      const auto a = density(i);
      const auto b = density(j);
      bool differ = false;
      for (std::size_t x = 0; x < k && !differ; ++x) {
        differ = std::abs(a[x] - b[x]) > kDistinctnessTolerance;
      }
      if (!differ) {
        std::ostringstream msg;
        msg << "family: members " << i << " and " << j << " coincide";
        throw DistinctnessError(msg.str());
      }
    }
  }
}

FiniteDistribution FiniteFamily::member(std::size_t j) const {
  const auto row = density(j);
  return FiniteDistribution(space_, std::vector<double>(row.begin(), row.end()));
}

FiniteFamily make_finite_family(std::vector<std::string> atom_labels, std::vector<double> weights,
                                std::vector<std::vector<double>> density_matrix) {
  auto space = std::make_shared<const MeasureSpace>(std::move(atom_labels), std::move(weights));
  return FiniteFamily(std::move(space), std::move(density_matrix));
}

std::string reference_label(const ReferenceSpec& spec) {
  struct Visitor {
    std::string operator()(const UniformMixture&) const { return "mixture"; }
    std::string operator()(const Indexed& r) const { return "P" + std::to_string(r.index); }
    std::string operator()(const CustomWeights&) const { return "weights"; }
    std::string operator()(const CustomDensity&) const { return "custom"; }
  };
  return std::visit(Visitor{}, spec);
}

FiniteDistribution mixture(const FiniteFamily& family, std::span<const double> mix_weights) {
  if (mix_weights.size() != family.members()) {
    throw WeightError("mixture: expected " + std::to_string(family.members()) + " weights");
  }
  double total = 0.0;
  for (double w : mix_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw WeightError("mixture: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw WeightError("mixture: weights must sum to 1");
  }
  std::vector<double> q(family.atoms(), 0.0);
  for (std::size_t j = 0; j < family.members(); ++j) {
    if (mix_weights[j] == 0.0) continue;
    const auto p = family.density(j);
    for (std::size_t x = 0; x < q.size(); ++x) q[x] += mix_weights[j] * p[x];
  }
  return FiniteDistribution(family.space_ref(), std::move(q));
}

FiniteDistribution uniform_mixture(const FiniteFamily& family) {
  const std::vector<double> w(family.members(), 1.0 / static_cast<double>(family.members()));
  return mixture(family, w);
}

std::optional<std::size_t> first_undominated_member(const FiniteFamily& family,
                                                    const FiniteDistribution& q) {
  if (!same_space(family.space(), q.space())) {
    throw SpaceMismatchError("reference and family are defined on different measure spaces");
  }
  for (std::size_t j = 0; j < family.members(); ++j) {
    const auto p = family.density(j);
    for (std::size_t x = 0; x < p.size(); ++x) {
      if (q[x] == 0.0 && p[x] > 0.0) return j;
    }
  }
  return std::nullopt;
}

FiniteDistribution resolve_reference_unchecked(const FiniteFamily& family,
                                               const ReferenceSpec& spec) {
  struct Visitor {
    const FiniteFamily& family;
    FiniteDistribution operator()(const UniformMixture&) const { return uniform_mixture(family); }
    FiniteDistribution operator()(const Indexed& r) const {
      if (r.index >= family.members()) {
        throw ParameterError("reference index " + std::to_string(r.index) + " out of range [0, " +
                             std::to_string(family.max_index()) + "]");
      }
      return family.member(r.index);
    }
    FiniteDistribution operator()(const CustomWeights& r) const {
      return mixture(family, r.weights);
    }
    FiniteDistribution operator()(const CustomDensity& r) const {
      return FiniteDistribution(family.space_ref(), r.density);
    }
  };
  return std::visit(Visitor{family}, spec);
}

FiniteDistribution resolve_reference(const FiniteFamily& family, const ReferenceSpec& spec) {
  FiniteDistribution q = resolve_reference_unchecked(family, spec);
  if (auto j = first_undominated_member(family, q)) {
    throw DominationError("reference " + reference_label(spec) + " does not dominate member P" +
                          std::to_string(*j));
  }
  return q;
}

FiniteFamily product_extend(const FiniteFamily& family, unsigned n, std::size_t size_cap) {
  if (n == 0) throw ParameterError("product_extend: n must be positive");
  const std::size_t size = checked_power(family.atoms(), n, size_cap);
  auto space = product_space(family.space(), n, size);
  std::vector<std::vector<double>> rows;
  rows.reserve(family.members());
  for (std::size_t j = 0; j < family.members(); ++j) {
    rows.push_back(product_density(family.density(j), n, size));
  }
  return FiniteFamily(std::move(space), std::move(rows));
}

FiniteDistribution product_power(const FiniteDistribution& q, unsigned n, std::size_t size_cap) {
  if (n == 0) throw ParameterError("product_power: n must be positive");
  const std::size_t size = checked_power(q.size(), n, size_cap);
  return FiniteDistribution(product_space(q.space(), n, size), product_density(q.density(), n, size));
}

GaussianFamily::GaussianFamily(std::vector<std::vector<double>> means, double sigma)
    : means_(std::move(means)), sigma_(sigma), dim_(0) {
  if (means_.size() < 2) throw DimensionError("gaussian family: at least two means are required");
  dim_ = means_.front().size();
  if (dim_ == 0) throw DimensionError("gaussian family: means must have positive dimension");
  for (const auto& m : means_) {
    if (m.size() != dim_) throw DimensionError("gaussian family: means have different dimensions");
    for (double v : m) {
      if (!std::isfinite(v)) throw ParameterError("gaussian family: means must be finite");
    }
  }
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
    throw ParameterError("gaussian family: sigma must be positive");
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    for (std::size_t j = i + 1; j < means_.size(); ++j) {
      if (std::sqrt(squared_distance(i, j)) <= kDistinctnessTolerance) {
        throw DistinctnessError("gaussian family: means " + std::to_string(i) + " and " +
                                std::to_string(j) + " coincide");
      }
    }
  }
}

double GaussianFamily::squared_distance(std::size_t i, std::size_t j) const {
  double d2 = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = means_[i][k] - means_[j][k];
    d2 += d * d;
  }
  return d2;
}

GaussianFamily make_gaussian_family(std::vector<std::vector<double>> means, double sigma) {
  return GaussianFamily(std::move(means), sigma);
}

GaussianFamily product_extend(const GaussianFamily& family, unsigned n) {
  if (n == 0) throw ParameterError("product_extend: n must be positive");
  std::vector<std::vector<double>> means;
  means.reserve(family.members());
  for (const auto& m : family.means()) {
    std::vector<double> rep;
    rep.reserve(m.size() * n);
    for (unsigned i = 0; i < n; ++i) rep.insert(rep.end(), m.begin(), m.end());
    means.push_back(std::move(rep));
  }
  return GaussianFamily(std::move(means), family.sigma());
}

}  // namespace mtb
