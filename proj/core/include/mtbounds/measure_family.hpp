#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mtb {

inline constexpr double kNormalizationTolerance = 1e-10;
inline constexpr double kDistinctnessTolerance = 1e-12;
inline constexpr std::size_t kDefaultProductCap = 1'000'000;

// Finite set of labelled atoms with strictly positive weights mu(x).
class MeasureSpace {
 public:
  MeasureSpace(std::vector<std::string> labels, std::vector<double> weights);

  // Counting measure: every weight is 1.
  static MeasureSpace counting(std::vector<std::string> labels);
  static MeasureSpace counting(std::size_t atoms);

  std::size_t size() const { return weights_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t atom) const { return weights_[atom]; }

  bool operator==(const MeasureSpace&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
};

using SpaceRef = std::shared_ptr<const MeasureSpace>;

// A probability P = p . mu. The density is stored relative to mu, so sum_x p(x) mu(x) = 1.
class FiniteDistribution {
 public:
  FiniteDistribution(SpaceRef space, std::vector<double> density);

  const MeasureSpace& space() const { return *space_; }
  const SpaceRef& space_ref() const { return space_; }
  std::span<const double> density() const { return density_; }
  double operator[](std::size_t atom) const { return density_[atom]; }
  std::size_t size() const { return density_.size(); }

 private:
  SpaceRef space_;
  std::vector<double> density_;
};

bool same_space(const MeasureSpace& a, const MeasureSpace& b);
// Throws SpaceMismatchError unless both distributions live on the same space.
void require_same_space(const FiniteDistribution& a, const FiniteDistribution& b);

// The family {P_0, ..., P_N}, N + 1 >= 2 pairwise distinct members on one space.
class FiniteFamily {
 public:
  // Densities are row-major: one row per member, one column per atom.
  FiniteFamily(SpaceRef space, std::vector<std::vector<double>> densities);

  std::size_t members() const { return members_; }
  std::size_t max_index() const { return members_ - 1; }
  std::size_t atoms() const { return space_->size(); }
  const MeasureSpace& space() const { return *space_; }
  const SpaceRef& space_ref() const { return space_; }

  std::span<const double> density(std::size_t member) const {
    return {densities_.data() + member * atoms(), atoms()};
  }
  double density(std::size_t member, std::size_t atom) const {
    return densities_[member * atoms() + atom];
  }
  FiniteDistribution member(std::size_t j) const;

 private:
  SpaceRef space_;
  std::size_t members_ = 0;
  std::vector<double> densities_;
};

FiniteFamily make_finite_family(std::vector<std::string> atom_labels, std::vector<double> weights,
                                std::vector<std::vector<double>> density_matrix);

// ---------------------------------------------------------------------------
// Reference distributions Q.

struct UniformMixture {
  bool operator==(const UniformMixture&) const = default;
};
struct Indexed {
  std::size_t index = 0;
  bool operator==(const Indexed&) const = default;
};
struct CustomWeights {
  std::vector<double> weights;
  bool operator==(const CustomWeights&) const = default;
};
struct CustomDensity {
  std::vector<double> density;
  bool operator==(const CustomDensity&) const = default;
};

using ReferenceSpec = std::variant<UniformMixture, Indexed, CustomWeights, CustomDensity>;

// Short label used in reports: "mixture", "P3", "weights", "custom".
std::string reference_label(const ReferenceSpec& spec);

// q = sum_j w_j p_j. Throws WeightError unless w is a probability vector of length N + 1.
FiniteDistribution mixture(const FiniteFamily& family, std::span<const double> mix_weights);
FiniteDistribution uniform_mixture(const FiniteFamily& family);

// Index of the first member that puts mass where q vanishes, if any.
std::optional<std::size_t> first_undominated_member(const FiniteFamily& family,
                                                    const FiniteDistribution& q);
inline bool dominates(const FiniteDistribution& q, const FiniteFamily& family) {
  return !first_undominated_member(family, q).has_value();
}

// Resolves Q for the family. Throws DominationError if Q does not dominate every member.
FiniteDistribution resolve_reference(const FiniteFamily& family, const ReferenceSpec& spec);
// Same as resolve_reference but skips the domination check.
FiniteDistribution resolve_reference_unchecked(const FiniteFamily& family,
                                               const ReferenceSpec& spec);

// n-fold product family on the materialized product alphabet (last coordinate varies fastest).
FiniteFamily product_extend(const FiniteFamily& family, unsigned n,
                            std::size_t size_cap = kDefaultProductCap);
FiniteDistribution product_power(const FiniteDistribution& q, unsigned n,
                                 std::size_t size_cap = kDefaultProductCap);

// ---------------------------------------------------------------------------
// Isotropic Gaussian location family N(theta_j, sigma^2 I_d).

class GaussianFamily {
 public:
  GaussianFamily(std::vector<std::vector<double>> means, double sigma);

  std::size_t members() const { return means_.size(); }
  std::size_t dim() const { return dim_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& mean(std::size_t j) const { return means_[j]; }
  const std::vector<std::vector<double>>& means() const { return means_; }

  double squared_distance(std::size_t i, std::size_t j) const;

 private:
  std::vector<std::vector<double>> means_;
  double sigma_;
  std::size_t dim_;
};

GaussianFamily make_gaussian_family(std::vector<std::vector<double>> means, double sigma);

// n i.i.d. copies: the means are repeated n times, giving dimension n * d.
GaussianFamily product_extend(const GaussianFamily& family, unsigned n);

}  // namespace mtb
