#include "mtbounds/random_family.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtbounds/error.hpp"

namespace mtb {

std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t length) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> w(length);
  for (auto& v : w) v = draw(rng) + 1e-3;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return w;
}

FiniteFamily random_family(std::mt19937_64& rng, const RandomFamilyOptions& options) {
  std::uniform_int_distribution<std::size_t> member_count(options.min_members, options.max_members);
  std::uniform_int_distribution<std::size_t> atom_count(options.min_atoms, options.max_atoms);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> mass(1.0);

  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::size_t members = member_count(rng);
    const std::size_t atoms = atom_count(rng);

    std::vector<std::string> labels(atoms);
    std::vector<double> weights(atoms, 1.0);
    for (std::size_t x = 0; x < atoms; ++x) {
      labels[x] = std::to_string(x);
      if (!options.counting_measure) weights[x] = 0.25 + 3.75 * unit(rng);
    }

    std::vector<std::vector<double>> rows(members, std::vector<double>(atoms));
    for (auto& row : rows) {
      for (auto& v : row) v = unit(rng) < options.zero_probability ? 0.0 : mass(rng);
      if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) {
        row[std::uniform_int_distribution<std::size_t>(0, atoms - 1)(rng)] = 1.0;
      }
      double total = 0.0;
      for (std::size_t x = 0; x < atoms; ++x) total += row[x] * weights[x];
      for (auto& v : row) v /= total;
    }
    try {
      return make_finite_family(std::move(labels), std::move(weights), std::move(rows));
    } catch (const DistinctnessError&) {
      // tiny alphabets occasionally repeat a point mass; draw again
    }
  }
  throw DistinctnessError("random_family: could not draw a family of distinct members");
}

}  // namespace mtb
