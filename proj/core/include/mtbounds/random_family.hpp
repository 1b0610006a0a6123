#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "mtbounds/measure_family.hpp"

namespace mtb {

struct RandomFamilyOptions {
  std::size_t min_members = 2;
  std::size_t max_members = 9;  // N + 1
  std::size_t min_atoms = 2;
  std::size_t max_atoms = 20;
  double zero_probability = 0.15;  // chance that a density entry is forced to zero
  bool counting_measure = false;   // otherwise weights are drawn from [0.25, 4]
};

// Draws a valid family: normalized rows, pairwise distinct, each row with at least one
// positive entry. Used by the verification suite and the property tests.
FiniteFamily random_family(std::mt19937_64& rng, const RandomFamilyOptions& options = {});

// Random strictly positive probability vector of the given length.
std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t length);

}  // namespace mtb
