#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mtbounds/bounds.hpp"
#include "mtbounds/divergence.hpp"
#include "mtbounds/error.hpp"
#include "mtbounds/random_family.hpp"
#include "mtbounds/risk.hpp"
#include "oracles.hpp"

namespace mtb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteFamily family(std::vector<std::vector<double>> rows) {
  auto space = std::make_shared<MeasureSpace>(MeasureSpace::counting(rows[0].size()));
  return FiniteFamily(std::move(space), std::move(rows));
}

FiniteFamily bernoulli_pair() { return family({{0.6, 0.4}, {0.4, 0.6}}); }
FiniteFamily point_masses() { return family({{1, 0}, {0, 1}}); }
FiniteFamily bernoulli_triple() { return family({{0.3, 0.7}, {0.5, 0.5}, {0.7, 0.3}}); }

TEST(Methods, NamesRoundTrip) {
  for (Method m : all_methods()) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("fanno").has_value());
  EXPECT_EQ(all_methods().size(), 10u);
  EXPECT_NE(method_names_joined().find("birge_massart"), std::string::npos);
}

TEST(MakeBound, ClampAndVacuous) {
  const auto low = make_bound("x", Target::BayesSuccess, 0.1, 3);
  EXPECT_DOUBLE_EQ(low.value, 1.0 / 3.0);
  EXPECT_FALSE(low.vacuous);
  const auto high = make_bound("x", Target::BayesSuccess, 1.7, 3);
  EXPECT_EQ(high.value, 1.0);
  EXPECT_TRUE(high.vacuous);
  EXPECT_TRUE(make_bound("x", Target::BayesSuccess, 1.0, 2).vacuous);
  EXPECT_TRUE(make_bound("x", Target::BayesSuccess, kInf, 2).vacuous);
}

TEST(PhiBound, PowerOneOnPairMatchesVj) {
  const auto f = bernoulli_pair();
  const auto phi = phi_bound(f, PhiFunction::power(1.0), UniformMixture{});
  EXPECT_NEAR(phi.divergence_inputs[0].second, 2.08, 1e-14);
  EXPECT_NEAR(phi.raw_value, std::sqrt(2.08) / 2.0, 1e-15);
  const auto vj = vj_bound(f, UniformMixture{}, 1.0, true);
  EXPECT_NEAR(phi.raw_value, vj.raw_value, 1e-12 * vj.raw_value);
  EXPECT_EQ(phi.method, "phi_power");
  EXPECT_EQ(phi.lambda_used, 1.0);
}

TEST(PhiBound, HingeOnPairIsTwoPoint) {
  const auto b = phi_bound(bernoulli_pair(), PhiFunction::hinge(), UniformMixture{});
  EXPECT_NEAR(b.value, 0.6, 1e-12);
  EXPECT_EQ(b.method, "phi_hinge");
  EXPECT_EQ(b.target, Target::BayesSuccess);
}

TEST(PhiBound, NonDominatingReferenceIsVacuous) {
  const auto b = phi_bound(point_masses(), PhiFunction::hinge(), Indexed{0});
  EXPECT_TRUE(std::isinf(b.divergence_inputs[0].second));
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.value, 1.0);
  EXPECT_NE(b.notes.find("P1"), std::string::npos);
}

TEST(PhiBound, EntropyName) {
  EXPECT_EQ(phi_bound(bernoulli_triple(), PhiFunction::truncated_entropy(), UniformMixture{}).method,
            "phi_entropy");
}

TEST(TwoPoint, Examples) {
  EXPECT_EQ(two_point_bound(point_masses()).value, 1.0);
  const auto f = bernoulli_pair();
  const auto b = two_point_bound(f);
  EXPECT_NEAR(b.value, 0.6, 1e-15);
  EXPECT_NEAR(b.value, exact_bayes_success(f), 1e-15);
  EXPECT_FALSE(b.vacuous);
  EXPECT_THROW(two_point_bound(bernoulli_triple()), ArityError);
  EXPECT_THROW(two_point_bound_from_tv(-0.1), ParameterError);
}

TEST(FanoIH, Examples) {
  const double k = 0.054878;
  const auto b = fano_ih_bound(k, 2);
  EXPECT_NEAR(b.raw_value, (k + std::log(2.0)) / std::log(2.0), 1e-12);
  EXPECT_NEAR(b.raw_value, 1.0792, 1e-4);
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.target, Target::MinimaxSuccess);
  EXPECT_TRUE(fano_ih_bound(kInf, 3).vacuous);
  EXPECT_THROW(fano_ih_bound(0.1, 1), ArityError);
  EXPECT_THROW(fano_ih_bound(bernoulli_pair()), ArityError);
}

TEST(FanoNew, Examples) {
  const double k = 0.054878;
  const auto b = fano_new_bound(k, 2);
  EXPECT_NEAR(b.raw_value, (k + 2.0 / 3.0) / std::log(3.0), 1e-12);
  EXPECT_NEAR(b.raw_value, 0.6568, 1e-4);
  EXPECT_GT(b.value, 7.0 / 15.0);
  EXPECT_EQ(b.divergence_inputs[1].first, "loose_variant");
  EXPECT_NEAR(b.divergence_inputs[1].second, (k + 1.0) / std::log(3.0), 1e-12);

  EXPECT_NEAR(fano_new_bound(0.0, 2).raw_value, 2.0 / (3.0 * std::log(3.0)), 1e-15);
  EXPECT_NEAR(fano_new_bound(0.0, 2).raw_value, 0.607, 1e-3);
  EXPECT_NEAR(fano_new_bound(0.1, 1).raw_value, 0.6 / std::log(2.0), 1e-15);
  EXPECT_NEAR(fano_new_bound(0.1, 1).raw_value, 0.8656, 1e-4);
  EXPECT_TRUE(fano_new_bound(kInf, 2).vacuous);
}

TEST(FanoNew, BernoulliTripleFromFamily) {
  const auto b = fano_new_bound(bernoulli_triple());
  const double k = (oracle::binary_kl(0.3, 0.5) + oracle::binary_kl(0.7, 0.5)) / 3.0;
  EXPECT_NEAR(b.raw_value, (k + 2.0 / 3.0) / std::log(3.0), 1e-12);
  EXPECT_NEAR(b.raw_value, 0.6567575535479371, 1e-12);
}

TEST(Birge, Examples) {
  const auto b = birge_bound(0.0, 2, kBirgeKappa);
  EXPECT_DOUBLE_EQ(b.value, 0.7);
  EXPECT_EQ(b.method, "birge");
  EXPECT_EQ(birge_bound(0.0, 2, kMassartKappa).method, "birge_massart");
  EXPECT_DOUBLE_EQ(birge_bound(0.0, 2, kMassartKappa).value, 0.84);
  EXPECT_THROW(birge_bound(0.0, 2, 1.0), ParameterError);

  const auto t = birge_bound(bernoulli_triple());
  const double k_bar = (oracle::binary_kl(0.5, 0.3) + oracle::binary_kl(0.7, 0.3)) / 3.0;
  EXPECT_NEAR(t.divergence_inputs[0].second, k_bar, 1e-15);
  EXPECT_NEAR(t.raw_value, std::max(0.7, 1.5 * k_bar / std::log(3.0)), 1e-15);

  const auto big = birge_bound(3.0, 2, kBirgeKappa);
  EXPECT_NEAR(big.raw_value, 1.5 * 3.0 / std::log(3.0), 1e-15);
  EXPECT_TRUE(big.vacuous);
}

TEST(Birge, UndominatedFirstMember) {
  const auto f = family({{1, 0, 0}, {0.2, 0.3, 0.5}, {0.5, 0.5, 0}});
  const auto b = birge_bound(f);
  EXPECT_TRUE(std::isinf(b.divergence_inputs[0].second));
  EXPECT_TRUE(b.vacuous);
  EXPECT_NE(b.notes.find("P1"), std::string::npos);
}

TEST(Vj, ConstantValues) {
  EXPECT_EQ(vj_constant(1.0), 2.0);
  EXPECT_NEAR(vj_constant(0.01), 1.0571177, 1e-6);
  EXPECT_NEAR(vj_constant(100.0), 1.0571177, 1e-6);
  EXPECT_THROW(vj_constant(0.0), ParameterError);
}

TEST(Vj, OriginalIsConstantTimesImproved) {
  for (double lambda : {0.1, 1.0, 10.0}) {
    const auto orig = vj_bound(2.08, lambda, 1, false);
    const auto impr = vj_bound(2.08, lambda, 1, true);
    EXPECT_NEAR(orig.raw_value / impr.raw_value, vj_constant(lambda), 1e-12 * vj_constant(lambda));
  }
  EXPECT_THROW(vj_bound(2.0, 0.0, 1, true), ParameterError);
  EXPECT_THROW(vj_bound(2.0, -1.0, 1, true), ParameterError);
}

TEST(Vj, PointMassesAreTight) {
  const auto f = point_masses();
  for (double lambda : {0.2, 1.0, 3.0}) {
    const auto b = vj_bound(f, UniformMixture{}, lambda, true);
    EXPECT_NEAR(b.raw_value, 1.0, 1e-12);
    EXPECT_NEAR(std::exp(b.divergence_inputs[0].second), 2.0 * std::pow(2.0, lambda), 1e-12);
  }
}

TEST(Vj, BernoulliPair) {
  const auto b = vj_bound(bernoulli_pair(), UniformMixture{}, 1.0, true);
  EXPECT_NEAR(b.raw_value, std::sqrt(2.08) / 2.0, 1e-15);
  EXPECT_NEAR(b.raw_value, 0.7211, 1e-4);
  EXPECT_GE(b.value, 0.6);
  EXPECT_NEAR(vj_bound(bernoulli_pair(), UniformMixture{}, 1.0, false).raw_value,
              std::sqrt(2.08), 1e-15);
}

TEST(Vj, NonDominatingIndexedReference) {
  const auto b = vj_bound(point_masses(), Indexed{0}, 1.0, true);
  EXPECT_TRUE(b.vacuous);
  EXPECT_EQ(b.value, 1.0);
  EXPECT_NE(b.notes.find("does not dominate P1"), std::string::npos);
}

TEST(Bounds, MasterInequalityAndDominanceOnRandomFamilies) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_family(rng);
    const double b = exact_bayes_success(f);
    const double u = static_cast<double>(f.members()) * b;
    for (const auto& phi : {PhiFunction::hinge(), PhiFunction::truncated_entropy(),
                            PhiFunction::power(0.5), PhiFunction::power(3.0)}) {
      const auto q = uniform_mixture(f);
      EXPECT_LE(phi(u), phi_moment_sum(f, phi, q) + 1e-10);
      EXPECT_GE(phi_bound(f, phi, UniformMixture{}).value, b - 1e-9);
    }
    EXPECT_LE(phi_bound(f, PhiFunction::truncated_entropy(), UniformMixture{}).raw_value,
              fano_new_bound(f).raw_value + 1e-10);
    for (double lambda : {0.3, 1.0, 4.0}) {
      const double a = phi_bound(f, PhiFunction::power(lambda), UniformMixture{}).raw_value;
      const double v = vj_bound(f, UniformMixture{}, lambda, true).raw_value;
      EXPECT_NEAR(a, v, 1e-12 * v);
      EXPECT_GE(v, b - 1e-12);
    }
  }
}

TEST(Bounds, TwoPointEqualityOnRandomPairs) {
  std::mt19937_64 rng(1234);
  RandomFamilyOptions opt;
  opt.max_members = 2;
  opt.max_atoms = 10;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_family(rng, opt);
    EXPECT_NEAR(two_point_bound(f).raw_value, exact_bayes_success(f), 1e-10);
    EXPECT_NEAR(phi_bound(f, PhiFunction::hinge(), UniformMixture{}).raw_value,
                two_point_bound(f).raw_value, 1e-12);
  }
}

TEST(Bounds, GaussianTensorizedVjIsNonDecreasing) {
  // Gaussian pair, delta = 1, Q = P0: S_n = 1 + e^{n lambda (1 + lambda) / 2}.
  for (double lambda : {0.5, 1.0, 2.0}) {
    double previous = 0.0;
    for (unsigned n = 1; n <= 50; ++n) {
      const double log_d = static_cast<double>(n) * lambda * (1.0 + lambda) / 2.0;
      const double log_s = log_d + std::log1p(std::exp(-log_d));
      const double v = vj_bound_from_log(log_s, lambda, 1, true).raw_value;
      EXPECT_GE(v, previous);
      previous = v;
    }
  }
}

}  // namespace
}  // namespace mtb
