#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mtbounds/error.hpp"
#include "mtbounds/lambda_search.hpp"
#include "mtbounds/random_family.hpp"
#include "oracles.hpp"

namespace mtb {
namespace {

FiniteFamily family(std::vector<std::vector<double>> rows) {
  auto space = std::make_shared<MeasureSpace>(MeasureSpace::counting(rows[0].size()));
  return FiniteFamily(std::move(space), std::move(rows));
}

TEST(LambdaGrid, EndpointsAndOne) {
  const auto g = lambda_grid(1e-3, 1e3, 61);
  EXPECT_EQ(g.size(), 61u);
  EXPECT_EQ(g.front(), 1e-3);
  EXPECT_EQ(g.back(), 1e3);
  EXPECT_EQ(g[30], 1.0);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_GT(g[k], g[k - 1]);
}

TEST(LambdaSearch, Validation) {
  EXPECT_THROW(validate(LambdaSearch{0.0, 1.0, 10, 1e-6}), ParameterError);
  EXPECT_THROW(validate(LambdaSearch{2.0, 1.0, 10, 1e-6}), ParameterError);
  EXPECT_THROW(validate(LambdaSearch{1e-3, 1e3, 1, 1e-6}), ParameterError);
  EXPECT_THROW(validate(LambdaSearch{1e-3, 1e3, 61, 0.0}), ParameterError);
  EXPECT_THROW(optimize_lambda(family({{0.6, 0.4}, {0.4, 0.6}}), UniformMixture{},
                               LambdaSearch{-1.0, 1.0, 10, 1e-6}),
               ParameterError);
}

TEST(GoldenSection, FindsParabolaMinimum) {
  const double x = golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, -2, 5, 1e-10);
  EXPECT_NEAR(x, 0.3, 1e-8);
}

TEST(OptimizeLambda, PointMassesAreVacuousEverywhere) {
  const auto r = optimize_lambda(family({{1, 0}, {0, 1}}), UniformMixture{});
  EXPECT_NEAR(r.bound.raw_value, 1.0, 1e-12);
  EXPECT_EQ(r.bound.value, 1.0);
  EXPECT_GE(r.lambda_star, 1e-3);
  EXPECT_LE(r.lambda_star, 1e3);
}

TEST(OptimizeLambda, BernoulliPairBeatsLambdaOne) {
  const auto r = optimize_lambda(family({{0.6, 0.4}, {0.4, 0.6}}), UniformMixture{});
  EXPECT_LE(r.bound.raw_value, std::sqrt(2.08) / 2.0 + 1e-12);
  EXPECT_GE(r.bound.raw_value, 0.6);
  EXPECT_EQ(r.bound.method, "vj_improved");
  EXPECT_EQ(r.bound.lambda_used, r.lambda_star);
}

TEST(OptimizeLambda, GaussianPairAnchor) {
  // Delta = 1, sigma = 1, Q = P0: log S(lambda) = log(1 + e^{lambda (1 + lambda) / 2}).
  auto log_sum = [](double l) {
    const double a = l * (1.0 + l) / 2.0;
    return a + std::log1p(std::exp(-a));
  };
  const auto opt = minimize_vj_exponent(log_sum, LambdaSearch{});
  const double bound = std::exp(opt.log_objective) / 2.0;
  const auto grid = oracle::dense_log_grid_min(
      [&](double l) { return std::exp(log_sum(l) / (1.0 + l)) / 2.0; }, 1e-3, 1e3, 10000);
  EXPECT_LE(bound, grid.value * (1.0 + 1e-12));
  EXPECT_NEAR(bound, grid.value, 1e-5 * grid.value);
  EXPECT_NEAR(opt.lambda, 0.50725, 1e-4);
  EXPECT_NEAR(bound, 0.9099068732723, 1e-10);
}

TEST(OptimizeLambda, RandomFamiliesAgainstDenseGrid) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const auto f = random_family(rng);
    const auto q = uniform_mixture(f);
    const auto r = optimize_lambda(f, UniformMixture{});
    const double at_one = vj_bound(f, UniformMixture{}, 1.0, true).raw_value;
    EXPECT_LE(r.bound.raw_value, at_one + 1e-12);
    const double members = static_cast<double>(f.members());
    const auto grid = oracle::dense_log_grid_min(
        [&](double l) { return std::exp(log_power_sum(f, q, l) / (1.0 + l)) / members; }, 1e-3,
        1e3, 10000);
    EXPECT_LE(r.bound.raw_value, grid.value * (1.0 + 1e-5));
    EXPECT_NEAR(r.bound.raw_value, grid.value, 1e-5 * grid.value);
  }
}

TEST(OptimizeLambda, InfiniteObjectiveFallsBackToOne) {
  const auto opt = minimize_vj_exponent(
      [](double) { return std::numeric_limits<double>::infinity(); }, LambdaSearch{});
  EXPECT_EQ(opt.lambda, 1.0);
  EXPECT_TRUE(std::isinf(opt.log_objective));
}

}  // namespace
}  // namespace mtb
