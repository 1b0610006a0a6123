#include "mtbounds/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mtbounds/error.hpp"

namespace mtb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPoints = 1000;
constexpr double kGridMax = 10.0;
constexpr double kInverseTolerance = 1e-12;

// Largest u in [lo, hi] with phi(u) <= budget, assuming phi(lo) <= budget < phi(hi).
double bisect(const PhiFunction& phi, double budget, double lo, double hi) {
  for (int it = 0; it < 400 && hi - lo > kInverseTolerance * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

PhiFunction::PhiFunction(Kind kind, std::string name, double lambda,
                         std::function<double(double)> custom)
    : kind_(kind), name_(std::move(name)), lambda_(lambda), custom_(std::move(custom)) {}

PhiFunction PhiFunction::hinge() {
  PhiFunction phi(Kind::Hinge, "hinge", 0.0, {});
  phi.check_grid();
  return phi;
}

PhiFunction PhiFunction::truncated_entropy() {
  PhiFunction phi(Kind::TruncatedEntropy, "truncated_entropy", 0.0, {});
  phi.check_grid();
  return phi;
}

PhiFunction PhiFunction::power(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("power phi: lambda must be positive and finite");
  }
  PhiFunction phi(Kind::Power, "power", lambda, {});
  phi.check_grid();
  return phi;
}

PhiFunction PhiFunction::custom(std::string name, std::function<double(double)> evaluate,
                                bool declared_monotone, bool declared_convex) {
  if (!evaluate) throw PhiPropertyError("custom phi '" + name + "': no evaluator");
  if (!declared_monotone || !declared_convex) {
    throw PhiPropertyError("custom phi '" + name +
                           "': must be declared non-decreasing and convex");
  }
  PhiFunction phi(Kind::Custom, std::move(name), 0.0, std::move(evaluate));
  phi.check_grid();
  return phi;
}

double PhiFunction::operator()(double u) const {
  switch (kind_) {
    case Kind::Hinge:
      return std::max(u - 1.0, 0.0);
    case Kind::TruncatedEntropy:
      if (u <= 1.0) return 0.0;
      if (std::isinf(u)) return kInf;
      // (1 + t) log(1 + t) - t with t = u - 1 keeps the quadratic behaviour near u = 1
      return std::max(0.0, u * std::log1p(u - 1.0) - (u - 1.0));
    case Kind::Power:
      return std::pow(u, 1.0 + lambda_);
    case Kind::Custom:
      return custom_(u);
  }
  return kInf;
}

void PhiFunction::check_grid() const {
  const double h = kGridMax / (kGridPoints - 1);
  std::vector<double> values(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) values[i] = (*this)(h * i);

  auto fail = [&](const std::string& what) {
    throw PhiPropertyError("phi '" + name_ + "': " + what);
  };
  for (double v : values) {
    if (std::isnan(v)) fail("evaluates to NaN on [0, 10]");
    if (v < -1e-12) fail("is negative on [0, 10]");
  }
  if ((*this)(1.0) > 1.0) fail("phi(1) exceeds 1");
  for (int i = 0; i + 1 < kGridPoints; ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(values[i]));
    if (values[i + 1] < values[i] - slack) fail("is not non-decreasing");
  }
  // Secant slopes of a convex function are non-decreasing.
  double previous = -kInf;
  for (int i = 0; i + 1 < kGridPoints; ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(values[i + 1])) break;
    const double slope = (values[i + 1] - values[i]) / h;
    if (slope < previous - 1e-9 * std::max(1.0, std::abs(previous))) fail("is not convex");
    previous = slope;
  }
}

double invert_phi(const PhiFunction& phi, double budget, std::size_t max_index) {
  if (std::isnan(budget) || budget < 0.0) throw ParameterError("invert_phi: budget must be >= 0");
  const double cap = static_cast<double>(max_index) + 1.0;
  if (std::isinf(budget)) return cap;
  switch (phi.kind()) {
    case PhiFunction::Kind::Hinge:
      return std::min(1.0 + budget, cap);
    case PhiFunction::Kind::Power:
      return std::clamp(std::pow(budget, 1.0 / (1.0 + phi.lambda())), 1.0, cap);
    case PhiFunction::Kind::TruncatedEntropy:
    case PhiFunction::Kind::Custom:
      break;
  }
  if (phi(cap) <= budget) return cap;
  if (phi(1.0) > budget) return 1.0;
  return bisect(phi, budget, 1.0, cap);
}

double invert_phi_uncapped(const PhiFunction& phi, double budget) {
  if (std::isnan(budget) || budget < 0.0) throw ParameterError("invert_phi: budget must be >= 0");
  if (std::isinf(budget)) return kInf;
  switch (phi.kind()) {
    case PhiFunction::Kind::Hinge:
      return 1.0 + budget;
    case PhiFunction::Kind::Power:
      return std::pow(budget, 1.0 / (1.0 + phi.lambda()));
    case PhiFunction::Kind::TruncatedEntropy:
    case PhiFunction::Kind::Custom:
      break;
  }
  if (phi(1.0) > budget) return 1.0;
  double hi = 2.0;
  while (phi(hi) <= budget) {
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  return bisect(phi, budget, hi / 2.0 < 1.0 ? 1.0 : hi / 2.0, hi);
}

}  // namespace mtb
