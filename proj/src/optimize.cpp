#include <cmath>
#include <vector>

#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"
#include "tcap/numerics.hpp"

namespace tcap {

namespace {

constexpr double kEpsLo = 1e-3;
constexpr double kEpsHi = 0.999;
constexpr int kEpsGrid = 512;

double checked_quantile(const ZQuantileFn& z_quantile, double eps) {
  const double w = z_quantile(eps);
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw QuantileRange("eps", "Z quantile at eps=" + format_double(eps) +
                                   " is not a positive number: " + format_double(w));
  }
  return w;
}

}  // namespace

double optimal_beta(double alpha) {
  if (!(alpha > 2.0)) throw DomainError("alpha", "alpha must be > 2, got " + format_double(alpha));
  const double half = alpha / 2.0;
  const double w = numerics::lambert_w0(-half * std::exp(-half));
  return std::expm1(half + w);
}

double tc_implicit(OutageConstraint eps, const NetworkParams& params, const ZQuantileFn& z_quantile) {
  validate(params);
  const double w = checked_quantile(z_quantile, eps.value());
  return std::pow(w, -2.0 / params.alpha) * eps.success() / dominant_disk_area(params);
}

double epsilon_objective(double alpha, double eps, const ZQuantileFn& z_quantile) {
  if (!(alpha > 2.0)) throw DomainError("alpha", "alpha must be > 2, got " + format_double(alpha));
  const OutageConstraint checked(eps);
  return std::pow(checked_quantile(z_quantile, checked.value()), -2.0 / alpha) * checked.success();
}

OutageConstraint optimal_epsilon(double alpha, const ZQuantileFn& z_quantile) {
  std::vector<double> grid(kEpsGrid);
  const double log_lo = std::log(kEpsLo);
  const double step = (std::log(kEpsHi) - log_lo) / (kEpsGrid - 1);
  for (int i = 0; i < kEpsGrid; ++i) grid[i] = std::exp(log_lo + step * i);
  grid.back() = kEpsHi;

  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < kEpsGrid; ++i) {
    const double v = epsilon_objective(alpha, grid[i], z_quantile);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const numerics::Bracket bracket{grid[best > 0 ? best - 1 : 0],
                                  grid[best + 1 < kEpsGrid ? best + 1 : best]};
  if (bracket.hi <= bracket.lo) return OutageConstraint(grid[best]);
  const auto objective = [&](double e) { return epsilon_objective(alpha, e, z_quantile); };
  const numerics::Maximum refined =
      numerics::maximize_concave(objective, bracket, {1e-12, 1e-9, 200});
  return OutageConstraint(refined.value >= best_value ? refined.argmax : grid[best]);
}

double area_spectral_efficiency(double tc, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta", "beta must be > 0, got " + format_double(beta));
  return tc * std::log2(1.0 + beta);
}

}  // namespace tcap
