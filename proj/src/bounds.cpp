// Outage bounds and exact results for the pathloss-only network.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"
#include "tcap/numerics.hpp"

namespace tcap {

namespace {

using numerics::Tolerance;

// Root finding in lambda: intensities are small numbers, so only a
// relative criterion is meaningful.
constexpr Tolerance kIntensityTol{0.0, 1e-13, 400};
constexpr Tolerance kQuadratureTol{1e-15, 1e-12, 2000};
constexpr Tolerance kThetaTol{1e-13, 1e-11, 400};

double log_inverse_success(double eps) { return -std::log1p(-eps); }

void require_alpha4(const NetworkParams& params) {
  if (params.alpha != 4.0) {
    throw DomainError("alpha", "the closed-form pathloss result needs alpha = 4, got " +
                                   format_double(params.alpha));
  }
}

// J(kappa) = int_1^inf (e^{kappa y^-alpha} - 1) y dy, the Chernoff tail
// integral after scaling x = s y with s = beta^(1/alpha) r.
double chernoff_tail(double kappa, double alpha) {
  return numerics::integrate_tail(
      [=](double y) { return std::expm1(kappa * std::pow(y, -alpha)) * y; }, 1.0, kQuadratureTol);
}

double chernoff_tail_slope(double kappa, double alpha) {
  return numerics::integrate_tail(
      [=](double y) {
        const double ya = std::pow(y, -alpha);
        return y * ya * std::exp(kappa * ya);
      },
      1.0, kQuadratureTol);
}

// Far-field weight A = 2 pi lambda s^2 so that the objective reads
// kappa - A J(kappa) with kappa = theta / beta.
double chernoff_weight(const NetworkParams& params) { return 2.0 * dominant_disk_area(params) * params.lambda; }

BoundValue clamp_bound(double raw) {
  const double value = std::clamp(raw, 0.0, 1.0);
  return {value, raw, value != raw};
}

double chernoff_bound(const NetworkParams& params) {
  const double near = -std::expm1(-params.lambda * dominant_disk_area(params));
  const double far = std::exp(-chernoff_exponent(params).exponent);
  // 1 - (1 - far) (1 - near)
  return near + far * (1.0 - near);
}

}  // namespace

double outage_lower(const NetworkParams& params) {
  validate(params);
  return -std::expm1(-params.lambda * dominant_disk_area(params));
}

double tc_upper(OutageConstraint eps, const NetworkParams& params) {
  validate(params);
  return eps.success() * log_inverse_success(eps.value()) / dominant_disk_area(params);
}

FarFieldMoments farfield_moments(const NetworkParams& params) {
  validate(params);
  const double a = params.alpha;
  const double r2 = params.r * params.r;
  const double pi = std::numbers::pi;
  return {2.0 * pi * r2 * std::pow(params.beta, 2.0 / a - 1.0) / (a - 2.0),
          pi * r2 * std::pow(params.beta, 2.0 / a - 2.0) / (a - 1.0)};
}

double chernoff_objective(const NetworkParams& params, double theta) {
  validate(params);
  const double kappa = theta / params.beta;
  return kappa - chernoff_weight(params) * chernoff_tail(kappa, params.alpha);
}

ChernoffExponent chernoff_exponent(const NetworkParams& params) {
  validate(params);
  const double weight = chernoff_weight(params);
  const double alpha = params.alpha;
  if (weight == 0.0) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  // h'(0) = 1 - A / (alpha - 2); no interior maximum once it is <= 0.
  if (weight / (alpha - 2.0) >= 1.0) return {0.0, 0.0};

  const auto slope = [&](double kappa) { return 1.0 - weight * chernoff_tail_slope(kappa, alpha); };
  double hi = 1.0;
  for (int i = 0; i < 64 && slope(hi) >= 0.0; ++i) hi *= 2.0;
  if (slope(hi) >= 0.0) throw NonConvergence("Chernoff exponent: no negative slope found");

  const auto objective = [&](double kappa) { return kappa - weight * chernoff_tail(kappa, alpha); };
  const numerics::Maximum best = numerics::maximize_concave(objective, {0.0, hi}, kThetaTol);
  return {best.argmax * params.beta, std::max(best.value, 0.0)};
}

BoundValue outage_upper_detail(const NetworkParams& params, BoundKind kind) {
  validate(params);
  const double lambda = params.lambda;
  const double area = dominant_disk_area(params);
  const double near_field = lambda * area;
  switch (kind) {
    case BoundKind::LowerDominant:
      throw DomainError("method", "the dominant-interferer bound is a lower bound");
    case BoundKind::Markov: {
      const double beta_mean = 2.0 * area * lambda / (params.alpha - 2.0);  // beta * mu * lambda
      const double near = -std::expm1(-near_field);
      return clamp_bound(near + (1.0 - near) * beta_mean);
    }
    case BoundKind::MarkovRelaxed:
      return clamp_bound(params.alpha / (params.alpha - 2.0) * near_field);
    case BoundKind::ChebyshevRelaxed: {
      if (lambda == 0.0) return {0.0, 0.0, false};
      const FarFieldMoments m = farfield_moments(params);
      const double margin = 1.0 / params.beta - m.mu * lambda;
      if (!(margin > 0.0)) {
        throw ChebyshevInvalid("lambda", "Chebyshev bound needs mu*lambda < 1/beta (mu*lambda=" +
                                             format_double(m.mu * lambda) + ", 1/beta=" +
                                             format_double(1.0 / params.beta) + ")");
      }
      return clamp_bound(near_field + m.sigma2 * lambda / (margin * margin));
    }
    case BoundKind::Chernoff:
      if (lambda == 0.0) return {0.0, 0.0, false};
      return clamp_bound(chernoff_bound(params));
  }
  throw DomainError("method", "unknown bound kind");
}

double outage_upper(const NetworkParams& params, BoundKind kind) {
  return outage_upper_detail(params, kind).value;
}

double tc_lower(OutageConstraint eps, const NetworkParams& params, BoundKind kind) {
  validate(params);
  const double area = dominant_disk_area(params);
  const double e = eps.value();
  switch (kind) {
    case BoundKind::LowerDominant:
      throw DomainError("method", "the dominant-interferer bound yields a TC upper bound (tc_upper)");
    case BoundKind::MarkovRelaxed:
      return (params.alpha - 2.0) / params.alpha * e * eps.success() / area;
    case BoundKind::Markov:
    case BoundKind::ChebyshevRelaxed:
    case BoundKind::Chernoff:
      break;
  }

  // Every upper bound dominates the lower bound, so the lower bound's
  // inverse caps the root from above.
  double hi = log_inverse_success(e) / area;
  if (kind == BoundKind::ChebyshevRelaxed) {
    const FarFieldMoments m = farfield_moments(params);
    const double limit = 1.0 / (params.beta * m.mu);
    hi = std::min(hi, limit * (1.0 - 1e-12));
  }
  const auto gap = [&](double lambda) {
    return outage_upper_detail(params.with_lambda(lambda), kind).raw - e;
  };
  const double lambda = numerics::find_root_monotone(gap, {0.0, hi}, kIntensityTol);
  return lambda * eps.success();
}

double outage_exact_pl4(const NetworkParams& params) {
  validate(params);
  require_alpha4(params);
  // 2 Phi(x) - 1 == erf(x / sqrt 2); erf keeps full relative precision near 0
  const double x = std::sqrt(std::numbers::pi / 2.0) * params.lambda * dominant_disk_area(params);
  return std::erf(x / std::numbers::sqrt2);
}

double tc_exact_pl4(OutageConstraint eps, const NetworkParams& params) {
  validate(params);
  require_alpha4(params);
  const double z = numerics::gauss_quantile((1.0 + eps.value()) / 2.0);
  return std::sqrt(2.0 / std::numbers::pi) * eps.success() * z / dominant_disk_area(params);
}

double z4_ccdf(double w) {
  if (!(w > 0.0)) throw DomainError("w", "Z_4 CCDF needs w > 0, got " + format_double(w));
  return std::erf(std::sqrt(std::numbers::pi / (2.0 * w)) / std::numbers::sqrt2);
}

double z4_ccdf_inverse(double eps) {
  OutageConstraint checked(eps);
  const double z = numerics::gauss_quantile((1.0 + checked.value()) / 2.0);
  return std::numbers::pi / (2.0 * z * z);
}

double z_ccdf(double alpha, double w) {
  if (!(alpha > 2.0)) throw DomainError("alpha", "alpha must be > 2, got " + format_double(alpha));
  if (!(w > 0.0)) throw DomainError("w", "Z CCDF needs w > 0, got " + format_double(w));
  const double d = 2.0 / alpha;
  // Z = Gamma(1-d)^(1/d) S with E exp(-sS) = exp(-s^d); Kanter's integral for S.
  const double x = w / std::exp(numerics::log_gamma(1.0 - d) / d);
  const double log_u = -d / (1.0 - d) * std::log(x);
  const auto integrand = [&](double theta) {
    const double log_a = d / (1.0 - d) * std::log(std::sin(d * theta)) +
                         std::log(std::sin((1.0 - d) * theta)) -
                         std::log(std::sin(theta)) / (1.0 - d);
    return -std::expm1(-std::exp(log_a + log_u));
  };
  const double p = numerics::integrate(integrand, 0.0, std::numbers::pi, {1e-15, 1e-13, 400}, 8);
  return std::clamp(p / std::numbers::pi, 0.0, 1.0);
}

double z_ccdf_inverse(double alpha, double eps) {
  OutageConstraint checked(eps);
  const double target = checked.value();
  const auto gap = [&](double log_w) { return z_ccdf(alpha, std::exp(log_w)) - target; };
  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < 200 && gap(lo) <= 0.0; ++i) lo -= 4.0;
  for (int i = 0; i < 200 && gap(hi) >= 0.0; ++i) hi += 4.0;
  return std::exp(numerics::find_root_monotone(gap, {lo, hi}, {1e-14, 0.0, 400}));
}

double interference_ccdf_disk(double v, double d, double alpha) {
  if (!(d > 0.0)) throw DomainError("d", "disk radius must be > 0, got " + format_double(d));
  if (!(alpha > 0.0)) throw DomainError("alpha", "alpha must be > 0, got " + format_double(alpha));
  const double support = std::pow(d, -alpha);
  if (!(v >= support * (1.0 - 1e-15))) {
    throw DomainError("v", "v must be >= d^-alpha = " + format_double(support) + ", got " +
                               format_double(v));
  }
  const double base = std::pow(v, 1.0 / alpha) * d;
  return std::min(1.0, 1.0 / (base * base));
}

double interference_hazard_disk(double v, double d, double alpha) {
  interference_ccdf_disk(v, d, alpha);  // domain check
  return 2.0 / (alpha * v);
}

}  // namespace tcap
