#include <cmath>
#include <numbers>

#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"
#include "tcap/numerics.hpp"

namespace tcap {

namespace {

double log_inverse_success(double eps) { return -std::log1p(-eps); }

void require_alpha(double alpha) {
  if (!(alpha > 2.0)) throw DomainError("alpha", "alpha must be > 2, got " + format_double(alpha));
}

// (2 pi / alpha) csc(2 pi / alpha) = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha)
double rayleigh_factor(double alpha) {
  const double x = 2.0 * std::numbers::pi / alpha;
  return x / std::sin(x);
}

}  // namespace

double fading_moment_product(double alpha, const FadingModel& fading, const Policy& policy) {
  require_alpha(alpha);
  const double d = 2.0 / alpha;
  const double interference = fading.moment(d);
  switch (policy.kind()) {
    case Policy::Kind::Plain:
      return interference * fading.moment(-d);
    case Policy::Kind::Threshold:
      return interference * fading.truncated_moment(-d, policy.parameter());
    case Policy::Kind::Fpc:
    case Policy::Kind::Inversion: {
      const double g = policy.power_exponent();
      return interference * fading.moment(-g * d) * fading.moment(-(1.0 - g) * d);
    }
  }
  return interference * fading.moment(-d);
}

double outage_lower_fading(const NetworkParams& params, const FadingModel& fading,
                           const Policy& policy) {
  validate(params);
  const double d = 2.0 / params.alpha;
  const double load = params.lambda * dominant_disk_area(params);
  if (load == 0.0) return 0.0;

  if (policy.kind() == Policy::Kind::Inversion) {
    // the received signal is deterministic under inversion
    return -std::expm1(-load * fading_moment_product(params.alpha, fading, policy));
  }

  // E[I^(2/alpha)] for the interferer marks and the exponent on the signal
  double mark = fading.moment(d);
  double signal_power = 1.0;
  if (policy.kind() == Policy::Kind::Fpc) {
    const double g = policy.parameter();
    mark *= fading.moment(-g * d);
    signal_power = 1.0 - g;
  }
  const double coeff = load * mark;
  const auto miss = [&](double h) { return -std::expm1(-coeff * std::pow(h, -signal_power * d)); };
  if (policy.kind() == Policy::Kind::Threshold) {
    return fading.expect_given_at_least(miss, policy.parameter());
  }
  return fading.expect(miss);
}

double outage_approx_fading(const NetworkParams& params, const FadingModel& fading,
                            const Policy& policy) {
  validate(params);
  return -std::expm1(-params.lambda * dominant_disk_area(params) *
                     fading_moment_product(params.alpha, fading, policy));
}

double tc_approx(OutageConstraint eps, const NetworkParams& params, const FadingModel& fading,
                 const Policy& policy) {
  validate(params);
  return eps.success() * log_inverse_success(eps.value()) /
         (dominant_disk_area(params) * fading_moment_product(params.alpha, fading, policy));
}

double threshold_gain(double alpha, const FadingModel& fading, double t) {
  require_alpha(alpha);
  const Policy policy = Policy::threshold(t);
  const double d = 2.0 / alpha;
  return fading.moment(-d) / fading.truncated_moment(-d, policy.parameter());
}

double fpc_gain(double alpha, const FadingModel& fading, double gamma) {
  require_alpha(alpha);
  const Policy policy = Policy::fpc(gamma);
  return fading_moment_product(alpha, fading, Policy::plain()) /
         fading_moment_product(alpha, fading, policy);
}

double outage_exact_rayleigh(const NetworkParams& params) {
  validate(params);
  return -std::expm1(-params.lambda * dominant_disk_area(params) * rayleigh_factor(params.alpha));
}

double tc_exact_rayleigh(OutageConstraint eps, const NetworkParams& params) {
  validate(params);
  return eps.success() * log_inverse_success(eps.value()) /
         (dominant_disk_area(params) * rayleigh_factor(params.alpha));
}

NakagamiCoefficients nakagami_coefficients(double alpha, int m) {
  require_alpha(alpha);
  if (m < 1) throw DomainError("m", "Nakagami shape must be an integer >= 1, got " + std::to_string(m));
  const double d = 2.0 / alpha;

  // K = [1 + sum_{k=0}^{m-2} prod_{l=0}^{k} (l - d) / (k + 1)!]^-1
  double sum = 1.0;
  double term = 1.0;
  for (int k = 0; k <= m - 2; ++k) {
    term *= (k - d) / (k + 1);
    sum += term;
  }

  // C = (2 pi / alpha) sum_{k=0}^{m-1} binom(m, k) B(d + k, m - d - k)
  const double log_m_fact = numerics::log_gamma(m + 1.0);
  double c = 0.0;
  for (int k = 0; k <= m - 1; ++k) {
    const double log_binom =
        log_m_fact - numerics::log_gamma(k + 1.0) - numerics::log_gamma(m - k + 1.0);
    c += std::exp(log_binom + numerics::log_beta(d + k, m - d - k));
  }
  return {1.0 / sum, 2.0 * std::numbers::pi / alpha * c};
}

double tc_exact_nakagami(OutageConstraint eps, const NetworkParams& params, int m) {
  validate(params);
  const NakagamiCoefficients kc = nakagami_coefficients(params.alpha, m);
  return kc.k * eps.success() * log_inverse_success(eps.value()) /
         (kc.c * std::pow(params.beta, 2.0 / params.alpha) * params.r * params.r);
}

}  // namespace tcap
