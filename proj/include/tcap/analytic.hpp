#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "tcap/fading.hpp"
#include "tcap/model.hpp"

namespace tcap {

enum class BoundKind { LowerDominant, Markov, MarkovRelaxed, ChebyshevRelaxed, Chernoff };

std::string to_string(BoundKind kind);

/// Transmission policy of every transmitter.
///
/// Threshold(t): transmit only when the own-link fade is at least t; the
/// active density is held at lambda. Fpc(gamma): transmit power
/// proportional to H^-gamma. Inversion is Fpc(1).
class Policy {
 public:
  enum class Kind { Plain, Threshold, Fpc, Inversion };

  static Policy plain() { return Policy(Kind::Plain, 0.0); }
  static Policy threshold(double t);
  static Policy fpc(double gamma);
  static Policy inversion() { return Policy(Kind::Inversion, 1.0); }
  /// "plain", "threshold:t=<t>", "fpc:gamma=<g>", "inversion".
  static Policy parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  /// Threshold t, FPC exponent gamma (1 for Inversion), 0 for Plain.
  double parameter() const noexcept { return parameter_; }
  /// Power-control exponent in effect (0 unless Fpc/Inversion).
  double power_exponent() const noexcept;
  double threshold_level() const noexcept { return kind_ == Kind::Threshold ? parameter_ : 0.0; }

  std::string describe() const;

 private:
  Policy(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  Kind kind_;
  double parameter_;
};

/// Campbell mean and variance coefficients of the far-field interference,
/// per unit intensity: E[Y^f] = mu lambda, Var(Y^f) = sigma2 lambda.
struct FarFieldMoments {
  double mu;
  double sigma2;
};

/// A bound value before and after clamping to [0, 1].
struct BoundValue {
  double value;
  double raw;
  bool clamped;
};

/// Optimizer of the Chernoff exponent sup_theta g(theta).
struct ChernoffExponent {
  double theta;
  double exponent;
};

// Pathloss-only network (no fading).

/// Dominant-interferer lower bound 1 - exp(-lambda pi r^2 beta^(2/alpha)).
double outage_lower(const NetworkParams& params);
/// TC upper bound (1 - eps) ln(1/(1 - eps)) / (pi r^2 beta^(2/alpha)).
double tc_upper(OutageConstraint eps, const NetworkParams& params);
FarFieldMoments farfield_moments(const NetworkParams& params);

/// sup over theta >= 0 of theta/beta - 2 pi lambda int_{s}^{inf} (e^{theta r^a x^-a} - 1) x dx
/// with s = beta^(1/alpha) r.
ChernoffExponent chernoff_exponent(const NetworkParams& params);
/// The objective above at a given theta.
double chernoff_objective(const NetworkParams& params, double theta);

/// Upper bound of the requested kind, clamped to [0, 1]. Throws
/// ChebyshevInvalid for ChebyshevRelaxed when mu lambda >= 1 / beta, and
/// DomainError for LowerDominant (not an upper bound).
double outage_upper(const NetworkParams& params, BoundKind kind);
BoundValue outage_upper_detail(const NetworkParams& params, BoundKind kind);

/// TC lower bound from inverting an outage upper bound. MarkovRelaxed is
/// closed-form; Markov, ChebyshevRelaxed and Chernoff are inverted by
/// bisection.
double tc_lower(OutageConstraint eps, const NetworkParams& params, BoundKind kind);

/// Exact outage at alpha = 4 without fading, 2 Phi(sqrt(pi/2) lambda pi r^2 sqrt(beta)) - 1.
double outage_exact_pl4(const NetworkParams& params);
double tc_exact_pl4(OutageConstraint eps, const NetworkParams& params);

/// Closed-form CCDF of Z_4 and its inverse; both are used as
/// z-quantile oracles at alpha = 4.
double z4_ccdf(double w);
double z4_ccdf_inverse(double eps);

/// CCDF of Z_alpha for any alpha > 2 by quadrature of its one-sided stable
/// law, and the inverse found by bisection in log w.
double z_ccdf(double alpha, double w);
double z_ccdf_inverse(double alpha, double eps);

/// CCDF of V = |X|^-alpha for X uniform on a disk of radius d:
/// (v^(1/alpha) d)^-2 on v >= d^-alpha.
double interference_ccdf_disk(double v, double d, double alpha);
/// Hazard rate d/dv (-ln CCDF) of the same law.
double interference_hazard_disk(double v, double d, double alpha);

// Fading.

/// Dominant-interferer lower bound with fading under a policy.
double outage_lower_fading(const NetworkParams& params, const FadingModel& fading,
                           const Policy& policy);
/// Jensen approximation 1 - exp(-lambda pi r^2 beta^(2/alpha) M) with the
/// policy-dependent moment product M.
double outage_approx_fading(const NetworkParams& params, const FadingModel& fading,
                            const Policy& policy);
/// The moment product M used by outage_approx_fading and tc_approx.
double fading_moment_product(double alpha, const FadingModel& fading, const Policy& policy);
double tc_approx(OutageConstraint eps, const NetworkParams& params, const FadingModel& fading,
                 const Policy& policy);

/// Approximate TC gain of threshold scheduling over plain transmission,
/// E[H^-2/alpha] / E[H^-2/alpha | H >= t].
double threshold_gain(double alpha, const FadingModel& fading, double t);
/// Approximate TC gain of Fpc(gamma) over constant power.
double fpc_gain(double alpha, const FadingModel& fading, double gamma);

double outage_exact_rayleigh(const NetworkParams& params);
double tc_exact_rayleigh(OutageConstraint eps, const NetworkParams& params);

struct NakagamiCoefficients {
  double k;
  double c;
};

/// K_{alpha,m} and C_{alpha,m} of the exact Nakagami TC; integer m >= 1.
NakagamiCoefficients nakagami_coefficients(double alpha, int m);
double tc_exact_nakagami(OutageConstraint eps, const NetworkParams& params, int m);

// Design-parameter optimization.

/// SIR threshold maximizing log(1 + beta) / beta^(2/alpha), via Lambert W0.
double optimal_beta(double alpha);

/// eps -> CCDF inverse of Z_alpha.
using ZQuantileFn = std::function<double(double)>;

/// TC from a Z_alpha quantile: (Fbar^-1(eps))^(-2/alpha) (1 - eps) / (pi r^2 beta^(2/alpha)).
double tc_implicit(OutageConstraint eps, const NetworkParams& params, const ZQuantileFn& z_quantile);

/// The eps-dependent factor of the area spectral efficiency.
double epsilon_objective(double alpha, double eps, const ZQuantileFn& z_quantile);

/// Maximizer of epsilon_objective over (0.001, 0.999): a 512-point
/// log-uniform grid scan, refined by golden-section search.
OutageConstraint optimal_epsilon(double alpha, const ZQuantileFn& z_quantile);

/// Area spectral efficiency c(eps) log2(1 + beta).
double area_spectral_efficiency(double tc, double beta);

}  // namespace tcap
