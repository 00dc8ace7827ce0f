#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tcap/analytic.hpp"
#include "tcap/fading.hpp"
#include "tcap/model.hpp"
#include "tcap/numerics.hpp"
#include "tcap/rng.hpp"

namespace tcap {

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  /// Far-field truncation budget, see choose_window.
  double window_delta = 1e-3;
  double ci_level = 0.95;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 0;
};

/// Throws DomainError naming the first invalid field.
void validate(const SimConfig& sim);

/// Monte-Carlo probability with a Wilson score interval.
struct Estimate {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
};

Estimate wilson_estimate(std::uint64_t events, std::uint64_t trials, double ci_level,
                         std::uint64_t seed);

struct Point {
  double x;
  double y;
};

/// Homogeneous PPP restricted to a disk centred at the origin.
std::vector<Point> sample_ppp_disk(double intensity, double radius, CounterRng& rng);

/// Simulation window radius
/// R_w = max(2 beta^(1/alpha) r, (2 pi lambda beta r^alpha / ((alpha - 2) delta))^(1/(alpha - 2))).
/// Beyond R_w the mean interference, scaled by beta and normalized by the
/// unit-fade signal power, is at most delta.
double choose_window(const NetworkParams& params, double delta);

/// Outage of the reference link, SIR < beta, over sim.trials independent
/// network realizations. Trial i draws from stream i of the generator.
/// Interferers beyond the window contribute their Campbell mean; that term
/// is dropped when the mark mean diverges (channel inversion under Rayleigh).
Estimate simulate_outage(const NetworkParams& params, const FadingModel& fading,
                         const Policy& policy, const SimConfig& sim);

/// Pathloss-only outage together with the near-field statistics.
struct OutageBreakdown {
  Estimate outage;
  /// At least one interferer within beta^(1/alpha) r.
  Estimate dominant;
  /// Outage trials in which the strongest interferer alone exceeds the
  /// tolerable interference.
  std::uint64_t single_dominated = 0;

  double single_dominated_fraction() const {
    return outage.events == 0 ? 0.0 : static_cast<double>(single_dominated) / outage.events;
  }
};

OutageBreakdown simulate_outage_breakdown(const NetworkParams& params, const SimConfig& sim);

/// One draw of Z_alpha = sum_i T_i^(-alpha/2) over a unit-rate 1-D PPP,
/// truncated after n_terms points with the mean of the remainder added.
double sample_z_alpha(double alpha, int n_terms, CounterRng& rng);

/// Sorted sample of Z_alpha with order-statistic quantiles.
class ZQuantileTable {
 public:
  ZQuantileTable(double alpha, std::vector<double> samples);

  double alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::vector<double>& samples() const noexcept { return samples_; }

  /// Empirical P(Z > w).
  double ccdf(double w) const;
  /// w with P(Z > w) = eps, linear interpolation between order statistics.
  /// Throws QuantileRange for eps outside [1/n, 1 - 1/n].
  double ccdf_inverse(double eps) const;
  double operator()(double eps) const { return ccdf_inverse(eps); }

 private:
  double alpha_;
  std::vector<double> samples_;
};

ZQuantileTable z_quantile_table(double alpha, std::uint64_t n_samples, std::uint64_t seed,
                                int n_terms = 128, unsigned threads = 0);

/// TC from any outage map: solves q(lambda) = eps by bisection on
/// [0, lambda_hint], doubling the upper end until q reaches eps, then
/// multiplies by 1 - eps. Throws NoStraddle if eps is never reached.
double tc_numeric(const std::function<double(double)>& outage_fn, OutageConstraint eps,
                  double lambda_hint, numerics::Tolerance tol = {0.0, 1e-12, 400});

}  // namespace tcap
