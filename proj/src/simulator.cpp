#include "tcap/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "parallel.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"

namespace tcap {

namespace {

constexpr double kPi = std::numbers::pi;

// Interferers are generated in order of distance: pi lambda |X_i|^2 is the
// i-th arrival T_i of a unit-rate 1-D Poisson process, so
// |X_i|^-alpha = (pi lambda / T_i)^(alpha/2). The window becomes T <= t_max.
struct Field {
  double half_alpha;
  double scale;  // (pi lambda)^(alpha/2)
  double t_max;

  Field(const NetworkParams& params, double radius)
      : half_alpha(params.alpha / 2.0),
        scale(std::pow(kPi * params.lambda, params.alpha / 2.0)),
        t_max(params.lambda * kPi * radius * radius) {}

  double pathloss(double t) const {
    return half_alpha == 2.0 ? scale / (t * t) : scale * std::pow(t, -half_alpha);
  }

  // Mean interference from unit marks beyond the window.
  double tail_mean() const {
    return scale * std::pow(t_max, 1.0 - half_alpha) / (half_alpha - 1.0);
  }
};

// Mean interference mark E[P_i H_i0] under the policy; 0 when it diverges.
double mark_mean(const FadingModel& fading, const Policy& policy) {
  try {
    double mean = fading.moment(1.0);
    const double g = policy.power_exponent();
    if (g > 0.0) mean *= fading.moment(-g);
    return std::isfinite(mean) && mean > 0.0 ? mean : 0.0;
  } catch (const DivergentMoment&) {
    return 0.0;
  }
}

}  // namespace

void validate(const SimConfig& sim) {
  if (sim.trials < 1) throw DomainError("trials", "trials must be >= 1");
  if (!(sim.window_delta > 0.0 && sim.window_delta <= 0.1)) {
    throw DomainError("window-delta", "window delta must lie in (0, 0.1], got " +
                                          format_double(sim.window_delta));
  }
  if (!(sim.ci_level > 0.0 && sim.ci_level < 1.0)) {
    throw DomainError("ci-level", "confidence level must lie in (0, 1), got " +
                                      format_double(sim.ci_level));
  }
}

Estimate wilson_estimate(std::uint64_t events, std::uint64_t trials, double ci_level,
                         std::uint64_t seed) {
  if (trials == 0) throw DomainError("trials", "trials must be >= 1");
  if (events > trials) throw DomainError("events", "more events than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(events) / n;
  const double z = numerics::gauss_quantile(0.5 + ci_level / 2.0);
  const double z2n = z * z / n;
  const double centre = (p + z2n / 2.0) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n));
  Estimate e;
  e.p_hat = p;
  e.ci_lo = std::clamp(centre - half, 0.0, p);
  e.ci_hi = std::clamp(centre + half, p, 1.0);
  e.trials = trials;
  e.events = events;
  e.seed = seed;
  return e;
}

std::vector<Point> sample_ppp_disk(double intensity, double radius, CounterRng& rng) {
  if (!(intensity >= 0.0)) throw DomainError("intensity", "intensity must be >= 0");
  if (!(radius > 0.0)) throw DomainError("radius", "radius must be > 0");
  std::vector<Point> points;
  const double mean = intensity * kPi * radius * radius;
  if (mean == 0.0) return points;
  const auto count = std::poisson_distribution<std::uint64_t>(mean)(rng);
  points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double d = radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * kPi * rng.uniform();
    points.push_back({d * std::cos(phi), d * std::sin(phi)});
  }
  return points;
}

double choose_window(const NetworkParams& params, double delta) {
  validate(params);
  if (!(delta > 0.0)) throw DomainError("window-delta", "window delta must be > 0");
  const double a = params.alpha;
  const double floor = 2.0 * std::pow(params.beta, 1.0 / a) * params.r;
  const double campbell = 2.0 * kPi * params.lambda * params.beta * std::pow(params.r, a) /
                          ((a - 2.0) * delta);
  return std::max(floor, std::pow(campbell, 1.0 / (a - 2.0)));
}

Estimate simulate_outage(const NetworkParams& params, const FadingModel& fading,
                         const Policy& policy, const SimConfig& sim) {
  validate(params);
  validate(sim);
  if (params.lambda == 0.0) return wilson_estimate(0, sim.trials, sim.ci_level, sim.seed);

  const double marks = mark_mean(fading, policy);
  const double radius = choose_window(params, sim.window_delta / (marks > 0.0 ? marks : 1.0));
  const Field field(params, radius);
  const double tail = marks * field.tail_mean();
  const double signal_scale = std::pow(params.r, -params.alpha) / params.beta;
  const Policy::Kind kind = policy.kind();
  const double gamma = policy.power_exponent();
  const double t = policy.threshold_level();

  const auto outage = [&](std::uint64_t trial) {
    CounterRng rng(sim.seed, trial);
    double signal = 1.0;
    switch (kind) {
      case Policy::Kind::Plain:
        signal = fading.sample(rng);
        break;
      case Policy::Kind::Threshold:
        signal = fading.sample_at_least(t, rng);
        break;
      case Policy::Kind::Fpc:
        signal = std::pow(fading.sample(rng), 1.0 - gamma);
        break;
      case Policy::Kind::Inversion:
        break;
    }
    const double tolerable = signal * signal_scale;
    double interference = tail;
    for (double arrival = rng.exponential(); arrival <= field.t_max;
         arrival += rng.exponential()) {
      double mark = fading.sample(rng);
      if (gamma > 0.0) mark *= std::pow(fading.sample(rng), -gamma);
      interference += mark * field.pathloss(arrival);
      if (interference > tolerable) return true;
    }
    return false;
  };

  const std::uint64_t events = detail::parallel_count(sim.trials, sim.threads, outage);
  return wilson_estimate(events, sim.trials, sim.ci_level, sim.seed);
}

OutageBreakdown simulate_outage_breakdown(const NetworkParams& params, const SimConfig& sim) {
  validate(params);
  validate(sim);
  OutageBreakdown result;
  if (params.lambda == 0.0) {
    result.outage = wilson_estimate(0, sim.trials, sim.ci_level, sim.seed);
    result.dominant = result.outage;
    return result;
  }
  const Field field(params, choose_window(params, sim.window_delta));
  const double tail = field.tail_mean();
  const double tolerable = std::pow(params.r, -params.alpha) / params.beta;
  const double dominant_arrival = params.lambda * dominant_disk_area(params);

  // per worker: outage, dominant interferer present, single-dominated outage
  const unsigned workers = detail::resolve_threads(sim.threads, sim.trials);
  std::vector<std::array<std::uint64_t, 3>> counts(workers, {0, 0, 0});
  detail::parallel_ranges(sim.trials, workers,
                          [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
                            auto& local = counts[w];
                            for (std::uint64_t trial = begin; trial < end; ++trial) {
                              CounterRng rng(sim.seed, trial);
                              double total = tail;
                              double strongest = 0.0;
                              const double first = rng.exponential();
                              for (double arrival = first; arrival <= field.t_max;
                                   arrival += rng.exponential()) {
                                const double v = field.pathloss(arrival);
                                total += v;
                                strongest = std::max(strongest, v);
                              }
                              if (first <= dominant_arrival) ++local[1];
                              if (total > tolerable) {
                                ++local[0];
                                if (strongest > tolerable) ++local[2];
                              }
                            }
                          });
  std::array<std::uint64_t, 3> total{0, 0, 0};
  for (const auto& c : counts) {
    for (int k = 0; k < 3; ++k) total[k] += c[k];
  }
  result.outage = wilson_estimate(total[0], sim.trials, sim.ci_level, sim.seed);
  result.dominant = wilson_estimate(total[1], sim.trials, sim.ci_level, sim.seed);
  result.single_dominated = total[2];
  return result;
}

double sample_z_alpha(double alpha, int n_terms, CounterRng& rng) {
  if (!(alpha > 2.0)) throw DomainError("alpha", "alpha must be > 2, got " + format_double(alpha));
  if (n_terms < 16) throw DomainError("n-terms", "n_terms must be >= 16");
  const double half = alpha / 2.0;
  double arrival = 0.0;
  double sum = 0.0;
  for (int i = 0; i < n_terms; ++i) {
    arrival += rng.exponential();
    sum += half == 2.0 ? 1.0 / (arrival * arrival) : std::pow(arrival, -half);
  }
  // E[sum over arrivals beyond T_n | T_n] = T_n^(1 - alpha/2) / (alpha/2 - 1)
  return sum + std::pow(arrival, 1.0 - half) / (half - 1.0);
}

ZQuantileTable::ZQuantileTable(double alpha, std::vector<double> samples)
    : alpha_(alpha), samples_(std::move(samples)) {
  if (samples_.size() < 2) throw DomainError("n-samples", "a quantile table needs >= 2 samples");
  std::sort(samples_.begin(), samples_.end());
}

double ZQuantileTable::ccdf(double w) const {
  const auto above = samples_.end() - std::upper_bound(samples_.begin(), samples_.end(), w);
  return static_cast<double>(above) / static_cast<double>(samples_.size());
}

double ZQuantileTable::ccdf_inverse(double eps) const {
  const double n = static_cast<double>(samples_.size());
  if (!(eps >= 1.0 / n && eps <= 1.0 - 1.0 / n)) {
    throw QuantileRange("eps", "eps=" + format_double(eps) + " outside the table support [" +
                                   format_double(1.0 / n) + ", " + format_double(1.0 - 1.0 / n) +
                                   "]");
  }
  const double position = (1.0 - eps) * (n - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const std::size_t hi = std::min(lo + 1, samples_.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return samples_[lo] + frac * (samples_[hi] - samples_[lo]);
}

ZQuantileTable z_quantile_table(double alpha, std::uint64_t n_samples, std::uint64_t seed,
                                int n_terms, unsigned threads) {
  if (n_samples < 2) throw DomainError("n-samples", "a quantile table needs >= 2 samples");
  std::vector<double> samples(n_samples);
  detail::parallel_ranges(n_samples, threads, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(seed, i);
      samples[i] = sample_z_alpha(alpha, n_terms, rng);
    }
  });
  return ZQuantileTable(alpha, std::move(samples));
}

double tc_numeric(const std::function<double(double)>& outage_fn, OutageConstraint eps,
                  double lambda_hint, numerics::Tolerance tol) {
  if (!(lambda_hint > 0.0) || !std::isfinite(lambda_hint)) {
    throw DomainError("lambda", "intensity hint must be a positive number");
  }
  const double target = eps.value();
  double hi = lambda_hint;
  for (int i = 0; i < 200 && outage_fn(hi) < target; ++i) hi *= 2.0;
  const auto gap = [&](double lambda) { return outage_fn(lambda) - target; };
  return numerics::find_root_monotone(gap, {0.0, hi}, tol) * eps.success();
}

}  // namespace tcap
