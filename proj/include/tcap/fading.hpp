#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tcap/rng.hpp"

namespace tcap {

/// Distribution of the power fading coefficient H (unit mean for the
/// parametric kinds). Immutable; copies share the tabulated density.
///
/// Compact string form: "none", "rayleigh", "nakagami:m=4" (optionally
/// ",mean=<v>", which is validated and then divided out), "table:<path>".
class FadingModel {
 public:
  enum class Kind { None, Rayleigh, Nakagami, Tabulated };

  static FadingModel none();
  static FadingModel rayleigh();
  /// Nakagami-m power fading, Gamma(m, mean / m). The mean is normalized
  /// away so every model has E[H] = 1; m must be >= 0.5.
  static FadingModel nakagami(double m, double mean = 1.0);
  /// Density samples on an increasing positive grid (log-spaced grids are
  /// the intended use). The density is renormalized to unit mass under
  /// log-domain trapezoidal quadrature.
  static FadingModel tabulated(std::vector<double> values, std::vector<double> density);
  /// Two-column CSV (value, density). Blank lines, '#' comments and one
  /// non-numeric header line are skipped.
  static FadingModel from_csv(const std::filesystem::path& path);
  static FadingModel parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  /// Nakagami shape m (1 for Rayleigh, +inf for None, 0 for tabulated).
  double shape() const noexcept;

  /// E[H^p]. Throws DivergentMoment at or below the existence boundary
  /// (p <= -1 for Rayleigh, p <= -m for Nakagami).
  double moment(double p) const;
  /// E[H^p | H >= t].
  double truncated_moment(double p, double t) const;
  /// P(H >= t).
  double tail_probability(double t) const;
  /// Density of H at h (0 for None).
  double density(double h) const;

  /// E[g(H)] over the fading law.
  double expect(const std::function<double(double)>& g) const;
  /// E[g(H) | H >= t].
  double expect_given_at_least(const std::function<double(double)>& g, double t) const;

  double sample(CounterRng& rng) const;
  /// One draw from the law of H conditioned on H >= t.
  double sample_at_least(double t, CounterRng& rng) const;

  /// Canonical compact string (round-trips through parse for parametric
  /// kinds; tabulated models report their source path when known).
  std::string describe() const;

  struct Table;

 private:
  FadingModel(Kind kind, double m, std::shared_ptr<const Table> table, std::string source)
      : kind_(kind), m_(m), table_(std::move(table)), source_(std::move(source)) {}

  Kind kind_;
  double m_;
  std::shared_ptr<const Table> table_;
  std::string source_;
};

}  // namespace tcap
