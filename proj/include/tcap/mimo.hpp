#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcap/model.hpp"
#include "tcap/simulator.hpp"

namespace tcap {

/// Transmit/receive weighting at the reference link.
///
/// Beamform: dominant singular pair of H_0. Mrc: matched receive filter
/// (nt = 1). Mrt: matched transmit vector (nr = 1). CancelThenDiversity(k):
/// receive filter orthogonal to the k strongest interferer channels, matched
/// to the rest. Mmse: r_0 = R^-1 h_0 with R the interference covariance in
/// the window; the R^-1/2 variant is available for comparison.
class MimoStrategy {
 public:
  enum class Kind { Beamform, Mrc, Mrt, CancelThenDiversity, Mmse };

  static MimoStrategy beamform() { return MimoStrategy(Kind::Beamform, 0, false); }
  static MimoStrategy mrc() { return MimoStrategy(Kind::Mrc, 0, false); }
  static MimoStrategy mrt() { return MimoStrategy(Kind::Mrt, 0, false); }
  static MimoStrategy cancel_then_diversity(int k);
  static MimoStrategy mmse(bool inverse_sqrt = false) {
    return MimoStrategy(Kind::Mmse, 0, inverse_sqrt);
  }
  /// "beamform", "mrc", "mrt", "cancel:k=<k>", "mmse", "mmse-sqrt".
  static MimoStrategy parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  int cancelled() const noexcept { return k_; }
  bool inverse_sqrt() const noexcept { return inverse_sqrt_; }
  std::string describe() const;

 private:
  MimoStrategy(Kind kind, int k, bool inverse_sqrt)
      : kind_(kind), k_(k), inverse_sqrt_(inverse_sqrt) {}

  Kind kind_;
  int k_;
  bool inverse_sqrt_;
};

struct MimoConfig {
  int nt = 1;
  int nr = 1;
  MimoStrategy strategy = MimoStrategy::mrc();
};

/// Throws ConfigError when the strategy does not fit the antenna counts.
void validate(const MimoConfig& mimo);

/// Per-trial critical intensity: trial i is in outage at intensity lambda
/// iff lambda exceeds entry i. Channels are iid CN(0, 1); interferers use
/// isotropic unit-norm transmit vectors. The window is sized at
/// params.lambda (which must be > 0).
std::vector<double> mimo_critical_intensities(const NetworkParams& params, const MimoConfig& mimo,
                                              const SimConfig& sim);

Estimate simulate_outage_mimo(const NetworkParams& params, const MimoConfig& mimo,
                              const SimConfig& sim);

/// TC as (1 - eps) times the eps-quantile of the critical intensities. The
/// window is re-sized at the previous estimate for `passes` rounds, starting
/// from params.lambda if positive.
double tc_mimo(OutageConstraint eps, const NetworkParams& params, const MimoConfig& mimo,
               const SimConfig& sim, int passes = 2);

/// Least-squares slope of log tc against log n.
double scaling_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace tcap
