#pragma once

#include <string>

namespace tcap {

/// The (lambda, alpha, beta, r) tuple every formula is parameterized by.
struct NetworkParams {
  double lambda = 0.0;  ///< transmitters per m^2
  double alpha = 4.0;   ///< pathloss exponent
  double beta = 1.0;    ///< SIR threshold (linear)
  double r = 1.0;       ///< Tx-Rx separation in meters

  NetworkParams with_lambda(double value) const {
    NetworkParams copy = *this;
    copy.lambda = value;
    return copy;
  }
};

/// Returns `params` unchanged if lambda >= 0, alpha > 2, beta > 0, r > 0;
/// otherwise throws DomainError naming the first violated field.
const NetworkParams& validate(const NetworkParams& params);

/// Target outage probability, strictly inside (0, 1).
class OutageConstraint {
 public:
  explicit OutageConstraint(double epsilon);

  double value() const noexcept { return epsilon_; }
  /// Success probability 1 - epsilon.
  double success() const noexcept { return 1.0 - epsilon_; }

 private:
  double epsilon_;
};

/// Area of the dominant-interferer disk, pi r^2 beta^(2/alpha).
double dominant_disk_area(const NetworkParams& params);

std::string describe(const NetworkParams& params);

}  // namespace tcap
