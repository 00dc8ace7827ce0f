#include "tcap/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tcap/errors.hpp"

namespace tcap {

namespace {

std::string show(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

const NetworkParams& validate(const NetworkParams& params) {
  if (!(params.lambda >= 0.0) || std::isinf(params.lambda)) {
    throw DomainError("lambda", "lambda must be a finite value >= 0, got " + show(params.lambda));
  }
  if (!(params.alpha > 2.0) || std::isinf(params.alpha)) {
    throw DomainError("alpha", "alpha must be > 2, got " + show(params.alpha));
  }
  if (!(params.beta > 0.0) || std::isinf(params.beta)) {
    throw DomainError("beta", "beta must be > 0, got " + show(params.beta));
  }
  if (!(params.r > 0.0) || std::isinf(params.r)) {
    throw DomainError("r", "r must be > 0, got " + show(params.r));
  }
  return params;
}

OutageConstraint::OutageConstraint(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("eps", "eps must lie in (0, 1), got " + show(epsilon));
  }
}

double dominant_disk_area(const NetworkParams& params) {
  return std::numbers::pi * params.r * params.r * std::pow(params.beta, 2.0 / params.alpha);
}

std::string describe(const NetworkParams& params) {
  return "lambda=" + show(params.lambda) + " alpha=" + show(params.alpha) +
         " beta=" + show(params.beta) + " r=" + show(params.r);
}

}  // namespace tcap
