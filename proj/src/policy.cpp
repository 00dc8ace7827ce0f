#include <charconv>
#include <cmath>

#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"

namespace tcap {

namespace {

double parse_field(std::string_view spec, std::string_view key) {
  // "<name>:<key>=<value>"
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("policy", "policy '" + std::string(spec) + "' needs " + std::string(key) +
                                    "=<value>");
  }
  std::string_view field = spec.substr(colon + 1);
  const auto eq = field.find('=');
  if (eq == std::string_view::npos || field.substr(0, eq) != key) {
    throw DomainError("policy", "policy '" + std::string(spec) + "' needs " + std::string(key) +
                                    "=<value>");
  }
  const std::string_view number = field.substr(eq + 1);
  double value = 0.0;
  const auto result = std::from_chars(number.data(), number.data() + number.size(), value);
  if (result.ec != std::errc() || result.ptr != number.data() + number.size()) {
    throw DomainError("policy", "malformed number in policy '" + std::string(spec) + "'");
  }
  return value;
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::LowerDominant:
      return "lower";
    case BoundKind::Markov:
      return "markov";
    case BoundKind::MarkovRelaxed:
      return "markov-relaxed";
    case BoundKind::ChebyshevRelaxed:
      return "chebyshev";
    case BoundKind::Chernoff:
      return "chernoff";
  }
  return "unknown";
}

Policy Policy::threshold(double t) {
  if (!(t >= 0.0) || std::isinf(t)) {
    throw DomainError("t", "threshold t must be finite and >= 0, got " + format_double(t));
  }
  return Policy(Kind::Threshold, t);
}

Policy Policy::fpc(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw DomainError("gamma", "power-control exponent must lie in [0, 1], got " +
                                   format_double(gamma));
  }
  return Policy(Kind::Fpc, gamma);
}

Policy Policy::parse(std::string_view spec) {
  if (spec == "plain") return plain();
  if (spec == "inversion") return inversion();
  if (spec.rfind("threshold", 0) == 0) return threshold(parse_field(spec, "t"));
  if (spec.rfind("fpc", 0) == 0) return fpc(parse_field(spec, "gamma"));
  throw DomainError("policy", "unknown policy '" + std::string(spec) +
                                  "' (expected plain, threshold:t=<t>, fpc:gamma=<g>, inversion)");
}

double Policy::power_exponent() const noexcept {
  switch (kind_) {
    case Kind::Fpc:
      return parameter_;
    case Kind::Inversion:
      return 1.0;
    default:
      return 0.0;
  }
}

std::string Policy::describe() const {
  switch (kind_) {
    case Kind::Plain:
      return "plain";
    case Kind::Threshold:
      return "threshold:t=" + format_double(parameter_);
    case Kind::Fpc:
      return "fpc:gamma=" + format_double(parameter_);
    case Kind::Inversion:
      return "inversion";
  }
  return "plain";
}

}  // namespace tcap
