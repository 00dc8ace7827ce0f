#include <cmath>

#include "cli.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"

namespace tcap::cli {

namespace {

BoundKind bound_kind(const std::string& method) {
  if (method == "markov") return BoundKind::Markov;
  if (method == "markov-relaxed") return BoundKind::MarkovRelaxed;
  if (method == "chebyshev") return BoundKind::ChebyshevRelaxed;
  return BoundKind::Chernoff;
}

bool is_bound(const std::string& method) {
  return method == "markov" || method == "markov-relaxed" || method == "chebyshev" ||
         method == "chernoff";
}

void require_no_fading(const FadingModel& fading, const std::string& method) {
  if (fading.kind() != FadingModel::Kind::None) {
    throw DomainError("fading", "method '" + method + "' is defined without fading (got " +
                                    fading.describe() + ")");
  }
}

int integer_shape(const FadingModel& fading) {
  const double m = fading.shape();
  if (m != std::floor(m)) {
    throw DomainError("m", "the exact Nakagami TC needs an integer m, got " + format_double(m) +
                               "; use --method approx or a tabulated model");
  }
  return static_cast<int>(m);
}

Value scalar(double v) {
  Value out;
  out.value = v;
  return out;
}

Value from_estimate(const Estimate& e) { return {e.p_hat, e.ci_lo, e.ci_hi}; }

double outage_exact(const Settings& s, const FadingModel& fading, const Policy& policy) {
  const NetworkParams p = s.params();
  switch (fading.kind()) {
    case FadingModel::Kind::None:
      return outage_exact_pl4(p);
    case FadingModel::Kind::Rayleigh:
      if (policy.kind() == Policy::Kind::Plain) return outage_exact_rayleigh(p);
      break;
    default:
      break;
  }
  throw DomainError("method", "no exact outage expression for fading " + fading.describe() +
                                  " with policy " + policy.describe() + "; try lower, approx or mc");
}

double capacity_exact(const Settings& s, const FadingModel& fading, const Policy& policy) {
  const NetworkParams p = s.params();
  const OutageConstraint eps(s.eps);
  if (policy.kind() == Policy::Kind::Plain || fading.kind() == FadingModel::Kind::None) {
    switch (fading.kind()) {
      case FadingModel::Kind::None:
        return tc_exact_pl4(eps, p);
      case FadingModel::Kind::Rayleigh:
        return tc_exact_rayleigh(eps, p);
      case FadingModel::Kind::Nakagami:
        return tc_exact_nakagami(eps, p, integer_shape(fading));
      case FadingModel::Kind::Tabulated:
        break;
    }
  }
  throw DomainError("method", "no exact TC expression for fading " + fading.describe() +
                                  " with policy " + policy.describe() + "; try approx or mc");
}

double lambda_hint(const Settings& s) {
  return -std::log1p(-s.eps) / dominant_disk_area(s.params());
}

}  // namespace

const std::vector<std::string>& outage_methods() {
  static const std::vector<std::string> names = {"exact", "lower", "markov", "markov-relaxed",
                                                 "chebyshev", "chernoff", "approx", "mc", "mimo"};
  return names;
}

const std::vector<std::string>& capacity_methods() {
  static const std::vector<std::string> names = {"upper", "exact", "markov", "markov-relaxed",
                                                 "chebyshev", "chernoff", "approx", "implicit",
                                                 "mc", "mimo"};
  return names;
}

Value evaluate(Quantity quantity, const std::string& method, const Settings& s) {
  const NetworkParams params = validate(s.params());
  const FadingModel fading = FadingModel::parse(s.fading);
  const Policy policy = Policy::parse(s.policy);
  const bool plain_pathloss =
      fading.kind() == FadingModel::Kind::None && policy.kind() == Policy::Kind::Plain;

  if (quantity == Quantity::Outage) {
    if (method == "exact") return scalar(outage_exact(s, fading, policy));
    if (method == "lower") {
      return scalar(plain_pathloss ? outage_lower(params)
                                   : outage_lower_fading(params, fading, policy));
    }
    if (is_bound(method)) {
      require_no_fading(fading, method);
      return scalar(outage_upper(params, bound_kind(method)));
    }
    if (method == "approx") return scalar(outage_approx_fading(params, fading, policy));
    if (method == "mc") return from_estimate(simulate_outage(params, fading, policy, s.sim()));
    if (method == "mimo") return from_estimate(simulate_outage_mimo(params, s.mimo(), s.sim()));
    throw UsageError("--method: unknown outage method '" + method + "'");
  }

  const OutageConstraint eps(s.eps);
  if (method == "upper") {
    if (plain_pathloss) return scalar(tc_upper(eps, params));
    const auto lower = [&](double l) {
      return outage_lower_fading(params.with_lambda(l), fading, policy);
    };
    return scalar(tc_numeric(lower, eps, lambda_hint(s)));
  }
  if (method == "exact") return scalar(capacity_exact(s, fading, policy));
  if (is_bound(method)) {
    require_no_fading(fading, method);
    return scalar(tc_lower(eps, params, bound_kind(method)));
  }
  if (method == "approx") return scalar(tc_approx(eps, params, fading, policy));
  if (method == "implicit") {
    require_no_fading(fading, method);
    const ZQuantileTable table = z_quantile_table(params.alpha, s.samples, s.seed, s.n_terms, s.threads);
    return scalar(tc_implicit(eps, params, [&](double e) { return table(e); }));
  }
  if (method == "mc") {
    const SimConfig sim = s.sim();
    const auto outage = [&](double l) {
      return simulate_outage(params.with_lambda(l), fading, policy, sim).p_hat;
    };
    return scalar(tc_numeric(outage, eps, lambda_hint(s), {0.0, 1e-6, 200}));
  }
  if (method == "mimo") {
    return scalar(tc_mimo(eps, params.with_lambda(0.0), s.mimo(), s.sim()));
  }
  throw UsageError("--method: unknown tc method '" + method + "'");
}

}  // namespace tcap::cli
