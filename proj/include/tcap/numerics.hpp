#pragma once

#include <functional>

namespace tcap::numerics {

using ScalarFn = std::function<double(double)>;

struct Bracket {
  double lo;
  double hi;
};

/// Stopping rule shared by the iterative routines. Convergence is declared
/// when an error estimate drops below max(abs, rel * |value|).
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  int max_iter = 200;
};

/// Principal branch W0 of the Lambert W function on [-1/e, inf).
double lambert_w0(double x);

/// Standard normal CDF, P(Z <= z).
double gauss_cdf(double z);

/// Inverse of gauss_cdf on (0, 1).
double gauss_quantile(double p);

/// ln Gamma(x) for x > 0 (Lanczos). Has no global side effects, unlike
/// std::lgamma which writes signgam.
double log_gamma(double x);

/// Gamma(a, x) = int_x^inf s^(a-1) e^(-s) ds, for a > 0 and x >= 0, or
/// a <= 0 and x > 0. Negative a below 1 in x uses the downward recurrence
/// Gamma(a, x) = (Gamma(a + 1, x) - x^a e^(-x)) / a.
double upper_incomplete_gamma(double a, double x);

/// ln Gamma(a, x), same domain. Stays finite where Gamma(a, x) would
/// underflow.
double log_upper_incomplete_gamma(double a, double x);

/// gamma(a, x) = int_0^x s^(a-1) e^(-s) ds, a > 0.
double lower_incomplete_gamma(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gamma_p(double a, double x);

/// ln B(a, b), a, b > 0.
double log_beta(double a, double b);

/// Bisection for the zero of a monotone function on `bracket`. The sign of
/// f at the endpoints must differ (a zero at an endpoint is accepted).
/// Stops when the bracket is narrower than abs + rel * |x|.
double find_root_monotone(const ScalarFn& f, Bracket bracket, Tolerance tol = {});

struct Maximum {
  double argmax;
  double value;
};

/// Golden-section search for the maximizer of a concave (or unimodal)
/// function. Returns an endpoint when the maximum sits on the boundary.
Maximum maximize_concave(const ScalarFn& g, Bracket bracket, Tolerance tol = {});

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
double integrate(const ScalarFn& f, double a, double b, Tolerance tol = {},
                 int initial_panels = 4);

/// int_a^inf f(x) dx. For a > 0 the substitution u = a / x maps the range
/// onto (0, 1]; otherwise [a, 1] is integrated directly and the remainder
/// through u = 1 / x.
double integrate_tail(const ScalarFn& f, double a, Tolerance tol = {},
                      int initial_panels = 4);

}  // namespace tcap::numerics
