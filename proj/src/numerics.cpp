#include "tcap/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "tcap/errors.hpp"

namespace tcap::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt_value(double v) { return std::to_string(v); }

// Series for ln gamma(a, x); converges for all x >= 0, fast when x < a + 1.
double log_lower_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return std::log(sum) - x + a * std::log(x);
}

// Lentz continued fraction for ln Gamma(a, x); valid for x > 0 and any real a,
// fast when x >= a + 1.
double log_upper_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::log(h) - x + a * std::log(x);
}

// E1(x) for 0 < x < 1 by its power series.
double exp_integral_e1_small(double x) {
  constexpr double kEulerGamma = 0.57721566490153286060651209;
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

void check_incomplete_gamma_domain(double a, double x) {
  if (!(x >= 0.0)) throw DomainError("x", "incomplete gamma requires x >= 0, got " + fmt_value(x));
  if (std::isnan(a)) throw DomainError("a", "incomplete gamma requires a finite a");
  if (a > 0.0) return;
  if (x == 0.0) {
    throw DomainError("x", "Gamma(a, 0) diverges for a <= 0");
  }
}

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const ScalarFn& f, double a, double b) {
  static constexpr std::array<double, 8> kNodes = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> kKronrod = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> kGauss = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = kKronrod[7] * f_center;
  double gauss = kGauss[3] * f_center;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrod[j] * sum;
    if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw NonConvergence("integrand is not finite on [" + fmt_value(a) + ", " + fmt_value(b) + "]");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double lambert_w0(double x) {
  constexpr double kBranch = -1.0 / std::numbers::e;
  if (std::isnan(x) || x < kBranch) {
    // allow a rounding hair below the branch point
    if (!(x >= kBranch - 4 * kEps)) {
      throw DomainError("x", "lambert_w0 requires x >= -1/e, got " + fmt_value(x));
    }
    return -1.0;
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.25) {
    // branch-point expansion in p = sqrt(2 (e x + 1))
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    if (p == 0.0) return -1.0;
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4 * kEps * (1.0 + std::abs(w))) break;
  }
  return std::max(w, -1.0);
}

double gauss_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double gauss_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("p", "gauss_quantile requires 0 < p < 1, got " + fmt_value(p));
  }
  if (p > 0.5) return -gauss_quantile(1.0 - p);

  // Acklam's rational approximation, refined by Halley steps on erfc.
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
  for (int iter = 0; iter < 2; ++iter) {
    const double e = gauss_cdf(x) - p;
    const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("x", "log_gamma requires x > 0, got " + fmt_value(x));
  if (x < 0.5) {
    // reflection keeps the Lanczos sum in its accurate range
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kG = 7.0;
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (int i = 1; i < 9; ++i) sum += kCoef[i] / (z + i);
  const double t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double log_upper_incomplete_gamma(double a, double x) {
  check_incomplete_gamma_domain(a, x);
  if (x == 0.0) return log_gamma(a);
  if (x >= a + 1.0) return log_upper_cf(a, x);
  if (a > 0.0) {
    const double lg = log_gamma(a);
    const double p = std::exp(log_lower_series(a, x) - lg);
    return lg + std::log1p(-p);
  }
  if (a == 0.0) return std::log(exp_integral_e1_small(x));
  // a < 0, x < 1: step down from a + 1
  const double upper_next = std::exp(log_upper_incomplete_gamma(a + 1.0, x));
  const double value = (upper_next - std::pow(x, a) * std::exp(-x)) / a;
  return std::log(value);
}

double upper_incomplete_gamma(double a, double x) {
  return std::exp(log_upper_incomplete_gamma(a, x));
}

double lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0)) throw DomainError("a", "lower incomplete gamma requires a > 0, got " + fmt_value(a));
  if (!(x >= 0.0)) throw DomainError("x", "lower incomplete gamma requires x >= 0, got " + fmt_value(x));
  if (x == 0.0) return 0.0;
  return std::exp(log_gamma(a)) * gamma_p(a, x);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("a", "gamma_p requires a > 0, got " + fmt_value(a));
  if (!(x >= 0.0)) throw DomainError("x", "gamma_p requires x >= 0, got " + fmt_value(x));
  if (x == 0.0) return 0.0;
  const double lg = log_gamma(a);
  if (x < a + 1.0) return std::exp(log_lower_series(a, x) - lg);
  return -std::expm1(log_upper_cf(a, x) - lg);
}

double log_beta(double a, double b) {
  if (!(a > 0.0)) throw DomainError("a", "log_beta requires a > 0, got " + fmt_value(a));
  if (!(b > 0.0)) throw DomainError("b", "log_beta requires b > 0, got " + fmt_value(b));
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double find_root_monotone(const ScalarFn& f, Bracket bracket, Tolerance tol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) throw DomainError("bracket", "bracket requires lo < hi");
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) throw NonConvergence("root function returned NaN");
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw NoStraddle("no sign change on [" + fmt_value(lo) + ", " + fmt_value(hi) + "]");
  }
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // floating-point resolution reached
    const double f_mid = f(mid);
    if (std::isnan(f_mid)) throw NonConvergence("root function returned NaN");
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol.abs + tol.rel * std::abs(0.5 * (lo + hi))) break;
  }
  return 0.5 * (lo + hi);
}

Maximum maximize_concave(const ScalarFn& g, Bracket bracket, Tolerance tol) {
  if (!(bracket.lo < bracket.hi)) throw DomainError("bracket", "bracket requires lo < hi");
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = bracket.lo;
  double b = bracket.hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    if (b - a <= tol.abs + tol.rel * std::abs(0.5 * (a + b))) break;
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  Maximum best{0.5 * (a + b), 0.0};
  best.value = g(best.argmax);
  const double g_lo = g(bracket.lo);
  const double g_hi = g(bracket.hi);
  if (g_hi > best.value) best = {bracket.hi, g_hi};
  if (g_lo > best.value) best = {bracket.lo, g_lo};
  return best;
}

double integrate(const ScalarFn& f, double a, double b, Tolerance tol, int initial_panels) {
  if (a == b) return 0.0;
  if (!(a < b)) return -integrate(f, b, a, tol, initial_panels);
  initial_panels = std::max(initial_panels, 1);

  std::priority_queue<Panel> panels;
  double total = 0.0;
  double error = 0.0;
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
    Panel p = gauss_kronrod(f, lo, hi);
    total += p.value;
    error += p.error;
    panels.push(p);
  }

  for (int split = 0; split < tol.max_iter; ++split) {
    if (error <= std::max(tol.abs, tol.rel * std::abs(total))) return total;
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // cannot refine further; the remaining error is at rounding level
      panels.push({worst.a, worst.b, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // the running sums drift; recompute before the final check
  total = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  if (error <= std::max(tol.abs, tol.rel * std::abs(total))) return total;
  throw NonConvergence("quadrature did not converge after " + std::to_string(tol.max_iter) +
                       " refinements (error estimate " + fmt_value(error) + ")");
}

double integrate_tail(const ScalarFn& f, double a, Tolerance tol, int initial_panels) {
  if (a > 0.0) {
    return integrate([&](double u) { return f(a / u) * a / (u * u); }, 0.0, 1.0, tol,
                     initial_panels);
  }
  const double head = integrate(f, a, 1.0, tol, initial_panels);
  const double tail =
      integrate([&](double u) { return f(1.0 / u) / (u * u); }, 0.0, 1.0, tol, initial_panels);
  return head + tail;
}

}  // namespace tcap::numerics
