#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/fading.hpp"
#include "tcap/model.hpp"

using namespace tcap;
using std::numbers::pi;

namespace {

const NetworkParams kRef{1e-4, 4.0, 3.0, 10.0};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + i * (std::log(hi) - std::log(lo)) / (n - 1));
  return g;
}

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("reference values at lambda 1e-4, alpha 4, beta 3, r 10") {
  CHECK(outage_lower(kRef) == doctest::Approx(1.0 - std::exp(-1e-4 * pi * 100.0 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(outage_lower(kRef) == doctest::Approx(0.05295).epsilon(1e-3));
  CHECK(outage_exact_pl4(kRef) == doctest::Approx(0.0544).epsilon(2e-3));
  CHECK(tc_upper(OutageConstraint(0.1), kRef) == doctest::Approx(1.7427e-4).epsilon(1e-4));
  CHECK(outage_lower(kRef.with_lambda(0.0)) == 0.0);
}

TEST_CASE("far-field moments agree with Campbell integrals") {
  const FarFieldMoments f = farfield_moments(kRef);
  const double d = std::pow(kRef.beta, 1.0 / kRef.alpha) * kRef.r;
  boost::math::quadrature::exp_sinh<double> integrator;
  const auto campbell = [&](double power) {
    return integrator.integrate([&](double u) {
      const double x = d + u;
      return 2.0 * pi * x * std::pow(std::pow(x, -kRef.alpha), power);
    });
  };
  const double scale = std::pow(kRef.r, kRef.alpha);
  CHECK(f.mu == doctest::Approx(campbell(1.0) * scale).epsilon(1e-10));
  CHECK(f.sigma2 == doctest::Approx(campbell(2.0) * scale * scale).epsilon(1e-10));
  CHECK(f.mu == doctest::Approx(100.0 * pi / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("bounds sandwich the exact outage at alpha 4") {
  for (double lambda : log_grid(1e-6, 3e-3, 40)) {
    const NetworkParams p = kRef.with_lambda(lambda);
    const double exact = outage_exact_pl4(p);
    CHECK(outage_lower(p) < exact);
    CHECK(exact < outage_upper(p, BoundKind::Chernoff));
    CHECK(exact < outage_upper(p, BoundKind::Markov));
    CHECK(exact < outage_upper(p, BoundKind::MarkovRelaxed));
  }
}

TEST_CASE("every upper bound dominates the lower bound on a parameter grid") {
  for (double alpha : {3.0, 4.0, 6.0}) {
    for (double beta : {1.0, 3.0, 10.0}) {
      for (double r : {1.0, 10.0}) {
        const NetworkParams base{0.0, alpha, beta, r};
        const double scale = 1.0 / dominant_disk_area(base);
        for (double x : {1e-3, 1e-2, 0.1, 0.5}) {
          const NetworkParams p = base.with_lambda(x * scale);
          const double lower = outage_lower(p);
          for (BoundKind k : {BoundKind::Markov, BoundKind::MarkovRelaxed, BoundKind::Chernoff}) {
            CHECK(outage_upper(p, k) > lower);
          }
          bool valid = true;
          double cheb = 0.0;
          try {
            cheb = outage_upper(p, BoundKind::ChebyshevRelaxed);
          } catch (const ChebyshevInvalid&) {
            valid = false;
          }
          if (valid) {
            CHECK(cheb > lower);
          } else {
            CHECK(farfield_moments(p).mu * p.lambda >= (1.0 - 1e-12) / p.beta);
          }
        }
      }
    }
  }
}

TEST_CASE("outage is non-decreasing in lambda, beta and r; tc non-increasing in beta and r") {
  double prev = 0.0;
  for (double lambda : log_grid(1e-6, 1e-2, 30)) {
    const double q = outage_upper(kRef.with_lambda(lambda), BoundKind::Chernoff);
    CHECK(q >= prev);
    prev = q;
  }
  prev = 0.0;
  double prev_tc = 1e300;
  for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    NetworkParams p = kRef;
    p.beta = beta;
    CHECK(outage_exact_pl4(p) >= prev);
    prev = outage_exact_pl4(p);
    const double tc = tc_lower(OutageConstraint(0.1), p, BoundKind::Chernoff);
    CHECK(tc <= prev_tc);
    prev_tc = tc;
  }
  NetworkParams near = kRef;
  near.r = 5.0;
  CHECK(outage_exact_pl4(near) < outage_exact_pl4(kRef));
}

TEST_CASE("lower tc of each bound inverts that bound") {
  const OutageConstraint eps(0.1);
  for (BoundKind k : {BoundKind::Markov, BoundKind::MarkovRelaxed, BoundKind::ChebyshevRelaxed,
                      BoundKind::Chernoff}) {
    const double tc = tc_lower(eps, kRef, k);
    const double q = outage_upper(kRef.with_lambda(tc / eps.success()), k);
    CHECK(q == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(tc < tc_exact_pl4(eps, kRef));
  }
  const double relaxed = tc_lower(eps, kRef, BoundKind::MarkovRelaxed);
  CHECK(relaxed == doctest::Approx(0.5 * 0.1 * 0.9 / dominant_disk_area(kRef)).epsilon(1e-10));
}

TEST_CASE("relaxed markov over the upper tc tends to (alpha - 2) / alpha") {
  for (double alpha : {3.0, 4.0, 6.0}) {
    NetworkParams p = kRef;
    p.alpha = alpha;
    const OutageConstraint eps(1e-6);
    const double ratio = tc_lower(eps, p, BoundKind::MarkovRelaxed) / tc_upper(eps, p);
    CHECK(ratio == doctest::Approx((alpha - 2.0) / alpha).epsilon(1e-5));
  }
}

TEST_CASE("chebyshev bound is invalid past mu lambda = 1 / beta") {
  const double edge = 1.0 / (kRef.beta * farfield_moments(kRef).mu);
  CHECK_THROWS_AS(outage_upper(kRef.with_lambda(edge * 1.01), BoundKind::ChebyshevRelaxed),
                  ChebyshevInvalid);
  CHECK_NOTHROW(outage_upper(kRef.with_lambda(edge * 0.5), BoundKind::ChebyshevRelaxed));
}

TEST_CASE("exact alpha 4 outage uses the standard normal law") {
  const boost::math::normal_distribution<double> normal;
  const double x = std::sqrt(pi / 2.0) * kRef.lambda * dominant_disk_area(kRef.with_lambda(1.0));
  CHECK(outage_exact_pl4(kRef) == doctest::Approx(2.0 * boost::math::cdf(normal, x) - 1.0).epsilon(1e-13));
  NetworkParams other = kRef;
  other.alpha = 3.0;
  CHECK_THROWS_AS(outage_exact_pl4(other), DomainError);
}

TEST_CASE("round trips of exact outage and tc pairs") {
  for (double e : {0.01, 0.1, 0.5}) {
    const OutageConstraint eps(e);
    const double pl4 = tc_exact_pl4(eps, kRef) / eps.success();
    CHECK(std::abs(outage_exact_pl4(kRef.with_lambda(pl4)) - e) < 1e-10);
    for (double alpha : {2.5, 3.0, 4.0, 5.0}) {
      NetworkParams p = kRef;
      p.alpha = alpha;
      const double ray = tc_exact_rayleigh(eps, p) / eps.success();
      CHECK(std::abs(outage_exact_rayleigh(p.with_lambda(ray)) - e) < 1e-10);
    }
    const double lower = tc_upper(eps, kRef) / eps.success();
    CHECK(std::abs(outage_lower(kRef.with_lambda(lower)) - e) < 1e-12);
  }
}

TEST_CASE("z4 closed form and quadrature z ccdf agree") {
  for (double w : {0.5, 3.0, 99.0, 1e4}) {
    CHECK(z_ccdf(4.0, w) == doctest::Approx(z4_ccdf(w)).epsilon(1e-11));
  }
  for (double e : {0.01, 0.1, 0.5, 0.9}) {
    CHECK(z_ccdf_inverse(4.0, e) == doctest::Approx(z4_ccdf_inverse(e)).epsilon(1e-10));
    CHECK(z4_ccdf(z4_ccdf_inverse(e)) == doctest::Approx(e).epsilon(1e-13));
  }
}

TEST_CASE("quadrature z ccdf reproduces the stable laplace transform") {
  // E exp(-sZ) = exp(-Gamma(1 - 2/alpha) s^(2/alpha)) = 1 - s int exp(-sw) P(Z > w) dw
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double alpha : {2.5, 3.0, 6.0}) {
    const double d = 2.0 / alpha;
    for (double s : {0.05, 0.5, 2.0}) {
      const double tail = integrator.integrate([&](double w) {
        return w <= 0.0 ? 1.0 : std::exp(-s * w) * z_ccdf(alpha, w);
      });
      const double want = std::exp(-boost::math::tgamma(1.0 - d) * std::pow(s, d));
      CHECK(1.0 - s * tail == doctest::Approx(want).epsilon(1e-7));
    }
  }
}

TEST_CASE("tc_implicit with the closed-form quantile equals the exact tc") {
  for (double e : {0.01, 0.1, 0.4}) {
    const OutageConstraint eps(e);
    CHECK(tc_implicit(eps, kRef, z4_ccdf_inverse) ==
          doctest::Approx(tc_exact_pl4(eps, kRef)).epsilon(1e-8));
  }
  const ZQuantileFn broken = [](double) { return -1.0; };
  CHECK_THROWS_AS(tc_implicit(OutageConstraint(0.1), kRef, broken), QuantileRange);
}

TEST_CASE("rayleigh tc exceeds the non-fading tc by pi/2 at small eps") {
  const OutageConstraint eps(1e-3);
  const double ratio = tc_exact_pl4(eps, kRef) / tc_exact_rayleigh(eps, kRef);
  CHECK(ratio == doctest::Approx(pi / 2.0).epsilon(5e-3));
  const boost::math::normal_distribution<double> normal;
  const double formula = std::sqrt(pi / 2.0) * boost::math::quantile(normal, (1.0 + 1e-3) / 2.0) /
                         std::log(1.0 / (1.0 - 1e-3));
  CHECK(std::abs(ratio - formula) < 1e-8);
  CHECK(outage_exact_rayleigh(kRef) == doctest::Approx(0.0819).epsilon(1e-3));
  CHECK(outage_approx_fading(kRef, FadingModel::rayleigh(), Policy::plain()) ==
        doctest::Approx(outage_exact_rayleigh(kRef)).epsilon(1e-12));
}

TEST_CASE("nakagami tc limits") {
  const OutageConstraint eps(0.1);
  CHECK(tc_exact_nakagami(eps, kRef, 1) == doctest::Approx(tc_exact_rayleigh(eps, kRef)).epsilon(1e-10));
  CHECK(std::abs(tc_exact_nakagami(eps, kRef, 64) / tc_upper(eps, kRef) - 1.0) < 0.05);
  double prev = 0.0;
  for (int m : {1, 2, 4, 8, 16}) {
    const double tc = tc_exact_nakagami(eps, kRef, m);
    CHECK(tc > prev);
    prev = tc;
  }
  CHECK_THROWS_AS(tc_exact_nakagami(eps, kRef, 0), DomainError);
}

TEST_CASE("jensen approximation is below the inverted lower bound") {
  const OutageConstraint eps(0.05);
  for (const FadingModel& f : {FadingModel::rayleigh(), FadingModel::nakagami(2.0), FadingModel::nakagami(4.0)}) {
    const double approx = tc_approx(eps, kRef, f, Policy::plain());
    // bisection on the fading lower bound
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (outage_lower_fading(kRef.with_lambda(mid), f, Policy::plain()) < eps.value() ? lo : hi) = mid;
    }
    CHECK(approx <= lo * eps.success() * (1.0 + 1e-12));
    CHECK(fading_moment_product(4.0, f, Policy::plain()) > 1.0);
  }
  CHECK(fading_moment_product(4.0, FadingModel::none(), Policy::plain()) == doctest::Approx(1.0));
}

TEST_CASE("fpc gain matches the gamma-function ratio and peaks at one half") {
  const FadingModel rayleigh = FadingModel::rayleigh();
  for (double alpha : {2.5, 3.0, 4.0}) {
    const double d = 2.0 / alpha;
    const double want = boost::math::tgamma(1.0 - d) / std::pow(boost::math::tgamma(1.0 - d / 2.0), 2);
    CHECK(fpc_gain(alpha, rayleigh, 0.5) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(fpc_gain(2.5, rayleigh, 0.5) == doctest::Approx(2.07).epsilon(0.01 / 2.07));
  CHECK(fpc_gain(4.0, rayleigh, 0.5) == doctest::Approx(1.18).epsilon(0.01 / 1.18));
  double best = 0.0;
  double best_gamma = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double g = i / 20.0;
    const double tc = tc_approx(OutageConstraint(0.1), kRef, rayleigh, Policy::fpc(g));
    if (tc > best) {
      best = tc;
      best_gamma = g;
    }
  }
  CHECK(best_gamma == doctest::Approx(0.5));
  // inversion matches its closed form as gamma -> 1
  CHECK(tc_approx(OutageConstraint(0.1), kRef, rayleigh, Policy::inversion()) ==
        doctest::Approx(tc_approx(OutageConstraint(0.1), kRef, rayleigh, Policy::fpc(1.0))).epsilon(1e-10));
}

TEST_CASE("threshold gain matches a quadrature oracle") {
  const FadingModel rayleigh = FadingModel::rayleigh();
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double alpha : {2.5, 3.0, 4.0}) {
    const double d = 2.0 / alpha;
    for (double t : {0.5, 1.0, 2.0}) {
      const double conditional =
          integrator.integrate([&](double u) { return std::pow(t + u, -d) * std::exp(-u); });
      const double want = boost::math::tgamma(1.0 - d) / conditional;
      CHECK(std::abs(threshold_gain(alpha, rayleigh, t) / want - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("optimal beta maximizes the area spectral efficiency") {
  for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
    const auto negative = [&](double log_beta) {
      const double beta = std::exp(log_beta);
      return -std::log2(1.0 + beta) * std::pow(beta, -2.0 / alpha);
    };
    const auto [x, fx] = boost::math::tools::brent_find_minima(negative, -10.0, 10.0, 50);
    (void)fx;
    CHECK(std::abs(optimal_beta(alpha) / std::exp(x) - 1.0) < 1e-6);
  }
  CHECK_THROWS_AS(optimal_beta(2.0), DomainError);
}

TEST_CASE("optimal epsilon is interior and increasing in alpha") {
  double prev = 0.0;
  for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
    const ZQuantileFn q = [alpha](double e) { return z_ccdf_inverse(alpha, e); };
    const double e = optimal_epsilon(alpha, q).value();
    CHECK(e > prev);
    prev = e;
    CHECK(epsilon_objective(alpha, e, q) > epsilon_objective(alpha, 0.01, q));
    CHECK(epsilon_objective(alpha, e, q) > epsilon_objective(alpha, 0.9, q));
  }
  const double closed = optimal_epsilon(4.0, z4_ccdf_inverse).value();
  CHECK(closed == doctest::Approx(0.5478).epsilon(1e-3));
  CHECK(area_spectral_efficiency(2.0, 3.0) == doctest::Approx(4.0));
}

TEST_CASE("disk interference hazard is 2/alpha over v") {
  for (double alpha : {2.5, 4.0, 7.0}) {
    const double d = 3.0;
    for (double v : log_grid(std::pow(d, -alpha), 1e3, 25)) {
      CHECK(v * interference_hazard_disk(v, d, alpha) == doctest::Approx(2.0 / alpha).epsilon(1e-12));
    }
  }
}

}  // TEST_SUITE
