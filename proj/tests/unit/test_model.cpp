#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/fading.hpp"
#include "tcap/model.hpp"
#include "tcap/rng.hpp"

using namespace tcap;

TEST_SUITE("model") {

TEST_CASE("network parameters are validated field by field") {
  CHECK_NOTHROW(validate(NetworkParams{1e-4, 4.0, 3.0, 10.0}));
  const auto param_of = [](const NetworkParams& p) {
    try {
      validate(p);
    } catch (const DomainError& e) {
      return e.param();
    }
    return std::string();
  };
  CHECK(param_of({-1.0, 4.0, 1.0, 1.0}) == "lambda");
  CHECK(param_of({0.0, 2.0, 1.0, 1.0}) == "alpha");
  CHECK(param_of({0.0, 4.0, 0.0, 1.0}) == "beta");
  CHECK(param_of({0.0, 4.0, 1.0, -2.0}) == "r");
  CHECK(param_of({NAN, 4.0, 1.0, 1.0}) == "lambda");
}

TEST_CASE("outage constraint lives in the open unit interval") {
  CHECK(OutageConstraint(0.1).success() == doctest::Approx(0.9));
  CHECK_THROWS_AS(OutageConstraint(0.0), DomainError);
  CHECK_THROWS_AS(OutageConstraint(1.0), DomainError);
  CHECK_THROWS_AS(OutageConstraint(NAN), DomainError);
}

TEST_CASE("dominant disk area") {
  const NetworkParams p{1e-4, 4.0, 3.0, 10.0};
  CHECK(dominant_disk_area(p) == doctest::Approx(std::numbers::pi * 100.0 * std::sqrt(3.0)));
}

TEST_CASE("rayleigh and nakagami moments match gamma function oracles") {
  const FadingModel rayleigh = FadingModel::rayleigh();
  for (double p : {-0.9, -0.5, 0.5, 1.0, 2.0}) {
    CHECK(rayleigh.moment(p) == doctest::Approx(boost::math::tgamma(1.0 + p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rayleigh.moment(-1.0), DivergentMoment);

  const double m = 3.0;
  const FadingModel nakagami = FadingModel::nakagami(m);
  for (double p : {-2.5, -0.5, 0.5, 1.0, 3.0}) {
    const double want = boost::math::tgamma(m + p) / boost::math::tgamma(m) / std::pow(m, p);
    CHECK(nakagami.moment(p) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK_THROWS_AS(nakagami.moment(-3.0), DivergentMoment);
  CHECK(FadingModel::none().moment(-5.0) == 1.0);
}

TEST_CASE("conditional moments and tails of rayleigh fading") {
  const FadingModel rayleigh = FadingModel::rayleigh();
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(rayleigh.tail_probability(t) == doctest::Approx(std::exp(-t)).epsilon(1e-14));
    const double p = -0.5;
    const double want =
        integrator.integrate([&](double u) { return std::pow(t + u, p) * std::exp(-(t + u)); }) /
        std::exp(-t);
    CHECK(rayleigh.truncated_moment(p, t) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("fading specs parse and round trip") {
  CHECK(FadingModel::parse("none").kind() == FadingModel::Kind::None);
  CHECK(FadingModel::parse("rayleigh").kind() == FadingModel::Kind::Rayleigh);
  const FadingModel n = FadingModel::parse("nakagami:m=4");
  CHECK(n.kind() == FadingModel::Kind::Nakagami);
  CHECK(n.shape() == 4.0);
  CHECK(FadingModel::parse(n.describe()).shape() == 4.0);
  CHECK(FadingModel::parse("nakagami:m=2,mean=5").moment(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(FadingModel::parse("nakagami:m=0.2"), DomainError);
  CHECK_THROWS_AS(FadingModel::parse("lognormal"), DomainError);
  CHECK_THROWS_AS(FadingModel::parse("table:/nonexistent/file.csv"), IoError);
}

TEST_CASE("tabulated fading from a csv approximates the exponential law") {
  const auto path = std::filesystem::temp_directory_path() / "tcap_exp_table.csv";
  {
    std::ofstream out(path);
    out << "# exponential density\nvalue,density\n";
    for (int i = 0; i <= 4000; ++i) {
      const double h = std::exp(-16.0 + i * (16.0 + std::log(60.0)) / 4000.0);
      out << h << ',' << std::exp(-h) << '\n';
    }
  }
  const FadingModel table = FadingModel::parse("table:" + path.string());
  CHECK(table.kind() == FadingModel::Kind::Tabulated);
  CHECK(table.moment(1.0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(table.moment(-0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-3));
  CHECK(table.tail_probability(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(FadingModel::tabulated({1.0, 0.5}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(FadingModel::tabulated({1.0}, {1.0}), DomainError);
}

TEST_CASE("fading samples follow their law") {
  const FadingModel rayleigh = FadingModel::rayleigh();
  const FadingModel nakagami = FadingModel::nakagami(4.0);
  CounterRng rng(5, 0);
  const int n = 200000;
  double s1 = 0.0;
  double s2 = 0.0;
  double sq = 0.0;
  double st = 0.0;
  for (int i = 0; i < n; ++i) {
    s1 += rayleigh.sample(rng);
    const double h = nakagami.sample(rng);
    s2 += h;
    sq += h * h;
    const double ht = rayleigh.sample_at_least(2.0, rng);
    REQUIRE(ht >= 2.0);
    st += ht;
  }
  CHECK(s1 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sq / n - (s2 / n) * (s2 / n) == doctest::Approx(0.25).epsilon(0.03));
  CHECK(st / n == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("policies parse with their parameters") {
  CHECK(Policy::parse("plain").kind() == Policy::Kind::Plain);
  CHECK(Policy::parse("threshold:t=1.5").threshold_level() == 1.5);
  CHECK(Policy::parse("fpc:gamma=0.5").power_exponent() == 0.5);
  CHECK(Policy::parse("inversion").power_exponent() == 1.0);
  CHECK_THROWS_AS(Policy::parse("fpc:gamma=2"), DomainError);
  CHECK_THROWS_AS(Policy::parse("threshold"), DomainError);
  CHECK_THROWS_AS(Policy::parse("greedy"), DomainError);
}

}  // TEST_SUITE
