#include "tcap/mimo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "parallel.hpp"
#include "tcap/analytic.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"

namespace tcap {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

constexpr double kRidge = 1e-9;

struct Link {
  CVec receive;        // r_0, any scale
  double signal = 0;   // |r_0^H H_0 t_0|^2
};

// Everything a trial needs about the interferers in the window.
struct Interferers {
  std::vector<double> weight;  // T_i^(-alpha/2)
  CMat channel;                // column i is H_i t_i
};

CMat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, CounterRng& rng) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  }
  return m;
}

// Effective signal vector H_0 t_0 for receive-side processing.
CVec effective_signal(const CMat& h0) {
  if (h0.cols() == 1) return h0.col(0);
  Eigen::JacobiSVD<CMat> svd(h0, Eigen::ComputeThinV);
  return h0 * svd.matrixV().col(0);
}

Link matched(const CVec& h) { return {h, h.squaredNorm() * h.squaredNorm()}; }

Link beamform(const CMat& h0) {
  Eigen::JacobiSVD<CMat> svd(h0, Eigen::ComputeThinU);
  const double s = svd.singularValues()(0);
  return {svd.matrixU().col(0), s * s};
}

Link cancel(const CMat& h0, const Interferers& in, int k) {
  const CVec h = effective_signal(h0);
  const auto count = static_cast<Eigen::Index>(in.weight.size());
  const Eigen::Index kk = std::min<Eigen::Index>(k, count);
  if (kk == 0) return matched(h);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> strength(order.size());
  for (Eigen::Index i = 0; i < count; ++i) {
    strength[static_cast<std::size_t>(i)] =
        in.weight[static_cast<std::size_t>(i)] * in.channel.col(i).squaredNorm();
  }
  std::partial_sort(order.begin(), order.begin() + kk, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      const double sa = strength[static_cast<std::size_t>(a)];
                      const double sb = strength[static_cast<std::size_t>(b)];
                      return sa != sb ? sa > sb : a < b;
                    });
  CMat nulled(in.channel.rows(), kk);
  for (Eigen::Index j = 0; j < kk; ++j) nulled.col(j) = in.channel.col(order[j]);

  Eigen::HouseholderQR<CMat> qr(nulled);
  const CMat basis = qr.householderQ() * CMat::Identity(nulled.rows(), kk);
  const CVec projected = h - basis * (basis.adjoint() * h);
  const double gain = projected.squaredNorm();
  return {projected, gain * gain};  // |p^H h|^2 = |p|^4 for p the projection of h
}

Link mmse(const CMat& h0, const Interferers& in, bool inverse_sqrt) {
  const CVec h = h0.col(0);
  const Eigen::Index nr = h.size();
  const Eigen::Map<const Eigen::VectorXd> w(in.weight.data(),
                                             static_cast<Eigen::Index>(in.weight.size()));
  const CMat scaled = in.channel * w.cwiseSqrt().asDiagonal();
  CMat cov = scaled * scaled.adjoint();
  const double scale = cov.trace().real() / static_cast<double>(nr);
  cov.diagonal().array() += kRidge * (scale > 0.0 ? scale : 1.0);

  CVec filter;
  if (inverse_sqrt) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(cov);
    const Eigen::VectorXd root = eig.eigenvalues().cwiseSqrt().cwiseInverse();
    filter = eig.eigenvectors() * (root.asDiagonal() * (eig.eigenvectors().adjoint() * h));
  } else {
    filter = cov.llt().solve(h);
  }
  return {filter, std::norm(filter.dot(h))};
}

Link design(const MimoConfig& mimo, const CMat& h0, const Interferers& in) {
  switch (mimo.strategy.kind()) {
    case MimoStrategy::Kind::Beamform:
      return beamform(h0);
    case MimoStrategy::Kind::Mrc:
      return matched(h0.col(0));
    case MimoStrategy::Kind::Mrt: {
      // nr = 1: t_0 = H_0^H / |H_0| gives the received gain |H_0|^2
      return {CVec::Constant(1, 1.0), h0.row(0).squaredNorm()};
    }
    case MimoStrategy::Kind::CancelThenDiversity:
      return cancel(h0, in, mimo.strategy.cancelled());
    case MimoStrategy::Kind::Mmse:
      return mmse(h0, in, mimo.strategy.inverse_sqrt());
  }
  return beamform(h0);
}

}  // namespace

MimoStrategy MimoStrategy::cancel_then_diversity(int k) {
  if (k < 0) throw ConfigError("strategy", "cancellation count k must be >= 0");
  return MimoStrategy(Kind::CancelThenDiversity, k, false);
}

MimoStrategy MimoStrategy::parse(std::string_view spec) {
  if (spec == "beamform") return beamform();
  if (spec == "mrc") return mrc();
  if (spec == "mrt") return mrt();
  if (spec == "mmse") return mmse(false);
  if (spec == "mmse-sqrt") return mmse(true);
  constexpr std::string_view prefix = "cancel:k=";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string_view digits = spec.substr(prefix.size());
    int k = 0;
    const auto result = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (result.ec == std::errc() && result.ptr == digits.data() + digits.size()) {
      return cancel_then_diversity(k);
    }
  }
  throw ConfigError("strategy", "unknown strategy '" + std::string(spec) +
                                    "' (expected beamform, mrc, mrt, cancel:k=<k>, mmse, mmse-sqrt)");
}

std::string MimoStrategy::describe() const {
  switch (kind_) {
    case Kind::Beamform:
      return "beamform";
    case Kind::Mrc:
      return "mrc";
    case Kind::Mrt:
      return "mrt";
    case Kind::CancelThenDiversity:
      return "cancel:k=" + std::to_string(k_);
    case Kind::Mmse:
      return inverse_sqrt_ ? "mmse-sqrt" : "mmse";
  }
  return "beamform";
}

void validate(const MimoConfig& mimo) {
  if (mimo.nt < 1) throw ConfigError("nt", "nt must be >= 1");
  if (mimo.nr < 1) throw ConfigError("nr", "nr must be >= 1");
  const std::string name = mimo.strategy.describe();
  switch (mimo.strategy.kind()) {
    case MimoStrategy::Kind::Beamform:
      break;
    case MimoStrategy::Kind::Mrc:
      if (mimo.nt != 1) throw ConfigError("nt", "mrc needs nt = 1, got " + std::to_string(mimo.nt));
      break;
    case MimoStrategy::Kind::Mrt:
      if (mimo.nr != 1) throw ConfigError("nr", "mrt needs nr = 1, got " + std::to_string(mimo.nr));
      break;
    case MimoStrategy::Kind::CancelThenDiversity:
      if (mimo.strategy.cancelled() > mimo.nr - 1) {
        throw ConfigError("strategy", name + " needs k <= nr - 1 = " + std::to_string(mimo.nr - 1));
      }
      break;
    case MimoStrategy::Kind::Mmse:
      if (mimo.nt != 1) throw ConfigError("nt", name + " needs nt = 1, got " + std::to_string(mimo.nt));
      break;
  }
}

std::vector<double> mimo_critical_intensities(const NetworkParams& params, const MimoConfig& mimo,
                                              const SimConfig& sim) {
  validate(params);
  validate(mimo);
  validate(sim);
  if (!(params.lambda > 0.0)) {
    throw DomainError("lambda", "the MIMO window needs a reference intensity > 0");
  }
  const double alpha = params.alpha;
  const double half = alpha / 2.0;
  const double radius = choose_window(params, sim.window_delta);
  const double t_max = params.lambda * std::numbers::pi * radius * radius;
  // mean interference beyond the window per unit |r_0|^2, in T_i^(-alpha/2) units
  const double tail = std::pow(t_max, 1.0 - half) / (half - 1.0);
  const double threshold = params.beta * std::pow(params.r, alpha);

  std::vector<double> critical(sim.trials);
  detail::parallel_ranges(sim.trials, sim.threads, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
    Interferers in;
    std::vector<std::complex<double>> flat;
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      CounterRng rng(sim.seed, trial);
      const CMat h0 = gaussian_matrix(mimo.nr, mimo.nt, rng);

      in.weight.clear();
      flat.clear();
      for (double arrival = rng.exponential(); arrival <= t_max; arrival += rng.exponential()) {
        in.weight.push_back(std::pow(arrival, -half));
        for (int a = 0; a < mimo.nr; ++a) flat.push_back(rng.complex_normal());
      }
      const auto count = static_cast<Eigen::Index>(in.weight.size());
      in.channel = Eigen::Map<const CMat>(flat.data(), mimo.nr, count);

      const Link link = design(mimo, h0, in);
      const CVec& r0 = link.receive;
      const Eigen::RowVectorXcd seen = r0.adjoint() * in.channel;
      double interference = tail * r0.squaredNorm();
      for (Eigen::Index i = 0; i < count; ++i) {
        interference += in.weight[static_cast<std::size_t>(i)] * std::norm(seen(i));
      }
      critical[trial] =
          std::pow(link.signal / (threshold * interference), 1.0 / half) / std::numbers::pi;
    }
  });
  return critical;
}

Estimate simulate_outage_mimo(const NetworkParams& params, const MimoConfig& mimo,
                              const SimConfig& sim) {
  validate(params);
  validate(sim);
  if (params.lambda == 0.0) {
    validate(mimo);
    return wilson_estimate(0, sim.trials, sim.ci_level, sim.seed);
  }
  const std::vector<double> critical = mimo_critical_intensities(params, mimo, sim);
  const auto events = static_cast<std::uint64_t>(
      std::count_if(critical.begin(), critical.end(), [&](double c) { return params.lambda > c; }));
  return wilson_estimate(events, sim.trials, sim.ci_level, sim.seed);
}

double tc_mimo(OutageConstraint eps, const NetworkParams& params, const MimoConfig& mimo,
               const SimConfig& sim, int passes) {
  validate(params);
  validate(mimo);
  if (passes < 1) throw DomainError("passes", "passes must be >= 1");
  double reference = params.lambda;
  if (!(reference > 0.0)) {
    reference = tc_exact_rayleigh(eps, params) / eps.success() * std::max(mimo.nt, mimo.nr);
  }
  double quantile = reference;
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<double> critical = mimo_critical_intensities(params.with_lambda(reference), mimo, sim);
    std::sort(critical.begin(), critical.end());
    const double position = eps.value() * static_cast<double>(critical.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(position));
    const std::size_t hi = std::min(lo + 1, critical.size() - 1);
    quantile = critical[lo] + (position - static_cast<double>(lo)) * (critical[hi] - critical[lo]);
    reference = quantile;
  }
  return quantile * eps.success();
}

double scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw DegenerateInput("points", "scaling fit needs >= 3 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, tc] : points) {
    if (!(n > 0.0) || !(tc > 0.0)) {
      throw DegenerateInput("points", "scaling fit needs positive values, got (" +
                                          format_double(n) + ", " + format_double(tc) + ")");
    }
    sx += std::log(n);
    sy += std::log(tc);
  }
  const double m = static_cast<double>(points.size());
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, tc] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(tc) - my);
  }
  if (sxx == 0.0) throw DegenerateInput("points", "scaling fit needs distinct n");
  return sxy / sxx;
}

}  // namespace tcap
