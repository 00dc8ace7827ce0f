#include "tcap/fading.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "tcap/errors.hpp"
#include "tcap/format.hpp"
#include "tcap/numerics.hpp"

namespace tcap {

// Density of ln H, tabulated on nodes u_j = ln x_j and linear in between.
// Trapezoidal sums over these nodes are exact for that piecewise-linear law.
struct FadingModel::Table {
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> g;
  std::vector<double> cumulative;  // mass below node j

  // Node index j with u[j] <= s < u[j + 1]; s must lie inside the grid.
  std::size_t cell(double s) const {
    const auto it = std::upper_bound(u.begin(), u.end(), s);
    const auto j = static_cast<std::size_t>(it - u.begin());
    return std::min(j == 0 ? 0 : j - 1, u.size() - 2);
  }

  double g_at(double s, std::size_t j) const {
    const double w = (s - u[j]) / (u[j + 1] - u[j]);
    return g[j] + w * (g[j + 1] - g[j]);
  }

  // int_{ln t}^{u_max} F(e^s) g(s) ds by the trapezoid rule.
  template <typename F>
  double tail_integral(F&& weight, double t) const {
    const double s = std::log(t);
    std::size_t first = 0;
    double partial = 0.0;
    if (s > u.front()) {
      const std::size_t j = cell(s);
      const double gs = g_at(s, j);
      partial = 0.5 * (weight(t) * gs + weight(x[j + 1]) * g[j + 1]) * (u[j + 1] - s);
      first = j + 1;
    }
    double total = partial;
    for (std::size_t j = first; j + 1 < u.size(); ++j) {
      total += 0.5 * (weight(x[j]) * g[j] + weight(x[j + 1]) * g[j + 1]) * (u[j + 1] - u[j]);
    }
    return total;
  }

  double tail_mass(double t) const {
    if (t <= x.front()) return 1.0;
    if (t >= x.back()) return 0.0;
    const double s = std::log(t);
    const std::size_t j = cell(s);
    const double gs = g_at(s, j);
    return 0.5 * (gs + g[j + 1]) * (u[j + 1] - s) + (1.0 - cumulative[j + 1]);
  }

  // Inverse CDF at mass m in [0, 1].
  double quantile(double m) const {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), m);
    std::size_t j = static_cast<std::size_t>(it - cumulative.begin());
    j = std::min(j == 0 ? 0 : j - 1, u.size() - 2);
    const double width = u[j + 1] - u[j];
    const double local = std::max(0.0, m - cumulative[j]);
    const double slope = (g[j + 1] - g[j]) / width;
    double s;
    if (std::abs(slope) * width < 1e-12 * std::max(g[j], 1e-300)) {
      s = g[j] > 0 ? local / g[j] : 0.0;
    } else {
      const double disc = std::max(0.0, g[j] * g[j] + 2.0 * slope * local);
      s = (std::sqrt(disc) - g[j]) / slope;
    }
    return std::exp(u[j] + std::clamp(s, 0.0, width));
  }
};

namespace {

numerics::Tolerance quadrature_tolerance() { return {1e-14, 1e-11, 4000}; }

double nakagami_log_density(double m, double h) {
  return m * std::log(m) - numerics::log_gamma(m) + (m - 1.0) * std::log(h) - m * h;
}

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(begin, end - begin + 1));
}

bool parse_number(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto result = std::from_chars(first, last, out);
  return result.ec == std::errc() && result.ptr == last;
}

void check_moment_order(double p) {
  if (std::isnan(p)) throw DomainError("p", "moment order must be a number");
}

}  // namespace

FadingModel FadingModel::none() { return FadingModel(Kind::None, 0.0, nullptr, {}); }

FadingModel FadingModel::rayleigh() { return FadingModel(Kind::Rayleigh, 1.0, nullptr, {}); }

FadingModel FadingModel::nakagami(double m, double mean) {
  if (!(m >= 0.5) || std::isinf(m)) {
    throw DomainError("m", "Nakagami shape must satisfy m >= 0.5, got " + format_double(m));
  }
  if (!(mean > 0.0) || std::isinf(mean)) {
    throw DomainError("mean", "Nakagami mean must be > 0, got " + format_double(mean));
  }
  return FadingModel(Kind::Nakagami, m, nullptr, {});
}

FadingModel FadingModel::tabulated(std::vector<double> values, std::vector<double> density) {
  if (values.size() != density.size()) {
    throw DomainError("table", "value and density columns differ in length");
  }
  if (values.size() < 2) throw DomainError("table", "a fading table needs at least two rows");
  auto table = std::make_shared<Table>();
  table->x = std::move(values);
  table->u.resize(table->x.size());
  table->g.resize(table->x.size());
  for (std::size_t j = 0; j < table->x.size(); ++j) {
    const double x = table->x[j];
    if (!(x > 0.0) || std::isinf(x)) {
      throw DomainError("table", "fading table values must be positive and finite");
    }
    if (j > 0 && !(x > table->x[j - 1])) {
      throw DomainError("table", "fading table values must be strictly increasing");
    }
    if (!(density[j] >= 0.0) || std::isinf(density[j])) {
      throw DomainError("table", "fading table densities must be finite and non-negative");
    }
    table->u[j] = std::log(x);
    table->g[j] = density[j] * x;
  }
  table->cumulative.assign(table->x.size(), 0.0);
  for (std::size_t j = 1; j < table->x.size(); ++j) {
    table->cumulative[j] = table->cumulative[j - 1] +
                           0.5 * (table->g[j - 1] + table->g[j]) * (table->u[j] - table->u[j - 1]);
  }
  const double mass = table->cumulative.back();
  if (!(mass > 0.0)) throw DomainError("table", "fading table has zero mass");
  for (auto& g : table->g) g /= mass;
  for (auto& c : table->cumulative) c /= mass;
  table->cumulative.back() = 1.0;
  return FadingModel(Kind::Tabulated, 0.0, std::move(table), {});
}

FadingModel FadingModel::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fading table " + path.string());
  std::vector<double> values;
  std::vector<double> density;
  std::string line;
  std::size_t line_no = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto comma = text.find(',');
    double v = 0.0;
    double d = 0.0;
    const bool ok = comma != std::string::npos && parse_number(trim(text.substr(0, comma)), v) &&
                    parse_number(trim(text.substr(comma + 1)), d);
    if (!ok) {
      if (!header_skipped && values.empty()) {
        header_skipped = true;
        continue;
      }
      throw DomainError("table", path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'value,density'");
    }
    values.push_back(v);
    density.push_back(d);
  }
  FadingModel model = tabulated(std::move(values), std::move(density));
  model.source_ = path.string();
  return model;
}

FadingModel FadingModel::parse(std::string_view spec) {
  const std::string text = trim(spec);
  if (text == "none") return none();
  if (text == "rayleigh") return rayleigh();
  if (text.rfind("table:", 0) == 0) return from_csv(text.substr(6));
  if (text.rfind("nakagami", 0) == 0) {
    double m = std::numeric_limits<double>::quiet_NaN();
    double mean = 1.0;
    std::string rest = text.substr(8);
    if (!rest.empty() && rest.front() == ':') rest.erase(0, 1);
    std::stringstream fields(rest);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto eq = field.find('=');
      const std::string key = trim(field.substr(0, eq));
      double value = 0.0;
      if (eq == std::string::npos || !parse_number(trim(field.substr(eq + 1)), value)) {
        throw DomainError("fading", "malformed Nakagami field '" + field + "'");
      }
      if (key == "m") {
        m = value;
      } else if (key == "mean") {
        mean = value;
      } else {
        throw DomainError("fading", "unknown Nakagami field '" + key + "'");
      }
    }
    if (std::isnan(m)) throw DomainError("fading", "Nakagami fading needs m, e.g. nakagami:m=4");
    return nakagami(m, mean);
  }
  throw DomainError("fading", "unknown fading model '" + text +
                                  "' (expected none, rayleigh, nakagami:m=<m>, table:<path>)");
}

double FadingModel::shape() const noexcept {
  switch (kind_) {
    case Kind::None:
      return std::numeric_limits<double>::infinity();
    case Kind::Rayleigh:
      return 1.0;
    case Kind::Nakagami:
      return m_;
    case Kind::Tabulated:
      return 0.0;
  }
  return 0.0;
}

double FadingModel::moment(double p) const {
  check_moment_order(p);
  switch (kind_) {
    case Kind::None:
      return 1.0;
    case Kind::Rayleigh:
      if (!(p > -1.0)) {
        throw DivergentMoment("p", "Rayleigh moment E[H^p] diverges for p <= -1, got p=" +
                                       format_double(p));
      }
      return std::tgamma(1.0 + p);
    case Kind::Nakagami:
      if (!(p > -m_)) {
        throw DivergentMoment("p", "Nakagami moment E[H^p] diverges for p <= -m, got p=" +
                                       format_double(p));
      }
      return std::exp(numerics::log_gamma(m_ + p) - numerics::log_gamma(m_) - p * std::log(m_));
    case Kind::Tabulated:
      return table_->tail_integral([p](double x) { return std::pow(x, p); }, table_->x.front());
  }
  return 0.0;
}

double FadingModel::tail_probability(double t) const {
  if (!(t >= 0.0)) throw DomainError("t", "threshold must be >= 0, got " + format_double(t));
  switch (kind_) {
    case Kind::None:
      return t <= 1.0 ? 1.0 : 0.0;
    case Kind::Rayleigh:
      return std::exp(-t);
    case Kind::Nakagami:
      if (t == 0.0) return 1.0;
      return std::exp(numerics::log_upper_incomplete_gamma(m_, m_ * t) -
                      numerics::log_gamma(m_));
    case Kind::Tabulated:
      return table_->tail_mass(t);
  }
  return 0.0;
}

double FadingModel::truncated_moment(double p, double t) const {
  check_moment_order(p);
  if (!(t >= 0.0)) throw DomainError("t", "threshold must be >= 0, got " + format_double(t));
  if (t == 0.0) return moment(p);
  if (!(tail_probability(t) > 0.0)) {
    throw DomainError("t", "P(H >= t) = 0 for t=" + format_double(t));
  }
  switch (kind_) {
    case Kind::None:
      return 1.0;
    case Kind::Rayleigh:
      // e^t Gamma(1 + p, t)
      return std::exp(t + numerics::log_upper_incomplete_gamma(1.0 + p, t));
    case Kind::Nakagami: {
      const double mt = m_ * t;
      return std::exp(numerics::log_upper_incomplete_gamma(m_ + p, mt) -
                      numerics::log_upper_incomplete_gamma(m_, mt) - p * std::log(m_));
    }
    case Kind::Tabulated:
      return table_->tail_integral([p](double x) { return std::pow(x, p); }, t) /
             table_->tail_mass(t);
  }
  return 0.0;
}

double FadingModel::density(double h) const {
  if (!(h > 0.0)) return 0.0;
  switch (kind_) {
    case Kind::None:
      return 0.0;
    case Kind::Rayleigh:
      return std::exp(-h);
    case Kind::Nakagami:
      return std::exp(nakagami_log_density(m_, h));
    case Kind::Tabulated: {
      if (h < table_->x.front() || h > table_->x.back()) return 0.0;
      const double s = std::log(h);
      return table_->g_at(s, table_->cell(s)) / h;
    }
  }
  return 0.0;
}

double FadingModel::expect(const std::function<double(double)>& g) const {
  return expect_given_at_least(g, 0.0);
}

double FadingModel::expect_given_at_least(const std::function<double(double)>& g,
                                          double t) const {
  const double mass = tail_probability(t);
  if (!(mass > 0.0)) throw DomainError("t", "P(H >= t) = 0 for t=" + format_double(t));
  switch (kind_) {
    case Kind::None:
      return g(1.0);
    case Kind::Rayleigh:
    case Kind::Nakagami: {
      const auto integrand = [&](double h) {
        const double f = density(h);
        return f == 0.0 ? 0.0 : g(h) * f;
      };
      return numerics::integrate_tail(integrand, t, quadrature_tolerance()) / mass;
    }
    case Kind::Tabulated:
      return table_->tail_integral(g, std::max(t, table_->x.front())) / mass;
  }
  return 0.0;
}

double FadingModel::sample(CounterRng& rng) const {
  switch (kind_) {
    case Kind::None:
      return 1.0;
    case Kind::Rayleigh:
      return rng.exponential();
    case Kind::Nakagami:
      return std::gamma_distribution<double>(m_, 1.0 / m_)(rng);
    case Kind::Tabulated:
      return table_->quantile(rng.uniform());
  }
  return 1.0;
}

double FadingModel::sample_at_least(double t, CounterRng& rng) const {
  if (t == 0.0) return sample(rng);
  const double mass = tail_probability(t);
  if (!(mass > 0.0)) throw DomainError("t", "P(H >= t) = 0 for t=" + format_double(t));
  switch (kind_) {
    case Kind::None:
      return 1.0;
    case Kind::Rayleigh:
      return t + rng.exponential();  // memoryless
    case Kind::Nakagami: {
      if (mass > 0.25 || (m_ >= 1.0 && t <= (m_ - 1.0) / m_)) {
        for (;;) {
          const double h = sample(rng);
          if (h >= t) return h;
        }
      }
      // Shifted-exponential proposal on [t, inf); the acceptance ratio
      // below is bounded by one for either side of m = 1.
      const double rate = m_ >= 1.0 ? m_ - (m_ - 1.0) / t : m_;
      for (;;) {
        const double y = t + rng.exponential() / rate;
        const double log_accept = m_ >= 1.0
                                      ? (m_ - 1.0) * (std::log(y / t) - (y - t) / t)
                                      : (m_ - 1.0) * std::log(y / t);
        if (std::log(rng.uniform()) <= log_accept) return y;
      }
    }
    case Kind::Tabulated: {
      const double below = 1.0 - mass;
      return std::max(t, table_->quantile(below + rng.uniform() * mass));
    }
  }
  return t;
}

std::string FadingModel::describe() const {
  switch (kind_) {
    case Kind::None:
      return "none";
    case Kind::Rayleigh:
      return "rayleigh";
    case Kind::Nakagami:
      return "nakagami:m=" + format_double(m_);
    case Kind::Tabulated:
      if (!source_.empty()) return "table:" + source_;
      return "table:<" + std::to_string(table_->x.size()) + " rows>";
  }
  return "none";
}

}  // namespace tcap
