#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "cli.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"

namespace tcap::cli {

namespace {

std::vector<double> grid(double from, double to, int steps, bool log_scale) {
  std::vector<double> points(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double w = static_cast<double>(i) / (steps - 1);
    points[static_cast<std::size_t>(i)] =
        log_scale ? std::exp(std::log(from) + w * (std::log(to) - std::log(from)))
                  : from + w * (to - from);
  }
  points.front() = from;
  points.back() = to;
  return points;
}

int as_count(double v, const std::string& name) {
  if (v != std::round(v) || v < 1) {
    throw DomainError(name, name + " must be a positive integer, got " + format_double(v));
  }
  return static_cast<int>(v);
}

void set_variable(Settings& s, const std::string& var, double v) {
  if (var == "lambda") s.lambda = v;
  else if (var == "alpha") s.alpha = v;
  else if (var == "beta") s.beta = v;
  else if (var == "r") s.r = v;
  else if (var == "eps") s.eps = v;
  else if (var == "gamma") s.policy = "fpc:gamma=" + format_double(v);
  else if (var == "t") s.policy = "threshold:t=" + format_double(v);
  else if (var == "n_antennas") {
    s.nr = as_count(v, "n_antennas");
    if (s.strategy == "beamform") s.nt = s.nr;
  } else {
    throw UsageError("--var: unknown sweep variable '" + var +
                     "' (lambda, alpha, beta, r, eps, gamma, t, n_antennas)");
  }
}

struct Column {
  Quantity quantity;
  std::string method;
  std::string name;
  bool interval;
};

std::vector<Column> parse_methods(const std::string& list) {
  std::vector<Column> columns;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    Column c{Quantity::Outage, item, item, false};
    if (item.rfind("tc-", 0) == 0) {
      c.quantity = Quantity::Capacity;
      c.method = item.substr(3);
    }
    const auto& valid = c.quantity == Quantity::Outage ? outage_methods() : capacity_methods();
    if (std::find(valid.begin(), valid.end(), c.method) == valid.end()) {
      throw UsageError("--methods: unknown method '" + item + "'");
    }
    c.interval = c.quantity == Quantity::Outage && (c.method == "mc" || c.method == "mimo");
    columns.push_back(c);
  }
  if (columns.empty()) throw UsageError("--methods: at least one method is required");
  return columns;
}

// One row per grid value: the variable, each method's value (plus interval
// columns for simulations) and a note listing per-point failures.
Table evaluate_grid(const Settings& base, const std::string& var, const std::vector<double>& values,
                    const std::vector<Column>& columns) {
  Table table;
  table.header.push_back(var);
  for (const auto& c : columns) {
    table.header.push_back(c.name);
    if (c.interval) {
      table.header.push_back(c.name + "_ci_lo");
      table.header.push_back(c.name + "_ci_hi");
    }
  }
  table.header.push_back("note");

  for (const double v : values) {
    Settings s = base;
    set_variable(s, var, v);
    std::vector<std::string> row{format_scientific(v)};
    std::string note;
    for (const auto& c : columns) {
      try {
        const Value result = evaluate(c.quantity, c.method, s);
        row.push_back(format_scientific(result.value));
        if (c.interval) {
          row.push_back(format_scientific(result.ci_lo.value_or(NAN)));
          row.push_back(format_scientific(result.ci_hi.value_or(NAN)));
        }
      } catch (const Error& e) {
        row.emplace_back();
        if (c.interval) {
          row.emplace_back();
          row.emplace_back();
        }
        if (!note.empty()) note += "; ";
        note += c.name + ": " + e.what();
      }
    }
    row.push_back(note);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch == '\n' ? ' ' : ch;
  }
  return quoted + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const nlohmann::ordered_json& config, const Table& table) {
  out << "# config: " << config.dump() << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.header[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const nlohmann::ordered_json& config,
                    const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(out, config, table);
  if (!out) throw IoError("failed writing " + path.string());
}

Table sweep_table(const Settings& s) {
  if (s.steps < 2) throw UsageError("--steps: a sweep needs at least 2 steps");
  if (!(s.from < s.to)) throw UsageError("--from/--to: need from < to");
  if (s.scale != "linear" && s.scale != "log") throw UsageError("--scale: expected linear or log");
  const bool log_scale = s.scale == "log";
  if (log_scale && !(s.from > 0.0)) throw UsageError("--scale: log sweeps need positive endpoints");
  return evaluate_grid(s, s.var, grid(s.from, s.to, s.steps, log_scale), parse_methods(s.methods));
}

Table figure_b_outage(const Settings& s) {
  return evaluate_grid(s, "lambda", grid(1e-6, 3e-3, 40, true), parse_methods("lower,exact,chernoff"));
}

Table figure_b_capacity(const Settings& s) {
  return evaluate_grid(s, "eps", grid(0.005, 0.5, 40, true),
                       parse_methods("tc-upper,tc-exact,tc-chernoff"));
}

Table figure_opt(const Settings& s) {
  if (!s.method.empty() && s.method != "quadrature" && s.method != "table") {
    throw UsageError("--method: figure opt accepts quadrature or table");
  }
  const bool sampled = s.method == "table";
  Table table;
  table.header = {"alpha", "beta_star", "eps_star", "eps_objective"};
  for (const double alpha : grid(2.5, 6.0, 15, false)) {
    ZQuantileFn quantile = [alpha](double e) { return z_ccdf_inverse(alpha, e); };
    std::optional<ZQuantileTable> z;
    if (sampled) {
      // one seed for every alpha: the same arrivals feed each table
      z.emplace(z_quantile_table(alpha, s.samples, s.seed, s.n_terms, s.threads));
      quantile = [&z](double e) { return (*z)(e); };
    }
    const OutageConstraint eps_star = optimal_epsilon(alpha, quantile);
    table.rows.push_back({format_scientific(alpha), format_scientific(optimal_beta(alpha)),
                          format_scientific(eps_star.value()),
                          format_scientific(epsilon_objective(alpha, eps_star.value(), quantile))});
  }
  return table;
}

Table figure_diversity(const Settings& s) {
  Table table;
  table.header = {"n", "beamform", "mrc", "cancel_diversity", "mmse"};
  const OutageConstraint eps(s.eps);
  const NetworkParams params = s.params().with_lambda(0.0);
  const SimConfig sim = s.sim();
  for (const int n : {1, 2, 4, 8, 16}) {
    const double beamform = tc_mimo(eps, params, {n, n, MimoStrategy::beamform()}, sim);
    const double mrc = tc_mimo(eps, params, {1, n, MimoStrategy::mrc()}, sim);
    const double cancel =
        tc_mimo(eps, params, {1, n, MimoStrategy::cancel_then_diversity(n / 2)}, sim);
    const double mmse = tc_mimo(eps, params, {1, n, MimoStrategy::mmse()}, sim);
    table.rows.push_back({std::to_string(n), format_scientific(beamform), format_scientific(mrc),
                          format_scientific(cancel), format_scientific(mmse)});
  }
  return table;
}

}  // namespace tcap::cli
