#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "cli.hpp"
#include "tcap/errors.hpp"
#include "tcap/format.hpp"

namespace tcap::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kDomain = 3;
constexpr int kNumeric = 4;
constexpr int kIo = 5;

std::string flag_for(const std::string& param) {
  static const std::map<std::string, std::string> aliases = {
      {"m", "fading"}, {"mean", "fading"}, {"table", "fading"}, {"p", "fading"},
      {"t", "policy"}, {"gamma", "policy"}, {"points", "n_antennas"},
      {"n-samples", "samples"}, {"v", "method"}, {"w", "method"}, {"d", "method"},
  };
  const auto it = aliases.find(param);
  return "--" + (it == aliases.end() ? param : it->second);
}

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("--config: " + path + " is not valid JSON (" + e.what() + ")");
  }
}

// The config file is applied before flag parsing so explicit flags win.
std::string find_config(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return {};
}

void add_model_flags(CLI::App& app, Settings& s) {
  app.add_option("--lambda", s.lambda, "Spatial intensity of transmitters per m^2");
  app.add_option("--alpha", s.alpha, "Pathloss exponent (> 2)");
  app.add_option("--beta", s.beta, "SIR threshold, linear");
  app.add_option("--r", s.r, "Tx-Rx distance in meters");
  app.add_option("--eps", s.eps, "Target outage probability");
  app.add_option("--fading", s.fading, "none | rayleigh | nakagami:m=<m> | table:<csv>");
  app.add_option("--policy", s.policy, "plain | threshold:t=<t> | fpc:gamma=<g> | inversion");
  app.add_option("--method", s.method, "Evaluation method");
  app.add_option("--trials", s.trials, "Monte-Carlo trials");
  app.add_option("--seed", s.seed, "Generator seed");
  app.add_option("--threads", s.threads, "Worker threads (0 = all cores)");
  app.add_option("--window-delta", s.window_delta, "Far-field truncation budget");
  app.add_option("--ci-level", s.ci_level, "Confidence level of intervals");
  app.add_option("--nt", s.nt, "Transmit antennas");
  app.add_option("--nr", s.nr, "Receive antennas");
  app.add_option("--strategy", s.strategy, "beamform | mrc | mrt | cancel:k=<k> | mmse | mmse-sqrt");
  app.add_option("--samples", s.samples, "Z_alpha samples for quantile tables");
  app.add_option("--n-terms", s.n_terms, "PPP points per Z_alpha sample");
  app.add_option("--out", s.out, "Write a CSV file instead of printing");
  app.add_option("--config", "JSON file with flag values (flags take precedence)");
}

void emit(const Settings& s, const Table& table) {
  const auto config = to_json(s);
  if (s.out.empty()) {
    write_csv(std::cout, config, table);
  } else {
    write_csv_file(s.out, config, table);
  }
}

void print_value(const Settings& s, const std::string& column, const Value& v) {
  if (!s.out.empty()) {
    Table table;
    table.header = {"method", column, "ci_lo", "ci_hi"};
    table.rows.push_back({s.method, format_scientific(v.value),
                          v.ci_lo ? format_scientific(*v.ci_lo) : "",
                          v.ci_hi ? format_scientific(*v.ci_hi) : ""});
    write_csv_file(s.out, to_json(s), table);
    return;
  }
  std::cout << format_double(v.value);
  if (v.ci_lo && v.ci_hi) std::cout << ',' << format_double(*v.ci_lo) << ',' << format_double(*v.ci_hi);
  std::cout << '\n';
}

Table simulate_table(const Settings& s) {
  Table table;
  const NetworkParams params = s.params();
  const SimConfig sim = s.sim();
  const bool mimo = s.method == "mimo" || s.nt > 1 || s.nr > 1;
  if (mimo) {
    const Estimate e = simulate_outage_mimo(params, s.mimo(), sim);
    table.header = {"p_hat", "ci_lo", "ci_hi", "trials", "events", "seed"};
    table.rows.push_back({format_scientific(e.p_hat), format_scientific(e.ci_lo),
                          format_scientific(e.ci_hi), std::to_string(e.trials),
                          std::to_string(e.events), std::to_string(e.seed)});
    return table;
  }
  const FadingModel fading = FadingModel::parse(s.fading);
  const Policy policy = Policy::parse(s.policy);
  table.header = {"p_hat", "ci_lo", "ci_hi", "trials", "events", "seed"};
  if (fading.kind() == FadingModel::Kind::None && policy.kind() == Policy::Kind::Plain) {
    const OutageBreakdown b = simulate_outage_breakdown(params, sim);
    table.header.insert(table.header.end(), {"dominant_p", "dominant_ci_lo", "dominant_ci_hi",
                                             "single_dominated_fraction"});
    table.rows.push_back({format_scientific(b.outage.p_hat), format_scientific(b.outage.ci_lo),
                          format_scientific(b.outage.ci_hi), std::to_string(b.outage.trials),
                          std::to_string(b.outage.events), std::to_string(b.outage.seed),
                          format_scientific(b.dominant.p_hat), format_scientific(b.dominant.ci_lo),
                          format_scientific(b.dominant.ci_hi),
                          format_scientific(b.single_dominated_fraction())});
    return table;
  }
  const Estimate e = simulate_outage(params, fading, policy, sim);
  table.rows.push_back({format_scientific(e.p_hat), format_scientific(e.ci_lo),
                        format_scientific(e.ci_hi), std::to_string(e.trials),
                        std::to_string(e.events), std::to_string(e.seed)});
  return table;
}

Table optimize_table(const Settings& s) {
  Table table;
  table.header = {"alpha", "beta_star", "eps_star", "tc", "area_spectral_efficiency"};
  const double beta_star = optimal_beta(s.alpha);
  ZQuantileFn quantile;
  std::optional<ZQuantileTable> z;
  if (s.method == "exact") {
    if (s.alpha != 4.0) throw DomainError("alpha", "the closed-form Z quantile needs alpha = 4");
    quantile = [](double e) { return z4_ccdf_inverse(e); };
  } else if (s.method.empty() || s.method == "quadrature") {
    quantile = [&](double e) { return z_ccdf_inverse(s.alpha, e); };
  } else if (s.method == "table") {
    z.emplace(z_quantile_table(s.alpha, s.samples, s.seed, s.n_terms, s.threads));
    quantile = [&](double e) { return (*z)(e); };
  } else {
    throw UsageError("--method: optimize accepts quadrature, table or exact");
  }
  const OutageConstraint eps_star = optimal_epsilon(s.alpha, quantile);
  const NetworkParams at_opt{0.0, s.alpha, beta_star, s.r};
  const double tc = tc_implicit(eps_star, at_opt, quantile);
  table.rows.push_back({format_scientific(s.alpha), format_scientific(beta_star),
                        format_scientific(eps_star.value()), format_scientific(tc),
                        format_scientific(area_spectral_efficiency(tc, beta_star))});
  return table;
}

int dispatch(Settings& s) {
  if (s.command == "outage" || s.command == "tc") {
    if (s.method.empty()) s.method = "exact";
    const Quantity q = s.command == "outage" ? Quantity::Outage : Quantity::Capacity;
    print_value(s, s.command, evaluate(q, s.method, s));
  } else if (s.command == "sweep") {
    emit(s, sweep_table(s));
  } else if (s.command == "optimize") {
    emit(s, optimize_table(s));
  } else if (s.command == "simulate") {
    emit(s, simulate_table(s));
  } else if (s.command == "figure") {
    for (const auto& path : emit_figure(s)) std::cout << path.string() << '\n';
  }
  return kOk;
}

}  // namespace

std::vector<std::filesystem::path> emit_figure(const Settings& base) {
  Settings s = base;
  s.command = "figure";
  std::vector<std::pair<std::string, Table>> outputs;
  if (s.figure == "b") {
    s.alpha = 4.0;
    s.beta = 3.0;
    s.r = 10.0;
    s.fading = "none";
    s.policy = "plain";
    outputs.emplace_back("b.csv", figure_b_outage(s));
    outputs.emplace_back("b_tc.csv", figure_b_capacity(s));
  } else if (s.figure == "opt") {
    outputs.emplace_back("opt.csv", figure_opt(s));
  } else if (s.figure == "diversity") {
    s.eps = 0.1;
    s.alpha = 4.0;
    s.beta = 1.0;
    s.r = 1.0;
    if (!base.trials_set) s.trials = 10000;
    s.window_delta = std::max(s.window_delta, 1e-2);
    outputs.emplace_back("diversity.csv", figure_diversity(s));
  } else {
    throw UsageError("figure: unknown name '" + s.figure + "' (b, opt, diversity)");
  }

  const std::filesystem::path dir = s.outdir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  auto manifest = to_json(s);
  std::vector<std::filesystem::path> written;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, table] : outputs) {
    write_csv_file(dir / name, manifest, table);
    written.push_back(dir / name);
    files.push_back(name);
  }
  manifest["files"] = files;
  const std::filesystem::path manifest_path = dir / (s.figure + ".json");
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + manifest_path.string() + " for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + manifest_path.string());
  written.push_back(manifest_path);
  return written;
}

int run(int argc, const char* const* argv) {
  Settings s;
  CLI::App app{"Outage probability and transmission capacity of Poisson networks"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> commands = {
      {"outage", "Outage probability at one configuration"},
      {"tc", "Transmission capacity at one configuration"},
      {"sweep", "Evaluate methods over a parameter grid"},
      {"optimize", "Optimal SIR threshold and target outage"},
      {"simulate", "Monte-Carlo outage estimate"},
      {"figure", "Write figure data (b, opt, diversity)"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_model_flags(*sub, s);
    subs[name] = sub;
  }
  auto* sweep = subs["sweep"];
  sweep->add_option("--var", s.var, "lambda | alpha | beta | r | eps | gamma | t | n_antennas");
  sweep->add_option("--from", s.from, "First grid value");
  sweep->add_option("--to", s.to, "Last grid value");
  sweep->add_option("--steps", s.steps, "Grid points (>= 2)");
  sweep->add_option("--scale", s.scale, "linear | log");
  sweep->add_option("--methods", s.methods, "Comma-separated methods; tc-<m> for capacities");
  subs["figure"]->add_option("name", s.figure, "b | opt | diversity")->required();
  subs["figure"]->add_option("--outdir", s.outdir, "Output directory");

  try {
    const std::string config = find_config(argc, argv);
    if (!config.empty()) apply_json(s, read_config(config));
    app.parse(argc, argv);
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) s.command = name;
    }
    if (subs[s.command]->count("--trials") > 0) s.trials_set = true;
    const int code = dispatch(s);
    std::cout.flush();
    return code;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << flag_for(e.param()) << ": " << e.what() << '\n';
    return kDomain;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tcap::cli
