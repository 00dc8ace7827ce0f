#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tcap/analytic.hpp"
#include "tcap/fading.hpp"
#include "tcap/mimo.hpp"
#include "tcap/model.hpp"
#include "tcap/simulator.hpp"

namespace tcap::cli {

/// Every flag of the tool. JSON configs use the same long names as keys.
struct Settings {
  std::string command;
  double lambda = 1e-4;
  double alpha = 4.0;
  double beta = 3.0;
  double r = 10.0;
  double eps = 0.1;
  std::string fading = "none";
  std::string policy = "plain";
  std::string method;
  std::uint64_t trials = 100000;
  bool trials_set = false;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double window_delta = 1e-3;
  double ci_level = 0.95;
  int nt = 1;
  int nr = 1;
  std::string strategy = "mrc";
  std::uint64_t samples = 200000;
  int n_terms = 128;
  // sweep
  std::string var = "lambda";
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  std::string scale = "linear";
  std::string methods;
  // figure
  std::string figure;
  std::string outdir = ".";
  std::string out;

  NetworkParams params() const { return {lambda, alpha, beta, r}; }
  SimConfig sim() const { return {trials, seed, window_delta, ci_level, threads}; }
  MimoConfig mimo() const { return {nt, nr, MimoStrategy::parse(strategy)}; }
};

/// Flat JSON with one key per long flag name.
nlohmann::ordered_json to_json(const Settings& s);
/// Applies keys of a config object; unknown keys raise UsageError.
void apply_json(Settings& s, const nlohmann::json& config);

/// Bad command line or config (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of one method at one configuration.
struct Value {
  double value = 0.0;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
};

enum class Quantity { Outage, Capacity };

/// Valid method names per quantity.
const std::vector<std::string>& outage_methods();
const std::vector<std::string>& capacity_methods();

Value evaluate(Quantity quantity, const std::string& method, const Settings& s);

/// A CSV table with a self-describing config line.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const nlohmann::ordered_json& config, const Table& table);
void write_csv_file(const std::filesystem::path& path, const nlohmann::ordered_json& config,
                    const Table& table);

Table sweep_table(const Settings& s);
Table figure_b_outage(const Settings& s);
Table figure_b_capacity(const Settings& s);
Table figure_opt(const Settings& s);
Table figure_diversity(const Settings& s);

/// Writes <name>.csv (plus companions) and <name>.json into s.outdir;
/// returns the files written.
std::vector<std::filesystem::path> emit_figure(const Settings& s);

/// Entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace tcap::cli
