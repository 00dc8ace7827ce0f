#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "tcap/analytic.hpp"

namespace fs = std::filesystem;
using namespace tcap;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"tcap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tcap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Csv {
  nlohmann::json config;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("no column " + name);
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# config: ", 0) == 0);
  csv.config = nlohmann::json::parse(line.substr(10));
  std::getline(in, line);
  csv.header = split(line);
  while (std::getline(in, line)) csv.rows.push_back(split(line));
  return csv;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("single evaluations print shortest round-trip values") {
  const Outcome exact = run_cli({"outage", "--alpha", "4", "--beta", "3", "--r", "10", "--lambda", "1e-4",
                                 "--method", "exact"});
  CHECK(exact.code == 0);
  CHECK(exact.out.rfind("0.05437", 0) == 0);
  CHECK(std::stod(exact.out) == outage_exact_pl4({1e-4, 4.0, 3.0, 10.0}));

  const Outcome upper = run_cli({"tc", "--alpha", "4", "--beta", "3", "--r", "10", "--eps", "0.1",
                                 "--method", "upper"});
  CHECK(upper.code == 0);
  CHECK(std::stod(upper.out) == doctest::Approx(1.7427e-4).epsilon(1e-4));

  const Outcome mc = run_cli({"outage", "--method", "mc", "--trials", "2000"});
  CHECK(mc.code == 0);
  CHECK(split(mc.out).size() == 3);
}

TEST_CASE("exit codes follow the error class") {
  const Outcome domain = run_cli({"outage", "--alpha", "2"});
  CHECK(domain.code == 3);
  CHECK(domain.err.find("--alpha") != std::string::npos);

  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"outage", "--bogus", "1"}).code == 2);
  CHECK(run_cli({"outage", "--method", "psychic"}).code == 2);
  CHECK(run_cli({"sweep", "--from", "0", "--to", "1", "--steps", "1", "--methods", "exact"}).code == 2);
  CHECK(run_cli({"figure", "nope"}).code == 2);

  const Outcome nakagami = run_cli({"tc", "--fading", "nakagami:m=2.5", "--method", "exact"});
  CHECK(nakagami.code == 3);
  CHECK(nakagami.err.find("--fading") != std::string::npos);
  CHECK(run_cli({"tc", "--eps", "1.5"}).code == 3);
  CHECK(run_cli({"outage", "--fading", "table:/no/such/file.csv", "--method", "lower"}).code == 5);
  CHECK(run_cli({"outage", "--out", "/no/such/dir/x.csv"}).code == 5);
  CHECK(run_cli({"outage", "--config", "/no/such/config.json"}).code == 5);
}

TEST_CASE("flags override config values") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "c.json");
    cfg << R"({"alpha": 4, "beta": 3, "r": 10, "lambda": 5e-5, "method": "lower"})";
  }
  const std::string path = (dir / "c.json").string();
  const Outcome from_file = run_cli({"outage", "--config", path});
  CHECK(std::stod(from_file.out) == outage_lower({5e-5, 4.0, 3.0, 10.0}));
  const Outcome overridden = run_cli({"outage", "--config", path, "--lambda", "1e-4"});
  CHECK(std::stod(overridden.out) == outage_lower({1e-4, 4.0, 3.0, 10.0}));
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"alpha": 4, "colour": "blue"})";
  }
  CHECK(run_cli({"outage", "--config", (dir / "bad.json").string()}).code == 2);
}

TEST_CASE("sweep csv round trips the analytic columns") {
  const fs::path dir = scratch("sweep");
  const fs::path file = dir / "s.csv";
  REQUIRE(run_cli({"sweep", "--var", "lambda", "--from", "1e-6", "--to", "3e-3", "--steps", "40",
                   "--scale", "log", "--methods", "lower,exact,chernoff,tc-upper,tc-exact",
                   "--out", file.string()})
              .code == 0);
  const Csv csv = parse_csv(slurp(file));
  CHECK(csv.config["var"] == "lambda");
  CHECK(csv.config["methods"] == "lower,exact,chernoff,tc-upper,tc-exact");
  REQUIRE(csv.rows.size() == 40);
  const NetworkParams base{0.0, csv.config["alpha"], csv.config["beta"], csv.config["r"]};
  const OutageConstraint eps(csv.config["eps"].get<double>());
  for (const auto& row : csv.rows) {
    const NetworkParams p = base.with_lambda(std::stod(row[0]));
    const double lower = std::stod(row[csv.column("lower")]);
    const double exact = std::stod(row[csv.column("exact")]);
    const double chernoff = std::stod(row[csv.column("chernoff")]);
    CHECK(std::abs(lower - outage_lower(p)) <= 1e-12 * outage_lower(p));
    CHECK(std::abs(exact - outage_exact_pl4(p)) <= 1e-12 * outage_exact_pl4(p));
    CHECK(std::abs(std::stod(row[csv.column("tc-exact")]) - tc_exact_pl4(eps, p)) <=
          1e-12 * tc_exact_pl4(eps, p));
    CHECK(lower < exact);
    CHECK(exact < chernoff);
    CHECK(row.back().empty());
  }
}

TEST_CASE("per-point failures become empty cells with a note") {
  const Outcome r = run_cli({"sweep", "--var", "lambda", "--from", "1e-5", "--to", "1e-2", "--steps", "4",
                             "--scale", "log", "--methods", "chebyshev,exact"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  const auto& last = csv.rows.back();
  CHECK(last[csv.column("chebyshev")].empty());
  CHECK(!last[csv.column("exact")].empty());
  CHECK(last[csv.column("note")].find("chebyshev") != std::string::npos);
  CHECK(csv.rows.front()[csv.column("note")].empty());
}

TEST_CASE("mc sweeps carry interval columns") {
  const Outcome r = run_cli({"sweep", "--var", "beta", "--from", "1", "--to", "3", "--steps", "2",
                             "--methods", "mc", "--trials", "2000"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  CHECK(csv.header == std::vector<std::string>{"beta", "mc", "mc_ci_lo", "mc_ci_hi", "note"});
  for (const auto& row : csv.rows) {
    CHECK(std::stod(row[2]) <= std::stod(row[1]));
    CHECK(std::stod(row[1]) <= std::stod(row[3]));
  }
}

TEST_CASE("gamma sweep of the fpc approximation peaks at one half") {
  const Outcome r = run_cli({"sweep", "--var", "gamma", "--from", "0", "--to", "1", "--steps", "21",
                             "--fading", "rayleigh", "--methods", "tc-approx"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  std::size_t best = 0;
  for (std::size_t i = 1; i < csv.rows.size(); ++i) {
    if (std::stod(csv.rows[i][1]) > std::stod(csv.rows[best][1])) best = i;
  }
  CHECK(std::stod(csv.rows[best][0]) == doctest::Approx(0.5));
}

TEST_CASE("identical runs produce identical bytes") {
  const fs::path dir = scratch("bytes");
  const std::vector<std::string> args = {"simulate", "--trials", "20000", "--seed", "9", "--alpha", "3.5"};
  auto first = args;
  first.insert(first.end(), {"--out", (dir / "a.csv").string()});
  auto second = args;
  second.insert(second.end(), {"--out", (dir / "b.csv").string(), "--threads", "3"});
  REQUIRE(run_cli(first).code == 0);
  REQUIRE(run_cli(second).code == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("figure b writes data and a manifest with its fixed parameters") {
  const fs::path dir = scratch("figb");
  const Outcome r = run_cli({"figure", "b", "--outdir", dir.string(), "--alpha", "3"});
  REQUIRE(r.code == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "b.json"));
  CHECK(manifest["alpha"] == 4.0);
  CHECK(manifest["beta"] == 3.0);
  CHECK(manifest["r"] == 10.0);
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["files"] == nlohmann::json::array({"b.csv", "b_tc.csv"}));
  const Csv op = parse_csv(slurp(dir / "b.csv"));
  CHECK(op.rows.size() == 40);
  const Csv tc = parse_csv(slurp(dir / "b_tc.csv"));
  for (const auto& row : tc.rows) {
    const double upper = std::stod(row[1]);
    const double exact = std::stod(row[2]);
    const double chernoff = std::stod(row[3]);
    CHECK(upper >= exact);
    CHECK(exact >= chernoff);
  }
  // a manifest is itself a valid config
  CHECK(run_cli({"outage", "--config", (dir / "b.json").string(), "--method", "exact"}).code == 0);
}

TEST_CASE("figure diversity manifest records its fixed parameters") {
  const fs::path dir = scratch("figdiv");
  REQUIRE(run_cli({"figure", "diversity", "--outdir", dir.string(), "--trials", "200"}).code == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "diversity.json"));
  CHECK(manifest["eps"] == 0.1);
  CHECK(manifest["alpha"] == 4.0);
  CHECK(manifest["beta"] == 1.0);
  const Csv csv = parse_csv(slurp(dir / "diversity.csv"));
  CHECK(csv.header == std::vector<std::string>{"n", "beamform", "mrc", "cancel_diversity", "mmse"});
  CHECK(csv.rows.size() == 5);
}

TEST_CASE("optimize reports the closed-form optimum at alpha 4") {
  const Outcome r = run_cli({"optimize", "--alpha", "4", "--method", "exact"});
  REQUIRE(r.code == 0);
  const Csv csv = parse_csv(r.out);
  CHECK(std::stod(csv.rows[0][csv.column("beta_star")]) == doctest::Approx(optimal_beta(4.0)));
  CHECK(std::stod(csv.rows[0][csv.column("eps_star")]) == doctest::Approx(0.5478).epsilon(1e-3));
  CHECK(run_cli({"optimize", "--alpha", "3", "--method", "exact"}).code == 3);
}

}  // TEST_SUITE
