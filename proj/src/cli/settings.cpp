#include <functional>
#include <map>

#include "cli.hpp"

namespace tcap::cli {

namespace {

using Json = nlohmann::json;
using Setter = std::function<void(Settings&, const Json&)>;

template <typename T>
Setter field(T Settings::*member) {
  return [member](Settings& s, const Json& v) { s.*member = v.get<T>(); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"lambda", field(&Settings::lambda)},
      {"alpha", field(&Settings::alpha)},
      {"beta", field(&Settings::beta)},
      {"r", field(&Settings::r)},
      {"eps", field(&Settings::eps)},
      {"fading", field(&Settings::fading)},
      {"policy", field(&Settings::policy)},
      {"method", field(&Settings::method)},
      {"trials",
       [](Settings& s, const Json& v) {
         s.trials = v.get<std::uint64_t>();
         s.trials_set = true;
       }},
      {"seed", field(&Settings::seed)},
      {"threads", field(&Settings::threads)},
      {"window-delta", field(&Settings::window_delta)},
      {"ci-level", field(&Settings::ci_level)},
      {"nt", field(&Settings::nt)},
      {"nr", field(&Settings::nr)},
      {"strategy", field(&Settings::strategy)},
      {"samples", field(&Settings::samples)},
      {"n-terms", field(&Settings::n_terms)},
      {"var", field(&Settings::var)},
      {"from", field(&Settings::from)},
      {"to", field(&Settings::to)},
      {"steps", field(&Settings::steps)},
      {"scale", field(&Settings::scale)},
      {"methods", field(&Settings::methods)},
      {"outdir", field(&Settings::outdir)},
      {"out", field(&Settings::out)},
      // manifests carry these; both are informational on input
      {"command", [](Settings&, const Json&) {}},
      {"figure", [](Settings&, const Json&) {}},
      {"files", [](Settings&, const Json&) {}},
  };
  return table;
}

}  // namespace

nlohmann::ordered_json to_json(const Settings& s) {
  nlohmann::ordered_json j;
  j["command"] = s.command;
  j["lambda"] = s.lambda;
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  j["r"] = s.r;
  j["eps"] = s.eps;
  j["fading"] = s.fading;
  j["policy"] = s.policy;
  j["method"] = s.method;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["window-delta"] = s.window_delta;
  j["ci-level"] = s.ci_level;
  j["nt"] = s.nt;
  j["nr"] = s.nr;
  j["strategy"] = s.strategy;
  j["samples"] = s.samples;
  j["n-terms"] = s.n_terms;
  if (s.command == "sweep") {
    j["var"] = s.var;
    j["from"] = s.from;
    j["to"] = s.to;
    j["steps"] = s.steps;
    j["scale"] = s.scale;
    j["methods"] = s.methods;
  }
  if (s.command == "figure") j["figure"] = s.figure;
  return j;
}

void apply_json(Settings& s, const nlohmann::json& config) {
  if (!config.is_object()) throw UsageError("--config: expected a flat JSON object");
  for (const auto& [key, value] : config.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw UsageError("--config: unknown key '" + key + "'");
    try {
      it->second(s, value);
    } catch (const nlohmann::json::exception&) {
      throw UsageError("--config: key '" + key + "' has the wrong type");
    }
  }
}

}  // namespace tcap::cli
