#include "config.hpp"

#include <set>
#include <vector>

#include <json.hpp>

namespace ctbp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(path + "." + it.key(), "unknown key");
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback,
                  bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(path + "." + key, "missing required number");
    return fallback;
  }
  if (!obj[key].is_number())
    fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::string get_family(const json& obj, const std::string& path) {
  if (!obj.contains("family")) fail(path + ".family", "missing family name");
  if (!obj["family"].is_string())
    fail(path + ".family", "expected a string");
  return obj["family"].get<std::string>();
}

WeightSequence parse_weights(const json& obj, const std::string& path) {
  std::string family = get_family(obj, path);
  if (family == "affine") {
    reject_unknown(obj, path, {"family", "a", "b"});
    return WeightSequence::affine(get_number(obj, path, "a", 1.0),
                                  get_number(obj, path, "b", 1.0));
  }
  if (family == "power") {
    reject_unknown(obj, path, {"family", "c", "q", "s0"});
    return WeightSequence::power(get_number(obj, path, "c", 1.0),
                                 get_number(obj, path, "q", 2.0, true),
                                 get_number(obj, path, "s0", 1.0));
  }
  if (family == "custom") {
    reject_unknown(obj, path, {"family", "table", "tail_a", "tail_b"});
    if (!obj.contains("table") || !obj["table"].is_array())
      fail(path + ".table", "expected an array of positive rates");
    std::vector<double> table;
    for (const auto& v : obj["table"]) {
      if (!v.is_number()) fail(path + ".table", "expected numbers");
      table.push_back(v.get<double>());
    }
    return WeightSequence::custom(std::move(table),
                                  get_number(obj, path, "tail_a", 0.0),
                                  get_number(obj, path, "tail_b", 1.0, true));
  }
  fail(path + ".family", "unknown weight family '" + family +
                             "' (expected affine | power | custom)");
}

AgingFunction parse_aging(const json& obj, const std::string& path) {
  std::string family = get_family(obj, path);
  if (family == "constant") {
    reject_unknown(obj, path, {"family"});
    return AgingFunction::constant();
  }
  if (family == "exponential") {
    reject_unknown(obj, path, {"family", "lambda"});
    return AgingFunction::exponential(
        get_number(obj, path, "lambda", 1.0, true));
  }
  if (family == "power") {
    reject_unknown(obj, path, {"family", "lambda"});
    return AgingFunction::power(get_number(obj, path, "lambda", 2.0, true));
  }
  if (family == "lognormal") {
    reject_unknown(obj, path,
                   {"family", "l1", "l2", "l3", "normalize_total"});
    bool normalize = false;
    if (obj.contains("normalize_total")) {
      if (!obj["normalize_total"].is_boolean())
        fail(path + ".normalize_total", "expected a boolean");
      normalize = obj["normalize_total"].get<bool>();
    }
    return AgingFunction::lognormal(get_number(obj, path, "l1", 1.0, true),
                                    get_number(obj, path, "l2", 1.0, true),
                                    get_number(obj, path, "l3", 0.0, true),
                                    normalize);
  }
  fail(path + ".family",
       "unknown aging family '" + family +
           "' (expected constant | exponential | power | lognormal)");
}

FitnessDistribution parse_fitness(const json& obj, const std::string& path) {
  std::string family = get_family(obj, path);
  if (family == "degenerate") {
    reject_unknown(obj, path, {"family", "value"});
    return FitnessDistribution::degenerate(
        get_number(obj, path, "value", 1.0));
  }
  if (family == "bounded_uniform") {
    reject_unknown(obj, path, {"family", "upper"});
    return FitnessDistribution::bounded_uniform(
        get_number(obj, path, "upper", 1.0, true));
  }
  if (family == "exponential") {
    reject_unknown(obj, path, {"family", "theta"});
    return FitnessDistribution::exponential(
        get_number(obj, path, "theta", 1.0, true));
  }
  if (family == "general_exponential") {
    reject_unknown(obj, path, {"family", "shape", "theta"});
    return FitnessDistribution::general_exponential(
        get_number(obj, path, "shape", 1.0, true),
        get_number(obj, path, "theta", 1.0, true));
  }
  if (family == "sub_exponential") {
    reject_unknown(obj, path, {"family", "theta", "eps"});
    return FitnessDistribution::sub_exponential(
        get_number(obj, path, "theta", 1.0, true),
        get_number(obj, path, "eps", 1.0, true));
  }
  if (family == "pareto") {
    reject_unknown(obj, path, {"family", "alpha", "xm"});
    return FitnessDistribution::pareto(
        get_number(obj, path, "alpha", 2.0, true),
        get_number(obj, path, "xm", 1.0));
  }
  fail(path + ".family",
       "unknown fitness family '" + family +
           "' (expected degenerate | bounded_uniform | exponential | "
           "general_exponential | sub_exponential | pareto)");
}

ProcessSpec parse_spec_json(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  reject_unknown(obj, path, {"weights", "aging", "fitness"});
  ProcessSpec spec;
  if (obj.contains("weights"))
    spec.weights = parse_weights(obj["weights"], path + ".weights");
  if (obj.contains("aging"))
    spec.aging = parse_aging(obj["aging"], path + ".aging");
  if (obj.contains("fitness"))
    spec.fitness = parse_fitness(obj["fitness"], path + ".fitness");
  return spec;
}

json parse_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw ConfigError("config error: not well-formed JSON");
  return doc;
}

}  // namespace

ProcessSpec parse_spec(const std::string& json_text) {
  try {
    return parse_spec_json(parse_text(json_text), "spec");
  } catch (const std::invalid_argument& e) {
    // Constructor-level validation (e.g. integrability gates) re-labelled as
    // configuration errors so callers see one error type.
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

RunConfig parse_config(const std::string& json_text) {
  json doc = parse_text(json_text);
  if (!doc.is_object()) throw ConfigError("config error: expected an object");
  reject_unknown(doc, "config",
                 {"spec", "command", "kmax", "seed", "stop", "out",
                  "tolerance"});
  RunConfig cfg;
  try {
    if (doc.contains("spec")) cfg.spec = parse_spec_json(doc["spec"], "spec");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) fail("command", "expected a string");
    cfg.command = doc["command"].get<std::string>();
    static const std::set<std::string> commands{
        "malthusian", "degdist", "asymptotics", "simulate", "validate"};
    if (!commands.count(cfg.command))
      fail("command", "unknown command '" + cfg.command + "'");
  }
  if (doc.contains("kmax")) {
    if (!doc["kmax"].is_number_unsigned())
      fail("kmax", "expected a non-negative integer");
    cfg.kmax = doc["kmax"].get<std::size_t>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      fail("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number()) fail("tolerance", "expected a number");
    cfg.tolerance = doc["tolerance"].get<double>();
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) fail("out", "expected a string");
    cfg.out = doc["out"].get<std::string>();
  }
  if (doc.contains("stop")) {
    const json& stop = doc["stop"];
    if (!stop.is_object()) fail("stop", "expected an object");
    reject_unknown(stop, "stop",
                   {"max_population", "max_time", "max_events"});
    if (stop.contains("max_population")) {
      if (!stop["max_population"].is_number_unsigned())
        fail("stop.max_population", "expected a non-negative integer");
      cfg.stop.max_population = stop["max_population"].get<std::size_t>();
    }
    if (stop.contains("max_time")) {
      if (!stop["max_time"].is_number())
        fail("stop.max_time", "expected a number");
      cfg.stop.max_time = stop["max_time"].get<double>();
    }
    if (stop.contains("max_events")) {
      if (!stop["max_events"].is_number_unsigned())
        fail("stop.max_events", "expected a non-negative integer");
      cfg.stop.max_events = stop["max_events"].get<std::size_t>();
    }
  }
  return cfg;
}

}  // namespace ctbp
