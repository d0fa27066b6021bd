#include "nmb/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nmb/errors.hpp"

namespace nmb {

namespace {

// Strict reader over one JSON object: typed getters record the keys they
// consume so leftover keys can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_[key].is_null(); }

  void touch(const std::string& key) { seen_.insert(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key) || obj_[key].is_null()) return;
    const json& v = obj_[key];
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
            throw ConfigError(field(key), "expected a non-negative integer");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  std::string require_string(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key), "missing required key");
    std::string out;
    get(key, out);
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw ConfigError(field(key), "unknown key");
    }
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> read_number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(path, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

EnvironmentConfig read_environment(const json& v) {
  ObjectReader r(v, "environment");
  const std::string kind = r.require_string("kind");
  if (kind == "gaussian") {
    GaussianBanditConfig g;
    r.get("k", g.k);
    r.get("p", g.p);
    r.get("block_length", g.block_length);
    r.get("mu_min", g.mu_min);
    r.get("mu_max", g.mu_max);
    r.get("sigma_min", g.sigma_min);
    r.get("sigma_max", g.sigma_max);
    r.get("total_steps", g.total_steps);
    r.finish();
    return g;
  }
  if (kind == "bernoulli_reversal") {
    BernoulliReversalConfig b;
    if (r.has("success_probabilities")) {
      const auto probs =
          read_number_list(r.raw("success_probabilities"), r.field("success_probabilities"));
      if (probs.size() != 2)
        throw ConfigError(r.field("success_probabilities"), "expected exactly two probabilities");
      b.success_probabilities = {probs[0], probs[1]};
    } else {
      r.touch("success_probabilities");
    }
    r.get("reward_magnitude", b.reward_magnitude);
    r.get("reversal_period", b.reversal_period);
    r.get("total_steps", b.total_steps);
    r.finish();
    return b;
  }
  throw ConfigError("environment.kind", "unknown environment kind '" + kind + "'");
}

AgentSpec read_agent(const json& v, std::size_t index) {
  ObjectReader r(v, "agents." + std::to_string(index));
  AgentSpec spec;
  spec.name = r.require_string("name");
  const std::string kind = r.require_string("kind");
  try {
    spec.kind = agent_kind_from_string(kind);
  } catch (const ConfigError& e) {
    throw ConfigError(r.field("kind"), e.detail());
  }
  switch (spec.kind) {
    case AgentKind::kDoyaDayu: {
      std::string mode = std::string(to_string(spec.doya_dayu.mode));
      r.get("mode", mode);
      try {
        spec.doya_dayu.mode = doya_dayu_mode_from_string(mode);
      } catch (const ConfigError& e) {
        throw ConfigError(r.field("mode"), e.detail());
      }
      r.get("n_ens", spec.doya_dayu.n_ens);
      r.get("alpha_g", spec.doya_dayu.alpha_g);
      r.get("mask_prob", spec.doya_dayu.mask_prob);
      r.get("alpha_u", spec.doya_dayu.alpha_u);
      break;
    }
    case AgentKind::kBoltzmann:
      r.get("learning_rate", spec.learning_rate);
      r.get("inverse_temperature", spec.inverse_temperature);
      break;
    case AgentKind::kDiscountedUcb:
      r.get("gamma", spec.gamma);
      r.get("xi", spec.xi);
      r.get("learning_rate", spec.learning_rate);
      break;
  }
  r.finish();
  return spec;
}

json agent_to_json(const AgentSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["kind"] = std::string(to_string(spec.kind));
  switch (spec.kind) {
    case AgentKind::kDoyaDayu:
      j["mode"] = std::string(to_string(spec.doya_dayu.mode));
      j["n_ens"] = spec.doya_dayu.n_ens;
      j["alpha_g"] = spec.doya_dayu.alpha_g;
      j["mask_prob"] = spec.doya_dayu.mask_prob;
      j["alpha_u"] = spec.doya_dayu.alpha_u;
      break;
    case AgentKind::kBoltzmann:
      j["learning_rate"] = spec.learning_rate;
      j["inverse_temperature"] = spec.inverse_temperature;
      break;
    case AgentKind::kDiscountedUcb:
      j["gamma"] = spec.gamma;
      j["xi"] = spec.xi;
      j["learning_rate"] = spec.learning_rate;
      break;
  }
  return j;
}

// Finite doubles as numbers, the rest as strings JSON can carry.
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& xs) {
  json arr = json::array();
  for (double x : xs) arr.push_back(number(x));
  return arr;
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = cfg.name;
  json env;
  if (const auto* g = std::get_if<GaussianBanditConfig>(&cfg.environment)) {
    env["kind"] = "gaussian";
    env["k"] = g->k;
    env["p"] = g->p;
    env["block_length"] = g->block_length;
    env["mu_min"] = g->mu_min;
    env["mu_max"] = g->mu_max;
    env["sigma_min"] = g->sigma_min;
    env["sigma_max"] = g->sigma_max;
    env["total_steps"] = g->total_steps;
  } else {
    const auto& b = std::get<BernoulliReversalConfig>(cfg.environment);
    env["kind"] = "bernoulli_reversal";
    env["success_probabilities"] = {b.success_probabilities[0], b.success_probabilities[1]};
    env["reward_magnitude"] = b.reward_magnitude;
    env["reversal_period"] = b.reversal_period;
    env["total_steps"] = b.total_steps;
  }
  j["environment"] = env;
  j["agents"] = json::array();
  for (const auto& a : cfg.agents) j["agents"].push_back(agent_to_json(a));
  j["n_seeds"] = cfg.n_seeds;
  j["base_seed"] = cfg.base_seed;
  if (cfg.stimulation) {
    json s;
    s["offset"] = cfg.stimulation->offset;
    s["epochs"] = json::array();
    for (const auto& [start, end] : cfg.stimulation->epochs) s["epochs"].push_back({start, end});
    j["stimulation"] = s;
  } else {
    j["stimulation"] = nullptr;
  }
  if (cfg.grid) {
    json g = json::object();
    if (cfg.grid->boltzmann) {
      g["boltzmann"] = {{"learning_rates", cfg.grid->boltzmann->learning_rates},
                        {"inverse_temperatures", cfg.grid->boltzmann->inverse_temperatures}};
    }
    if (cfg.grid->ducb) {
      g["ducb"] = {{"gammas", cfg.grid->ducb->gammas},
                   {"xis", cfg.grid->ducb->xis},
                   {"learning_rates", cfg.grid->ducb->learning_rates}};
    }
    j["grid"] = g;
  } else {
    j["grid"] = nullptr;
  }
  j["output_path"] = cfg.output_path;
  return j;
}

ExperimentConfig config_from_json(const json& doc) {
  ObjectReader r(doc, "");
  int version = kSchemaVersion;
  r.get("schema_version", version);
  if (version != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported schema version " + std::to_string(version));

  ExperimentConfig cfg;
  r.get("name", cfg.name);
  if (!r.has("environment")) throw ConfigError("environment", "missing required key");
  cfg.environment = read_environment(r.raw("environment"));
  if (r.has("agents")) {
    const json& agents = r.raw("agents");
    if (!agents.is_array()) throw ConfigError("agents", "expected an array");
    for (std::size_t i = 0; i < agents.size(); ++i) cfg.agents.push_back(read_agent(agents[i], i));
  } else {
    r.touch("agents");
  }
  r.get("n_seeds", cfg.n_seeds);
  r.get("base_seed", cfg.base_seed);
  if (r.has("stimulation")) {
    ObjectReader s(r.raw("stimulation"), "stimulation");
    StimulationSchedule schedule;
    s.get("offset", schedule.offset);
    if (s.has("epochs")) {
      const json& epochs = s.raw("epochs");
      if (!epochs.is_array()) throw ConfigError("stimulation.epochs", "expected an array");
      for (const auto& e : epochs) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
          throw ConfigError("stimulation.epochs", "each epoch must be [start, end]");
        schedule.epochs.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::int64_t>());
      }
    }
    s.finish();
    cfg.stimulation = schedule;
  } else {
    r.touch("stimulation");
  }
  if (r.has("grid")) {
    ObjectReader g(r.raw("grid"), "grid");
    GridSpec grid;
    if (g.has("boltzmann")) {
      ObjectReader b(g.raw("boltzmann"), "grid.boltzmann");
      BoltzmannGrid bg;
      bg.learning_rates = read_number_list(b.raw("learning_rates"), b.field("learning_rates"));
      bg.inverse_temperatures =
          read_number_list(b.raw("inverse_temperatures"), b.field("inverse_temperatures"));
      b.finish();
      grid.boltzmann = bg;
    } else {
      g.touch("boltzmann");
    }
    if (g.has("ducb")) {
      ObjectReader d(g.raw("ducb"), "grid.ducb");
      DucbGrid dg;
      dg.gammas = read_number_list(d.raw("gammas"), d.field("gammas"));
      dg.xis = read_number_list(d.raw("xis"), d.field("xis"));
      dg.learning_rates = read_number_list(d.raw("learning_rates"), d.field("learning_rates"));
      d.finish();
      grid.ducb = dg;
    } else {
      g.touch("ducb");
    }
    g.finish();
    cfg.grid = grid;
  } else {
    r.touch("grid");
  }
  r.get("output_path", cfg.output_path);
  r.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must have the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.size() == 1 && doc.contains("environment") && doc["environment"].contains(key))
    parts.insert(parts.begin(), "environment");

  json* node = &doc;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    if (node->is_array()) {
      json* next = nullptr;
      for (auto& element : *node) {
        if (element.is_object() && element.value("name", std::string{}) == part) next = &element;
      }
      if (next == nullptr && !part.empty() &&
          part.find_first_not_of("0123456789") == std::string::npos) {
        const auto index = std::stoul(part);
        if (index < node->size()) next = &(*node)[index];
      }
      if (next == nullptr) throw ConfigError(key, "unknown override key");
      node = next;
    } else if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else {
      throw ConfigError(key, "unknown override key");
    }
  }
  if (node->is_object() || node->is_array()) {
    if (node->is_array() && !text.empty() && text.front() == '[') {
      // Whole-list replacement is allowed.
    } else {
      throw ConfigError(key, "override must target a leaf value");
    }
  }
  try {
    *node = json::parse(text);
  } catch (const json::parse_error&) {
    *node = text;
  }
}

ExperimentConfig resolve_config(const json& doc, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg = config_from_json(doc);
  if (!overrides.empty()) {
    json resolved = config_to_json(cfg);
    for (const auto& o : overrides) apply_override(resolved, o);
    cfg = config_from_json(resolved);
  }
  cfg.validate();
  return cfg;
}

namespace {

void append_float(std::string& out, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  out += buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  std::string line;
  line.reserve(256);
  out << "# schema_version=" << kSchemaVersion << " agent=" << log.agent << " seed=" << log.seed
      << '\n';
  out << "step,context_id,switched,arm,reward,optimal_arm,regret";
  for (std::size_t a = 0; a < log.k; ++a) out << ",alpha_" << a;
  out << ",inv_temperature,stimulated\n";
  for (std::size_t t = 0; t < log.size(); ++t) {
    line.clear();
    line += std::to_string(t);
    line += ',';
    line += std::to_string(log.context_id[t]);
    line += ',';
    line += log.switched[t] ? '1' : '0';
    line += ',';
    line += std::to_string(log.arm[t]);
    line += ',';
    append_float(line, log.reward[t]);
    line += ',';
    line += std::to_string(log.optimal_arm[t]);
    line += ',';
    append_float(line, log.regret[t]);
    for (std::size_t a = 0; a < log.k; ++a) {
      line += ',';
      append_float(line, log.alpha_at(t, a));
    }
    line += ',';
    append_float(line, log.temperature[t]);
    line += ',';
    line += log.stimulated[t] ? '1' : '0';
    line += '\n';
    out << line;
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_trajectory_csv(out, log);
}

json to_json(const AlignedCurve& curve) {
  return {{"mean", numbers(curve.mean)},
          {"dispersion", numbers(curve.dispersion)},
          {"n_segments", curve.n_segments},
          {"n_seeds", curve.n_seeds}};
}

json to_json(const MetricSummary& s) {
  json j;
  j["agent"] = s.agent;
  j["cumulative_regret"] = number(s.cumulative_regret);
  j["final_avg_regret"] = number(s.final_avg_regret);
  j["final_cumulative_regrets"] = numbers(s.final_cumulative_regrets);
  j["final_avg_regrets"] = numbers(s.final_avg_regrets);
  j["per_context_regret_curve"] = to_json(s.per_context_regret_curve);
  j["optimal_fraction_curve"] = to_json(s.optimal_fraction_curve);
  j["value_mse_curve"] = numbers(s.value_mse_curve);
  if (s.choice_entropy_by_epoch) {
    j["choice_entropy_by_epoch"] = {{"stimulated", s.choice_entropy_by_epoch->stimulated},
                                    {"non_stimulated", s.choice_entropy_by_epoch->non_stimulated}};
  } else {
    j["choice_entropy_by_epoch"] = nullptr;
  }
  return j;
}

json to_json(const stats::AnovaResult& r) {
  json j;
  j["f_statistic"] = number(r.f_statistic);
  j["df_between"] = r.df_between;
  j["df_within"] = r.df_within;
  j["p_value"] = number(r.p_value);
  j["exact_separation"] = r.exact_separation;
  j["pairs"] = json::array();
  for (const auto& p : r.pairs) {
    j["pairs"].push_back({{"first", p.first},
                          {"second", p.second},
                          {"mean_difference", number(p.mean_difference)},
                          {"statistic", number(p.statistic)},
                          {"p_value", number(p.p_value)},
                          {"stars", p.stars}});
  }
  return j;
}

json to_json(const GridResult& r) {
  json j;
  j["kind"] = std::string(to_string(r.kind));
  j["param_names"] = r.param_names;
  json best;
  for (std::size_t i = 0; i < r.param_names.size(); ++i)
    best[r.param_names[i]] = r.best_row().params[i];
  best["mean_final_regret"] = r.best_row().mean_final_regret;
  j["best"] = best;
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back(
        {{"params", row.params}, {"mean_final_regret", row.mean_final_regret}, {"sem", row.sem}});
  }
  return j;
}

json to_json(const StimulationResult& r) {
  json j;
  j["greedy_fraction"] = {{"stimulated_inside", r.greedy_stim_inside},
                          {"control_inside", r.greedy_control_inside}};
  j["accuracy"] = {{"stimulated_inside", r.accuracy_stim_inside},
                   {"control_inside", r.accuracy_control_inside},
                   {"stimulated_outside", r.accuracy_stim_outside},
                   {"control_outside", r.accuracy_control_outside}};
  j["stimulated"] = to_json(r.stimulated);
  j["control"] = to_json(r.control);
  j["pairs"] = json::array();
  for (const auto& p : r.pairs) {
    j["pairs"].push_back({{"seed", p.seed},
                          {"greedy_stimulated_inside", p.greedy_stim_inside},
                          {"greedy_control_inside", p.greedy_control_inside},
                          {"accuracy_stimulated_inside", p.accuracy_stim_inside},
                          {"accuracy_control_inside", p.accuracy_control_inside},
                          {"accuracy_stimulated_outside", p.accuracy_stim_outside},
                          {"accuracy_control_outside", p.accuracy_control_outside}});
  }
  return j;
}

}  // namespace nmb
