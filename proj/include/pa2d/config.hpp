#pragma once

// Experiment configuration read from JSON with dotted-path overrides, plus the
// environment registry.

#include <cstdint>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pa2d/evolution.hpp"
#include "pa2d/momdp.hpp"

namespace pa2d {

using Json = nlohmann::ordered_json;

/// Invalid or unparsable configuration. The message names the offending
/// field or the line and column of a syntax error.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  std::string method = "pa2d";  ///< label used to group runs in reports
  std::string env_name;
  Json env_params = Json::object();
  TrainConfig train;
  std::string output_dir = "runs";
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5};
};

namespace detail {

inline std::string type_name(const Json& j) { return j.type_name(); }

// Reads one JSON object and remembers which keys were consumed so unknown
// keys can be reported by their full path.
class Section {
 public:
  Section(const Json& j, std::string path) : path_(std::move(path)) {
    if (j.is_null()) return;
    if (!j.is_object()) throw ConfigError("config field '" + label() + "': expected an object");
    obj_ = &j;
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  const Json* raw(const std::string& key) {
    if (!has(key)) return nullptr;
    seen_.insert(key);
    return &obj_->at(key);
  }

  Section sub(const std::string& key) {
    static const Json null_json;
    const Json* j = raw(key);
    return Section(j ? *j : null_json, field(key));
  }

  std::string str(const std::string& key, const std::string& def, bool required = false) {
    const Json* j = raw(key);
    if (!j) {
      if (required) fail(key, "missing required field");
      return def;
    }
    if (!j->is_string()) fail(key, "expected a string, got " + type_name(*j));
    return j->get<std::string>();
  }

  long long integer(const std::string& key, long long def) {
    const Json* j = raw(key);
    if (!j) return def;
    if (!j->is_number_integer()) fail(key, "expected an integer, got " + type_name(*j));
    return j->get<long long>();
  }

  double real(const std::string& key, double def) {
    const Json* j = raw(key);
    if (!j) return def;
    if (!j->is_number()) fail(key, "expected a number, got " + type_name(*j));
    return j->get<double>();
  }

  bool boolean(const std::string& key, bool def) {
    const Json* j = raw(key);
    if (!j) return def;
    if (!j->is_boolean()) fail(key, "expected true or false, got " + type_name(*j));
    return j->get<bool>();
  }

  std::vector<double> reals(const std::string& key) {
    const Json* j = raw(key);
    std::vector<double> out;
    if (!j) return out;
    if (!j->is_array()) fail(key, "expected an array of numbers");
    for (const auto& v : *j) {
      if (!v.is_number()) fail(key, "expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("config field '" + field(key) + "': " + what);
  }

  void finish() const {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("config field '" + field(it.key()) + "': unknown field");
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const Json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ConfigError("config field '" + field + "': expected a non-empty array of rows");
  Matrix out(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != j[0].size())
      throw ConfigError("config field '" + field + "': rows must have equal length");
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      if (!j[r][c].is_number()) throw ConfigError("config field '" + field + "': expected numbers");
      out(r, c) = j[r][c].get<double>();
    }
  }
  return out;
}

}  // namespace detail

/// Parses JSON text. Syntax errors are reported as "<source>:<line>:<col>".
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    std::string msg = e.what();
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": parse error: " + msg);
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

/// Applies "a.b.c=value". The value is parsed as JSON when possible and is
/// otherwise taken as a string. Missing intermediate objects are created.
inline void apply_override(Json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "': empty path component");
    if (!node->is_object())
      throw ConfigError("override '" + assignment + "': '" + path.substr(0, start - 1) +
                        "' is not an object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

/// Environment names accepted by `make_environment`.
inline std::vector<std::string> environment_names() {
  return {"mo_point", "mo_quadratic", "mo_quadratic3"};
}

inline std::shared_ptr<const Environment> make_environment(const std::string& name,
                                                           const Json& params) {
  detail::Section s(params, "environment.params");
  std::shared_ptr<const Environment> env;
  if (name == "mo_point") {
    MoPoint::Params p;
    p.horizon = int(s.integer("horizon", p.horizon));
    p.gamma = s.real("gamma", p.gamma);
    p.damping = s.real("damping", p.damping);
    p.dt = s.real("dt", p.dt);
    p.alive_reward = s.real("alive_reward", p.alive_reward);
    p.energy_shift = s.real("energy_shift", p.energy_shift);
    p.init_noise = s.real("init_noise", p.init_noise);
    p.max_action = s.real("max_action", p.max_action);
    if (!(p.max_action > 0.0)) s.fail("max_action", "must be positive");
    if (!(p.init_noise >= 0.0)) s.fail("init_noise", "must be >= 0");
    try {
      env = std::make_shared<MoPoint>(p);
    } catch (const Error& e) {
      throw ConfigError("config field 'environment.params': " + std::string(e.what()));
    }
  } else if (name == "mo_quadratic" || name == "mo_quadratic3") {
    const int m = name == "mo_quadratic3" ? 3 : 2;
    Matrix targets = Matrix::Identity(m, m);
    if (const Json* t = s.raw("targets")) targets = detail::matrix_from_json(*t, s.field("targets"));
    if (targets.rows() != m)
      s.fail("targets", name + " needs exactly " + std::to_string(m) + " targets");
    const double limit = s.real("action_limit", 2.0);
    if (!(limit > 0.0)) s.fail("action_limit", "must be positive");
    env = std::make_shared<MoQuadratic>(targets, limit);
  } else {
    std::string known;
    for (const auto& n : environment_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("config field 'environment.name': unknown environment '" + name +
                      "' (known: " + known + ")");
  }
  s.finish();
  return env;
}

/// Reference point used when the config does not give one.
inline ObjectiveVector default_reference_point(const std::string& env_name, int m) {
  if (env_name == "mo_point") return ObjectiveVector::Constant(m, -1.0);
  return ObjectiveVector::Constant(m, -3.0);
}

inline const char* to_string(PairWeightRule r) {
  return r == PairWeightRule::chord_normal ? "chord_normal" : "gap_direction";
}

/// Builds and validates an ExperimentConfig. Every key must be known.
inline ExperimentConfig parse_config(const Json& root) {
  detail::Section top(root, "");
  ExperimentConfig cfg;
  cfg.experiment_id = top.str("experiment_id", cfg.experiment_id);
  if (cfg.experiment_id.empty() ||
      cfg.experiment_id.find_first_of("/\\") != std::string::npos)
    top.fail("experiment_id", "must be non-empty and contain no path separators");
  cfg.method = top.str("method", cfg.method);
  cfg.output_dir = top.str("output_dir", cfg.output_dir);

  auto envs = top.sub("environment");
  cfg.env_name = envs.str("name", "", true);
  if (const Json* p = envs.raw("params")) cfg.env_params = *p;
  envs.finish();
  const auto env = make_environment(cfg.env_name, cfg.env_params);
  const int m = env->spec().num_objectives;

  auto& G = cfg.train.gen;
  auto evo = top.sub("evolution");
  G.M = int(evo.integer("M", G.M));
  G.M_ft = int(evo.integer("M_ft", std::max(1, G.M / 3)));
  G.m_iters = int(evo.integer("m_iters", G.m_iters));
  G.m_w = int(evo.integer("m_w", G.m_w));
  G.p = int(evo.integer("p", G.p));
  G.n = int(evo.integer("n", G.n));
  G.k = int(evo.integer("k", G.k));
  G.recompute_interval = int(evo.integer("recompute_interval", G.recompute_interval));
  G.snapshot_interval = int(evo.integer("snapshot_interval", G.snapshot_interval));
  G.threads = int(evo.integer("threads", G.threads));
  G.record_wall_clock = evo.boolean("record_wall_clock", G.record_wall_clock);
  if (evo.has("reference_point")) {
    const auto z = evo.reals("reference_point");
    if (int(z.size()) != m)
      evo.fail("reference_point", "expected " + std::to_string(m) + " components");
    G.reference_point = Eigen::Map<const Vector>(z.data(), Eigen::Index(z.size()));
  } else {
    G.reference_point = default_reference_point(cfg.env_name, m);
  }
  evo.finish();

  auto paft = top.sub("paft");
  G.paft_enabled = paft.boolean("enabled", G.paft_enabled);
  G.n_pairs = int(paft.integer("n_pairs", G.n_pairs));
  const std::string rule = paft.str("pair_weights", to_string(G.pair_weights));
  if (rule == "chord_normal") G.pair_weights = PairWeightRule::chord_normal;
  else if (rule == "gap_direction") G.pair_weights = PairWeightRule::gap_direction;
  else paft.fail("pair_weights", "expected \"chord_normal\" or \"gap_direction\"");
  paft.finish();

  auto& T = cfg.train;
  auto pol = top.sub("policy");
  T.policy_shape.hidden = int(pol.integer("hidden", T.policy_shape.hidden));
  T.policy_shape.log_std_min = pol.real("log_std_min", T.policy_shape.log_std_min);
  T.policy_shape.log_std_max = pol.real("log_std_max", T.policy_shape.log_std_max);
  T.log_std_init = pol.real("log_std_init", T.log_std_init);
  T.critic_hidden = int(pol.integer("critic_hidden", T.critic_hidden));
  T.ppo.lr = pol.real("lr", T.ppo.lr);
  T.ppo.critic_lr = pol.real("critic_lr", T.ppo.critic_lr);
  T.ppo.clip_eps = pol.real("clip_eps", T.ppo.clip_eps);
  T.ppo.epochs = int(pol.integer("epochs", T.ppo.epochs));
  T.batch.gamma = pol.real("gamma", T.batch.gamma);
  T.batch.lambda = pol.real("lambda", T.batch.lambda);
  T.batch.episodes = int(pol.integer("batch_episodes", T.batch.episodes));
  T.batch.normalize = pol.boolean("normalize_advantages", T.batch.normalize);
  if (T.policy_shape.hidden < 0) pol.fail("hidden", "must be >= 0");
  if (T.critic_hidden < 0) pol.fail("critic_hidden", "must be >= 0");
  if (!(T.policy_shape.log_std_min < T.policy_shape.log_std_max))
    pol.fail("log_std_min", "must be below log_std_max");
  if (!(T.ppo.lr > 0.0)) pol.fail("lr", "must be positive");
  if (!(T.ppo.critic_lr > 0.0)) pol.fail("critic_lr", "must be positive");
  if (!(T.ppo.clip_eps > 0.0)) pol.fail("clip_eps", "must be positive");
  if (T.ppo.epochs < 1) pol.fail("epochs", "must be >= 1");
  if (!(T.batch.gamma > 0.0 && T.batch.gamma <= 1.0)) pol.fail("gamma", "must lie in (0, 1]");
  if (!(T.batch.lambda >= 0.0 && T.batch.lambda <= 1.0)) pol.fail("lambda", "must lie in [0, 1]");
  if (T.batch.episodes < 1) pol.fail("batch_episodes", "must be >= 1");
  pol.finish();

  auto ev = top.sub("evaluation");
  G.eval_episodes = int(ev.integer("episodes", G.eval_episodes));
  ev.finish();

  if (const Json* s = top.raw("seeds")) {
    if (!s->is_array() || s->empty()) top.fail("seeds", "expected a non-empty array of integers");
    cfg.seeds.clear();
    for (const auto& v : *s) {
      if (!v.is_number_unsigned()) top.fail("seeds", "expected non-negative integers");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  top.finish();

  try {
    G.validate(m);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("invalid config: " + std::string(e.what()));
  }
  if (m > 3) throw ConfigError("config field 'environment.name': hypervolume supports at most 3 objectives");
  return cfg;
}

/// Fully explicit form of a config: every default filled in, so the file
/// alone reproduces the run.
inline Json to_json(const ExperimentConfig& cfg) {
  const auto& G = cfg.train.gen;
  const auto& T = cfg.train;
  Json j;
  j["experiment_id"] = cfg.experiment_id;
  j["method"] = cfg.method;
  j["environment"] = {{"name", cfg.env_name}, {"params", cfg.env_params}};
  j["evolution"] = {{"M", G.M},
                    {"M_ft", G.M_ft},
                    {"m_iters", G.m_iters},
                    {"m_w", G.m_w},
                    {"p", G.p},
                    {"n", G.n},
                    {"k", G.k},
                    {"reference_point", std::vector<double>(G.reference_point.data(),
                                                            G.reference_point.data() +
                                                                G.reference_point.size())},
                    {"recompute_interval", G.recompute_interval},
                    {"snapshot_interval", G.snapshot_interval},
                    {"threads", G.threads},
                    {"record_wall_clock", G.record_wall_clock}};
  j["paft"] = {{"enabled", G.paft_enabled},
               {"n_pairs", G.n_pairs},
               {"pair_weights", to_string(G.pair_weights)}};
  j["policy"] = {{"hidden", T.policy_shape.hidden},
                 {"log_std_min", T.policy_shape.log_std_min},
                 {"log_std_max", T.policy_shape.log_std_max},
                 {"log_std_init", T.log_std_init},
                 {"critic_hidden", T.critic_hidden},
                 {"lr", T.ppo.lr},
                 {"critic_lr", T.ppo.critic_lr},
                 {"clip_eps", T.ppo.clip_eps},
                 {"epochs", T.ppo.epochs},
                 {"gamma", T.batch.gamma},
                 {"lambda", T.batch.lambda},
                 {"batch_episodes", T.batch.episodes},
                 {"normalize_advantages", T.batch.normalize}};
  j["evaluation"] = {{"episodes", G.eval_episodes}};
  j["output_dir"] = cfg.output_dir;
  j["seeds"] = cfg.seeds;
  return j;
}

/// Reads a config file, applies the overrides in order and validates.
inline ExperimentConfig load_config(const std::string& path,
                                    const std::vector<std::string>& overrides = {}) {
  Json root = load_json_file(path);
  if (!root.is_object()) throw ConfigError(path + ": top level must be an object");
  for (const auto& o : overrides) apply_override(root, o);
  return parse_config(root);
}

}  // namespace pa2d
