#pragma once

// On-disk formats written by training runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pa2d/archive.hpp"
#include "pa2d/config.hpp"
#include "pa2d/evolution.hpp"

namespace pa2d {

namespace fs = std::filesystem;

/// 17 significant digits, enough to parse back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw Error("write failed for '" + path.string() + "'");
}

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Checkpoints

inline constexpr int kCheckpointVersion = 1;

namespace detail {

inline void write_values(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
}

inline Vector read_values(std::istream& in, Eigen::Index n, const std::string& what) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::string tok;
    if (!(in >> tok)) throw Error("checkpoint: truncated " + what + " parameters");
    try {
      std::size_t used = 0;
      v[i] = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error("checkpoint: bad number '" + tok + "' in " + what + " parameters");
    }
  }
  return v;
}

// Parses "key=value" tokens of a header line in the given order.
inline std::vector<double> read_header(std::istream& in, const std::string& tag,
                                      const std::vector<std::string>& keys) {
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  std::istringstream ls(line);
  std::string word;
  if (!(ls >> word) || word != tag) throw Error("checkpoint: expected a '" + tag + "' header");
  std::vector<double> out;
  for (const auto& key : keys) {
    if (!(ls >> word)) throw Error("checkpoint: " + tag + " header lacks '" + key + "'");
    const auto eq = word.find('=');
    if (eq == std::string::npos || word.substr(0, eq) != key)
      throw Error("checkpoint: " + tag + " header expected '" + key + "=', got '" + word + "'");
    try {
      out.push_back(std::stod(word.substr(eq + 1)));
    } catch (const std::exception&) {
      throw Error("checkpoint: bad value in '" + word + "'");
    }
  }
  return out;
}

}  // namespace detail

inline std::string checkpoint_text(const Snapshot& snap) {
  const auto& s = snap.policy.shape;
  const auto& c = snap.critic.net;
  std::ostringstream out;
  out << "pa2d-checkpoint " << kCheckpointVersion << '\n';
  out << "policy state_dim=" << s.state_dim << " action_dim=" << s.action_dim
      << " hidden=" << s.hidden << " log_std_min=" << format_double(s.log_std_min)
      << " log_std_max=" << format_double(s.log_std_max) << " params=" << snap.policy.params.size()
      << '\n';
  detail::write_values(out, snap.policy.params);
  out << "critic in=" << c.in << " hidden=" << c.hidden << " out=" << c.out
      << " params=" << snap.critic.params.size() << '\n';
  detail::write_values(out, snap.critic.params);
  return out.str();
}

inline void save_checkpoint(const fs::path& path, const Snapshot& snap) {
  write_text_file(path, checkpoint_text(snap));
}

inline Snapshot parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "pa2d-checkpoint")
    throw Error("checkpoint: missing 'pa2d-checkpoint' header");
  if (version != kCheckpointVersion)
    throw Error("checkpoint: unsupported version " + std::to_string(version));
  const auto ph = detail::read_header(
      in, "policy", {"state_dim", "action_dim", "hidden", "log_std_min", "log_std_max", "params"});
  PolicyShape shape{int(ph[0]), int(ph[1]), int(ph[2]), ph[3], ph[4]};
  require(shape.state_dim >= 1 && shape.action_dim >= 1 && shape.hidden >= 0,
          "checkpoint: invalid policy shape");
  require(Eigen::Index(ph[5]) == shape.size(),
          "checkpoint: policy parameter count " + std::to_string(Eigen::Index(ph[5])) +
              " does not match the shape header (" + std::to_string(shape.size()) + ")");
  Snapshot snap;
  snap.policy = GaussianPolicy{shape, detail::read_values(in, shape.size(), "policy")};
  const auto ch = detail::read_header(in, "critic", {"in", "hidden", "out", "params"});
  Mlp net{int(ch[0]), int(ch[1]), int(ch[2])};
  require(net.in >= 1 && net.hidden >= 0 && net.out >= 1, "checkpoint: invalid critic shape");
  require(Eigen::Index(ch[3]) == net.size(),
          "checkpoint: critic parameter count does not match the shape header");
  snap.critic = Critic{net, detail::read_values(in, net.size(), "critic")};
  std::string extra;
  if (in >> extra) throw Error("checkpoint: trailing data after critic parameters");
  return snap;
}

inline Snapshot load_checkpoint(const fs::path& path) {
  try {
    return parse_checkpoint(read_text_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

/// Throws if the policy cannot act in `env`, naming expected and actual dims.
inline void check_policy_fits(const GaussianPolicy& policy, const Environment& env) {
  const auto& s = policy.shape;
  const auto& e = env.spec();
  if (s.state_dim != e.state_dim || s.action_dim != e.action_dim)
    throw Error("checkpoint shape mismatch: environment " + env.name() + " expects state_dim=" +
                std::to_string(e.state_dim) + " action_dim=" + std::to_string(e.action_dim) +
                ", checkpoint has state_dim=" + std::to_string(s.state_dim) +
                " action_dim=" + std::to_string(s.action_dim));
}

// ---------------------------------------------------------------------------
// Frontier JSON

inline constexpr int kFrontierSchemaVersion = 1;

struct FrontierEntry {
  ObjectiveVector objectives;
  int generation = 0;
  Source source = Source::warmup;
  std::string checkpoint;  ///< path relative to the frontier file
};

struct Frontier {
  std::string experiment_id;
  int m = 2;
  ObjectiveVector reference_point;
  std::vector<FrontierEntry> entries;

  std::vector<ObjectiveVector> points() const {
    std::vector<ObjectiveVector> out;
    for (const auto& e : entries) out.push_back(e.objectives);
    return out;
  }
};

inline std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline std::string checkpoint_relpath(const std::string& id) { return "checkpoints/" + id + ".ckpt"; }

/// Frontier of an archive, entries in ascending lexicographic order of their
/// objective vectors.
inline Frontier make_frontier(const std::string& experiment_id, const ObjectiveVector& z,
                              const NonDominatedSet<PolicyEntry>& archive) {
  Frontier f{experiment_id, int(z.size()), z, {}};
  for (const auto& e : archive.entries())
    f.entries.push_back({e.objectives, e.generation, e.source, checkpoint_relpath(e.params_ref)});
  std::sort(f.entries.begin(), f.entries.end(), [](const auto& a, const auto& b) {
    return detail::lex_less(a.objectives, b.objectives);
  });
  return f;
}

inline std::string frontier_text(const Frontier& f) {
  Json j;
  j["schema_version"] = kFrontierSchemaVersion;
  j["experiment_id"] = f.experiment_id;
  j["m"] = f.m;
  j["reference_point"] = to_std(f.reference_point);
  j["entries"] = Json::array();
  for (const auto& e : f.entries)
    j["entries"].push_back({{"objectives", to_std(e.objectives)},
                            {"generation", e.generation},
                            {"source", to_string(e.source)},
                            {"checkpoint", e.checkpoint}});
  return j.dump(2) + "\n";
}

inline Frontier parse_frontier(const std::string& text, const std::string& source) {
  const Json j = parse_json_text(text, source);
  auto fail = [&](const std::string& what) -> Error { return Error(source + ": " + what); };
  if (!j.is_object()) throw fail("frontier must be a JSON object");
  for (const char* key : {"schema_version", "experiment_id", "m", "reference_point", "entries"})
    if (!j.contains(key)) throw fail(std::string("missing field '") + key + "'");
  if (j["schema_version"] != kFrontierSchemaVersion)
    throw fail("unsupported schema_version " + j["schema_version"].dump());
  Frontier f;
  try {
    f.experiment_id = j["experiment_id"].get<std::string>();
    f.m = j["m"].get<int>();
    const auto z = j["reference_point"].get<std::vector<double>>();
    f.reference_point = Eigen::Map<const Vector>(z.data(), Eigen::Index(z.size()));
    for (const auto& e : j["entries"]) {
      const auto obj = e.at("objectives").get<std::vector<double>>();
      FrontierEntry fe;
      fe.objectives = Eigen::Map<const Vector>(obj.data(), Eigen::Index(obj.size()));
      fe.generation = e.at("generation").get<int>();
      fe.source = source_from_string(e.at("source").get<std::string>());
      fe.checkpoint = e.at("checkpoint").get<std::string>();
      if (int(fe.objectives.size()) != f.m) throw fail("entry objective count differs from m");
      f.entries.push_back(std::move(fe));
    }
  } catch (const Json::exception& e) {
    throw fail(std::string("malformed frontier: ") + e.what());
  }
  if (int(f.reference_point.size()) != f.m) throw fail("reference_point length differs from m");
  return f;
}

inline Frontier load_frontier(const fs::path& path) {
  return parse_frontier(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Metrics CSV

inline constexpr const char* kMetricsHeader =
    "generation,hv,sp,archive_size,stationary_fallbacks,seconds";

inline std::string metrics_text(const std::vector<GenerationMetrics>& rows) {
  std::string out = std::string(kMetricsHeader) + "\n";
  char secs[32];
  for (const auto& r : rows) {
    std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
    out += std::to_string(r.generation) + "," + format_double(r.hv) + "," +
           (r.sp ? format_double(*r.sp) : std::string("undefined")) + "," +
           std::to_string(r.archive_size) + "," + std::to_string(r.stationary_fallbacks) + "," +
           secs + "\n";
  }
  return out;
}

inline std::vector<GenerationMetrics> parse_metrics(const std::string& text,
                                                    const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader)
    throw Error(source + ": unexpected metrics header");
  std::vector<GenerationMetrics> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (cells.size() != 6)
      throw Error(source + ":" + std::to_string(lineno) + ": expected 6 columns");
    try {
      GenerationMetrics r;
      r.generation = std::stoi(cells[0]);
      r.hv = std::stod(cells[1]);
      if (cells[2] != "undefined") r.sp = std::stod(cells[2]);
      r.archive_size = std::stoul(cells[3]);
      r.stationary_fallbacks = std::stoi(cells[4]);
      r.seconds = std::stod(cells[5]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw Error(source + ":" + std::to_string(lineno) + ": malformed metrics row");
    }
  }
  return rows;
}

inline std::vector<GenerationMetrics> load_metrics(const fs::path& path) {
  return parse_metrics(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Selection log (one JSON object per line)

inline std::string selection_log_text(const std::vector<SelectionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    Json j{{"generation", r.generation}, {"kind", r.kind},     {"lane", r.lane},
           {"lineage", r.lineage},       {"start", r.start_ref}, {"region", r.region},
           {"rank", r.rank},             {"score", r.score},   {"weights", to_std(r.weights)},
           {"stationary", r.stationary}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace pa2d
