#pragma once

// Evolutionary training loop. Each generation runs Pareto-ascent lanes picked
// by partitioned greedy randomized (PGR) selection. From generation M_ft on,
// Pareto adaptive fine-tuning (PA-FT) also works on the frontier's gaps and ends.

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "pa2d/archive.hpp"
#include "pa2d/momdp.hpp"
#include "pa2d/pareto.hpp"
#include "pa2d/policy.hpp"

namespace pa2d {

enum class PairWeightRule {
  chord_normal,   ///< both ends get weights orthogonal to the chord
  gap_direction,  ///< each end gets normalize(max(+-u, 0))
};

struct GenerationConfig {
  int M = 10;            ///< total generations
  int M_ft = 3;          ///< first generation (0-based) that runs PA-FT
  int m_iters = 20;      ///< PPO iterations per lane per generation
  int m_w = 40;          ///< warmup iterations
  int p = 8;             ///< population size / lanes per generation
  int n = 0;             ///< PGR regions; 0 means "equal to p_a"
  int k = 2;             ///< PGR top-k
  int n_pairs = 1;       ///< PA-FT gap pairs
  PairWeightRule pair_weights = PairWeightRule::chord_normal;
  ObjectiveVector reference_point;
  std::uint64_t seed = 0;
  bool paft_enabled = true;
  int recompute_interval = 0;  ///< 0: solve for alpha once per generation
  int snapshot_interval = 1;   ///< evaluate and archive every this many iterations
  int eval_episodes = 8;
  int threads = 1;
  bool record_wall_clock = true;  ///< false writes 0 seconds so metrics are byte-stable

  void validate(int m) const {
    require(M >= 0, "evolution.M must be >= 0");
    require(M == 0 || (M_ft >= 1 && M_ft <= M), "evolution.M_ft must satisfy 1 <= M_ft <= M");
    require(m_iters >= 1, "evolution.m_iters must be >= 1");
    require(m_w >= 0, "evolution.m_w must be >= 0");
    require(p >= 2 && p % 2 == 0, "evolution.p must be even and >= 2");
    require(p >= m, "evolution.p must be >= the number of objectives");
    require(n >= 0 && k >= 1 && n_pairs >= 0, "evolution.n/k/n_pairs out of range");
    require(reference_point.size() == m, "evolution.reference_point must have m components");
    require(recompute_interval >= 0 && snapshot_interval >= 1 && eval_episodes >= 1,
            "evolution intervals must be positive");
    require(threads >= 1, "evolution.threads must be >= 1");
  }
};

struct TrainConfig {
  GenerationConfig gen;
  PolicyShape policy_shape;
  double log_std_init = -0.5;
  int critic_hidden = 32;
  BatchOptions batch;
  PpoOptions ppo;
};

// ---------------------------------------------------------------------------
// Weight design

/// p evenly spread simplex weights. m = 2: w1 = 0, 1/(p-1), ..., 1.
/// m >= 3: the smallest simplex lattice with at least p points, vertices
/// first, then descending lexicographic order, truncated to p.
inline std::vector<WeightVector> warmup_weights(int m, int p) {
  require(m >= 2, "warmup_weights: need m >= 2");
  require(p >= m, "warmup_weights: population smaller than the number of objectives");
  std::vector<WeightVector> out;
  if (m == 2) {
    for (int i = 0; i < p; ++i) {
      const double w1 = p == 1 ? 0.5 : double(i) / (p - 1);
      Vector w(2);
      w << w1, 1.0 - w1;
      out.push_back(WeightVector::checked(w));
    }
    return out;
  }
  int degree = 1;
  while (simplex_lattice(m, degree).size() < std::size_t(p)) ++degree;
  std::vector<Vector> lattice = simplex_lattice(m, degree);
  std::vector<Vector> ordered;
  for (const auto& w : lattice)
    if (w.maxCoeff() == 1.0) ordered.push_back(w);
  for (const auto& w : lattice)
    if (w.maxCoeff() != 1.0) ordered.push_back(w);
  for (int i = 0; i < p; ++i) out.push_back(WeightVector::checked(ordered[i]));
  return out;
}

// ---------------------------------------------------------------------------
// PGR selection

inline double distance_to_ref(const ObjectiveVector& j, const ObjectiveVector& z) {
  require(j.size() == z.size(), "distance_to_ref: length mismatch");
  return (j - z).norm();
}

/// n unit directions in the positive orthant of R^3 along a golden-angle
/// spiral.
inline std::vector<Vector> orthant_directions(int n) {
  std::vector<Vector> dirs;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = std::fmod(i * golden, std::numbers::pi / 2.0);
    Vector d(3);
    d << r * std::cos(az), r * std::sin(az), z;
    dirs.push_back(d.normalized());
  }
  return dirs;
}

/// Region index of J about Z. m = 2: equal angular sectors of [0, 90] degrees,
/// a point on a boundary goes to the higher-angle sector. m = 3: nearest of
/// the spiral directions by cosine.
inline int pgr_region(const ObjectiveVector& j, const ObjectiveVector& z, int n) {
  const Vector d = j - z;
  if (j.size() == 2) {
    const double angle = std::atan2(d[1], d[0]);
    const double width = (std::numbers::pi / 2.0) / n;
    return std::clamp(int(std::floor(angle / width)), 0, n - 1);
  }
  require(j.size() == 3, "pgr_region: only 2 or 3 objectives are supported");
  const auto dirs = orthant_directions(n);
  int best = 0;
  double best_cos = -2.0;
  const Vector u = d.normalized();
  for (int r = 0; r < n; ++r) {
    const double c = u.dot(dirs[r]);
    if (c > best_cos) {
      best_cos = c;
      best = r;
    }
  }
  return best;
}

struct PgrPick {
  std::size_t index;  ///< into the candidate list
  int region;         ///< -1 for global fill-in picks
  int rank;           ///< 0-based rank by distance within the region
  double distance;
};

/// One pick per non-empty region, uniform among that region's top-k by
/// distance from Z (larger is better). If fewer than n regions are occupied,
/// the remaining picks are drawn uniformly from unselected entries.
inline std::vector<PgrPick> pgr_select(std::span<const ObjectiveVector> points,
                                       const ObjectiveVector& z, int n, int k, Rng& rng) {
  require(!points.empty(), "pgr_select: empty population");
  require(n >= 1 && k >= 1, "pgr_select: n and k must be positive");
  for (const auto& p : points)
    require(dominates(p, z), "pgr_select: an entry does not dominate the reference point");

  std::vector<std::vector<std::size_t>> regions(n);
  for (std::size_t i = 0; i < points.size(); ++i)
    regions[pgr_region(points[i], z, n)].push_back(i);

  std::vector<PgrPick> picks;
  std::vector<bool> taken(points.size(), false);
  for (int r = 0; r < n; ++r) {
    auto& members = regions[r];
    if (members.empty()) continue;
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return distance_to_ref(points[a], z) > distance_to_ref(points[b], z);
    });
    const int top = std::min<int>(k, int(members.size()));
    std::uniform_int_distribution<int> choose(0, top - 1);
    const int rank = choose(rng);
    const std::size_t idx = members[rank];
    picks.push_back({idx, r, rank, distance_to_ref(points[idx], z)});
    taken[idx] = true;
  }
  while (int(picks.size()) < n) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!taken[i]) rest.push_back(i);
    if (rest.empty()) break;
    std::uniform_int_distribution<std::size_t> choose(0, rest.size() - 1);
    const std::size_t idx = rest[choose(rng)];
    picks.push_back({idx, -1, -1, distance_to_ref(points[idx], z)});
    taken[idx] = true;
  }
  return picks;
}

// ---------------------------------------------------------------------------
// PA-FT selection

enum class FinetuneKind { gap_pair, objective_extreme };

struct FinetunePlan {
  std::size_t index;  ///< into the frontier point list
  WeightVector weights;
  FinetuneKind kind;
  double gap = 0.0;  ///< pair length for gap_pair jobs
  std::size_t partner = 0;
};

struct GapPair {
  std::size_t a;
  std::size_t b;
  double gap;
};

/// Pairs (a, b) of frontier points with no third point inside the ball with
/// diameter ab (the Gabriel neighbours), longest first. Along a 2D front these
/// are exactly the consecutive points.
inline std::vector<GapPair> neighbour_gaps(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  std::vector<GapPair> all;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) all.push_back({a, b, (points[a] - points[b]).norm()});
  std::stable_sort(all.begin(), all.end(),
                   [](const GapPair& x, const GapPair& y) { return x.gap > y.gap; });
  std::vector<GapPair> out;
  for (const auto& pr : all) {
    const Vector mid = 0.5 * (points[pr.a] + points[pr.b]);
    const double r2 = 0.25 * pr.gap * pr.gap;
    bool empty = true;
    for (std::size_t c = 0; c < n && empty; ++c)
      if (c != pr.a && c != pr.b && (points[c] - mid).squaredNorm() < r2) empty = false;
    if (empty) out.push_back(pr);
  }
  return out;
}

/// Weights steering `from` toward `to` across the gap between them:
/// normalize(max(to - from, 0)), uniform if that is all zero.
inline WeightVector gap_direction_weights(const ObjectiveVector& from, const ObjectiveVector& to) {
  const Vector u = (to - from).normalized();
  Vector pos = u.cwiseMax(0.0);
  if (!(pos.sum() > 0.0)) return WeightVector::uniform(int(from.size()));
  return WeightVector::checked(pos / pos.sum());
}

/// Nonnegative weights w with w . (b - a) = 0, so the weighted-sum optimum
/// between two mutually non-dominated points lies inside their gap:
/// w ~ p / |p|^2 + q / |q|^2 with p, q the positive and negative parts of
/// b - a. In two dimensions this is the chord's normal.
inline WeightVector chord_normal_weights(const ObjectiveVector& a, const ObjectiveVector& b) {
  const Vector u = b - a;
  const Vector pos = u.cwiseMax(0.0);
  const Vector neg = (-u).cwiseMax(0.0);
  if (!(pos.squaredNorm() > 0.0) || !(neg.squaredNorm() > 0.0))
    return WeightVector::uniform(int(a.size()));
  const Vector w = pos / pos.squaredNorm() + neg / neg.squaredNorm();
  return WeightVector::checked(w / w.sum());
}

/// The `n_pairs` widest neighbour gaps (no policy used twice), two opposing
/// jobs per pair, then one single-objective job per objective for the
/// entry that is best on it; at most `cap` jobs in total.
inline std::vector<FinetunePlan> paft_select(
    std::span<const ObjectiveVector> points, int n_pairs, int cap,
    PairWeightRule rule = PairWeightRule::chord_normal) {
  require(points.size() >= 2, "paft_select: need at least two frontier points");
  const int m = int(points.front().size());
  std::vector<FinetunePlan> jobs;
  std::vector<bool> used(points.size(), false);
  int pairs = 0;
  for (const auto& g : neighbour_gaps(points)) {
    if (pairs >= n_pairs || int(jobs.size()) + 2 > cap) break;
    if (used[g.a] || used[g.b]) continue;
    used[g.a] = used[g.b] = true;
    const bool normal = rule == PairWeightRule::chord_normal;
    const WeightVector wa = normal ? chord_normal_weights(points[g.a], points[g.b])
                                   : gap_direction_weights(points[g.a], points[g.b]);
    const WeightVector wb = normal ? wa : gap_direction_weights(points[g.b], points[g.a]);
    jobs.push_back({g.a, wa, FinetuneKind::gap_pair, g.gap, g.b});
    jobs.push_back({g.b, wb, FinetuneKind::gap_pair, g.gap, g.a});
    ++pairs;
  }
  for (int i = 0; i < m && int(jobs.size()) < cap; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < points.size(); ++j)
      if (points[j][i] > points[best][i]) best = j;
    jobs.push_back({best, WeightVector::basis(m, i), FinetuneKind::objective_extreme, 0.0, best});
  }
  return jobs;
}

// ---------------------------------------------------------------------------
// Training loop

struct Snapshot {
  GaussianPolicy policy;
  Critic critic;
};

struct Lineage {
  int id;
  Snapshot live;
  ObjectiveVector objectives;
};

struct SelectionRecord {
  int generation;       ///< 1-based generation, 0 for warmup
  std::string kind;     ///< warmup, pgr, pgr_fill, paft_pair, paft_extreme
  int lane;
  int lineage;          ///< population lineage, -1 for archive starts
  std::string start_ref;  ///< archive checkpoint id for PA-FT starts
  int region;
  int rank;
  double score;         ///< distance to Z (PGR) or gap length (PA-FT pairs)
  Vector weights;       ///< alpha* or the fixed fine-tuning weights
  bool stationary;
};

struct GenerationMetrics {
  int generation;
  double hv;
  std::optional<double> sp;
  std::size_t archive_size;
  int stationary_fallbacks;
  double seconds;
};

struct TrainingResult {
  NonDominatedSet<PolicyEntry> archive;
  std::vector<GenerationMetrics> history;
  std::map<std::string, Snapshot> checkpoints;  ///< one per archive entry
  std::vector<SelectionRecord> selections;
  std::vector<Lineage> population;
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<int>(threads, int(count)); ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

class Trainer {
 public:
  Trainer(std::shared_ptr<const Environment> env, TrainConfig cfg)
      : env_(std::move(env)), cfg_(std::move(cfg)) {
    require(env_ != nullptr, "Trainer: no environment");
    m_ = env_->spec().num_objectives;
    cfg_.gen.validate(m_);
    require(m_ <= 3, "Trainer: hypervolume is only supported for 2 or 3 objectives");
    cfg_.policy_shape.state_dim = env_->spec().state_dim;
    cfg_.policy_shape.action_dim = env_->spec().action_dim;
  }

  const TrainConfig& config() const { return cfg_; }
  int num_objectives() const { return m_; }

  /// Lanes used in generation g (0-based): PGR count p_a and PA-FT cap p_b.
  std::pair<int, int> lane_split(int g) const {
    const auto& G = cfg_.gen;
    if (!G.paft_enabled || g < G.M_ft) return {G.p, 0};
    return {G.p / 2, G.p / 2};
  }

  void warmup() {
    start_ = std::chrono::steady_clock::now();
    const auto weights = warmup_weights(m_, cfg_.gen.p);
    std::vector<LaneTask> tasks;
    for (int l = 0; l < cfg_.gen.p; ++l) {
      Rng init = make_stream(cfg_.gen.seed, 0x1417, l);
      LaneTask t;
      t.start.policy = GaussianPolicy::random(cfg_.policy_shape, init, cfg_.log_std_init);
      t.start.critic = Critic::random(cfg_.policy_shape.state_dim, cfg_.critic_hidden, m_, init);
      t.fixed_weights = weights[l];
      t.iterations = cfg_.gen.m_w;
      t.source = Source::warmup;
      t.lineage = -1;
      tasks.push_back(std::move(t));
      result_.selections.push_back(
          {0, "warmup", l, l, "", -1, -1, 0.0, weights[l].values(), false});
    }
    auto outcomes = run_lanes(tasks, 0);
    for (int l = 0; l < cfg_.gen.p; ++l)
      result_.population.push_back({l, outcomes[l].final, outcomes[l].final_objectives});
    next_lineage_ = cfg_.gen.p;
    absorb(outcomes, tasks, 0);
    record_metrics(0, 0);
  }

  void run_generation(int g) {
    const auto& G = cfg_.gen;
    const auto [p_a, p_b] = lane_split(g);
    const int label = g + 1;
    std::vector<LaneTask> tasks;

    // PGR over population members that dominate Z.
    std::vector<ObjectiveVector> pts;
    std::vector<std::size_t> map;
    for (std::size_t i = 0; i < result_.population.size(); ++i)
      if (dominates(result_.population[i].objectives, G.reference_point)) {
        pts.push_back(result_.population[i].objectives);
        map.push_back(i);
      }
    Rng sel = make_stream(G.seed, 0x9a1, label);
    std::vector<bool> picked(result_.population.size(), false);
    auto add_ascent = [&](std::size_t member, int region, int rank, double score) {
      LaneTask t;
      t.start = result_.population[member].live;
      t.iterations = G.m_iters;
      t.source = Source::pareto_ascent;
      t.lineage = int(member);
      t.region = region;
      t.rank = rank;
      t.score = score;
      t.kind = region < 0 ? "pgr_fill" : "pgr";
      tasks.push_back(std::move(t));
      picked[member] = true;
    };
    if (!pts.empty()) {
      const int regions = G.n > 0 ? G.n : p_a;
      auto picks = pgr_select(pts, G.reference_point, regions, G.k, sel);
      if (int(picks.size()) > p_a) picks.resize(p_a);
      for (const auto& pk : picks) add_ascent(map[pk.index], pk.region, pk.rank, pk.distance);
    }
    // Members that fall outside Z cannot be ranked, but they still take up
    // free ascent lanes so the update budget does not shrink.
    while (int(tasks.size()) < p_a) {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < picked.size(); ++i)
        if (!picked[i]) rest.push_back(i);
      if (rest.empty()) break;
      std::uniform_int_distribution<std::size_t> choose(0, rest.size() - 1);
      add_ascent(rest[choose(sel)], -1, -1, 0.0);
    }

    if (p_b > 0 && result_.archive.size() >= 2) {
      const auto front = result_.archive.points();
      for (const auto& job : paft_select(front, G.n_pairs, p_b, G.pair_weights)) {
        const auto& entry = result_.archive.entries()[job.index];
        LaneTask t;
        t.start = result_.checkpoints.at(entry.params_ref);
        t.fixed_weights = job.weights;
        t.iterations = G.m_iters;
        t.source = job.kind == FinetuneKind::gap_pair ? Source::paft_pair : Source::paft_extreme;
        t.lineage = -1;
        t.start_ref = entry.params_ref;
        t.score = job.gap;
        t.kind = job.kind == FinetuneKind::gap_pair ? "paft_pair" : "paft_extreme";
        tasks.push_back(std::move(t));
      }
    }

    auto outcomes = run_lanes(tasks, label);
    int fallbacks = 0;
    for (std::size_t l = 0; l < tasks.size(); ++l) {
      const auto& t = tasks[l];
      const auto& o = outcomes[l];
      fallbacks += o.fallback ? 1 : 0;
      result_.selections.push_back({label, t.kind, int(l), t.lineage, t.start_ref, t.region,
                                    t.rank, t.score, o.weights, o.stationary});
    }
    absorb(outcomes, tasks, label);

    for (std::size_t l = 0; l < tasks.size(); ++l) {
      if (tasks[l].lineage >= 0) {
        auto& lin = result_.population[tasks[l].lineage];
        lin.live = outcomes[l].final;
        lin.objectives = outcomes[l].final_objectives;
      } else if (result_.archive.contains(outcomes[l].final_objectives)) {
        result_.population.push_back(
            {next_lineage_++, outcomes[l].final, outcomes[l].final_objectives});
      }
    }
    record_metrics(label, fallbacks);
  }

  TrainingResult run() {
    warmup();
    for (int g = 0; g < cfg_.gen.M; ++g) run_generation(g);
    return result_;
  }

  const TrainingResult& state() const { return result_; }

  /// Lanes launched by the last generation, counted from the selection log.
  std::size_t lanes_in_generation(int label) const {
    return std::count_if(result_.selections.begin(), result_.selections.end(),
                         [&](const SelectionRecord& r) { return r.generation == label; });
  }

 private:
  struct LaneTask {
    Snapshot start;
    std::optional<WeightVector> fixed_weights;  ///< empty: Pareto ascent
    int iterations = 0;
    Source source = Source::pareto_ascent;
    int lineage = -1;
    std::string start_ref;
    int region = -1;
    int rank = -1;
    double score = 0.0;
    std::string kind;
  };

  struct Candidate {
    Snapshot snap;
    ObjectiveVector objectives;
    int iteration;
  };

  struct LaneOutcome {
    Snapshot final;
    ObjectiveVector final_objectives;
    std::vector<Candidate> candidates;
    Vector weights;
    bool stationary = false;
    bool fallback = false;
  };

  LaneOutcome run_lane(const LaneTask& task, Rng& rng) const {
    LaneOutcome out;
    Snapshot cur = task.start;
    std::optional<WeightVector> omega = task.fixed_weights;
    const auto& G = cfg_.gen;
    for (int it = 0; it < task.iterations; ++it) {
      RolloutBatch batch = collect_batch(*env_, cur.policy, cur.critic, cfg_.batch, rng);
      const bool resolve = !task.fixed_weights &&
                           (it == 0 || (G.recompute_interval > 0 && it % G.recompute_interval == 0));
      if (resolve) {
        const AscentResult res = min_norm_direction(estimate_gradient_set(cur.policy, batch));
        if (it == 0) out.stationary = res.stationary;
        if (res.stationary) {
          omega = WeightVector::uniform(m_);
          out.fallback = true;
        } else {
          omega = res.alpha;
        }
        if (it == 0) out.weights = omega->values();
      }
      auto [pol, cr] = ppo_update(cur.policy, cur.critic, batch, *omega, cfg_.ppo);
      cur = Snapshot{std::move(pol), std::move(cr)};
      if ((it + 1) % G.snapshot_interval == 0 || it + 1 == task.iterations)
        out.candidates.push_back(
            {cur, evaluate_policy(*env_, cur.policy, G.eval_episodes), it + 1});
    }
    if (task.fixed_weights) out.weights = task.fixed_weights->values();
    out.final = cur;
    out.final_objectives = out.candidates.empty()
                               ? evaluate_policy(*env_, cur.policy, G.eval_episodes)
                               : out.candidates.back().objectives;
    if (out.candidates.empty()) out.candidates.push_back({cur, out.final_objectives, 0});
    return out;
  }

  std::vector<LaneOutcome> run_lanes(const std::vector<LaneTask>& tasks, int label) const {
    std::vector<LaneOutcome> outcomes(tasks.size());
    detail::parallel_for(tasks.size(), cfg_.gen.threads, [&](std::size_t l) {
      Rng rng = make_stream(cfg_.gen.seed, 0x1a4e, label, l);
      outcomes[l] = run_lane(tasks[l], rng);
    });
    return outcomes;
  }

  // Serial archive update at the generation barrier, in lane then iteration
  // order. Candidates that do not dominate Z are not archived.
  void absorb(const std::vector<LaneOutcome>& outcomes, const std::vector<LaneTask>& tasks,
              int label) {
    const auto& z = cfg_.gen.reference_point;
    for (std::size_t l = 0; l < outcomes.size(); ++l) {
      for (const auto& c : outcomes[l].candidates) {
        if (!dominates(c.objectives, z)) continue;
        const std::string id = "g" + std::to_string(label) + "_l" + std::to_string(l) + "_i" +
                               std::to_string(c.iteration);
        if (result_.archive.insert(PolicyEntry{id, c.objectives, label, tasks[l].source}))
          result_.checkpoints[id] = c.snap;
      }
    }
    std::erase_if(result_.checkpoints, [&](const auto& kv) {
      return std::none_of(result_.archive.entries().begin(), result_.archive.entries().end(),
                          [&](const PolicyEntry& e) { return e.params_ref == kv.first; });
    });
  }

  void record_metrics(int label, int fallbacks) {
    const auto pts = result_.archive.points();
    const double secs =
        cfg_.gen.record_wall_clock
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count()
            : 0.0;
    result_.history.push_back({label, hypervolume(pts, cfg_.gen.reference_point), sparsity(pts),
                               pts.size(), fallbacks, secs});
  }

  std::shared_ptr<const Environment> env_;
  TrainConfig cfg_;
  int m_ = 2;
  int next_lineage_ = 0;
  TrainingResult result_;
  std::chrono::steady_clock::time_point start_;
};

inline TrainingResult run_training(std::shared_ptr<const Environment> env, const TrainConfig& cfg) {
  Trainer trainer(std::move(env), cfg);
  return trainer.run();
}

}  // namespace pa2d
