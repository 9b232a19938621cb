#pragma once

// Pareto dominance, the non-dominated policy set and the frontier metrics.

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pa2d/core.hpp"

namespace pa2d {

/// a >= b componentwise and a != b (maximization).
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  require(a.size() == b.size(), "dominates: objective vectors differ in length");
  bool strictly = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

enum class Source { warmup, pareto_ascent, paft_pair, paft_extreme };

inline std::string to_string(Source s) {
  switch (s) {
    case Source::warmup: return "warmup";
    case Source::pareto_ascent: return "pareto_ascent";
    case Source::paft_pair: return "paft_pair";
    case Source::paft_extreme: return "paft_extreme";
  }
  return "unknown";
}

inline Source source_from_string(const std::string& s) {
  if (s == "warmup") return Source::warmup;
  if (s == "pareto_ascent") return Source::pareto_ascent;
  if (s == "paft_pair") return Source::paft_pair;
  if (s == "paft_extreme") return Source::paft_extreme;
  throw Error("unknown policy source '" + s + "'");
}

struct PolicyEntry {
  std::string params_ref;  ///< checkpoint id
  ObjectiveVector objectives;
  int generation = 0;
  Source source = Source::warmup;
};

/// Mutually non-dominated collection keyed on `Entry::objectives`. Equal
/// objective vectors keep the entry inserted first.
template <class Entry = PolicyEntry>
class NonDominatedSet {
 public:
  /// Returns false (and leaves the set unchanged) if the candidate is
  /// dominated by or equal to a member.
  bool insert(Entry entry) {
    require(entry.objectives.allFinite(), "archive insert: non-finite objectives");
    for (const auto& e : entries_) {
      require(e.objectives.size() == entry.objectives.size(),
              "archive insert: objective count mismatch");
      if (e.objectives == entry.objectives || dominates(e.objectives, entry.objectives))
        return false;
    }
    std::erase_if(entries_,
                  [&](const Entry& e) { return dominates(entry.objectives, e.objectives); });
    entries_.push_back(std::move(entry));
    return true;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<ObjectiveVector> points() const {
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.objectives);
    return out;
  }

  bool contains(const ObjectiveVector& j) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.objectives == j; });
  }

 private:
  std::vector<Entry> entries_;
};

namespace detail {

inline bool lex_less(const ObjectiveVector& a, const ObjectiveVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Area dominated by 2D points over (zx, zy); points sorted by x descending.
inline double sweep_area(std::vector<std::pair<double, double>>& pts, double zx, double zy) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  });
  double area = 0.0;
  double ymax = zy;
  for (const auto& [x, y] : pts) {
    if (y > ymax) {
      area += (x - zx) * (y - ymax);
      ymax = y;
    }
  }
  return area;
}

}  // namespace detail

/// Lebesgue measure of the union of boxes [z, p]. Exact for m in {2, 3}.
/// The result does not depend on the order of `points`.
inline double hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& z) {
  const auto m = z.size();
  require(m == 2 || m == 3, "hypervolume: only 2 or 3 objectives are supported");
  for (const auto& p : points) {
    require(p.size() == m, "hypervolume: objective count mismatch");
    require(dominates(p, z), "hypervolume: point does not dominate the reference point");
  }
  if (points.empty()) return 0.0;

  if (m == 2) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.emplace_back(p[0], p[1]);
    return detail::sweep_area(pts, z[0], z[1]);
  }

  // m == 3: slice along the third objective, descending.
  std::vector<ObjectiveVector> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a[2] != b[2] ? a[2] > b[2] : detail::lex_less(a, b);
  });
  double volume = 0.0;
  std::vector<std::pair<double, double>> active;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double level = sorted[i][2];
    while (i < sorted.size() && sorted[i][2] == level) {
      active.emplace_back(sorted[i][0], sorted[i][1]);
      ++i;
    }
    const double next = i < sorted.size() ? sorted[i][2] : z[2];
    // Prune the active slice to its 2D staircase to keep later sweeps short.
    const double area = detail::sweep_area(active, z[0], z[1]);
    std::vector<std::pair<double, double>> stair;
    double ymax = -std::numeric_limits<double>::infinity();
    for (const auto& pt : active)
      if (pt.second > ymax) {
        stair.push_back(pt);
        ymax = pt.second;
      }
    active = std::move(stair);
    volume += area * (level - next);
  }
  return volume;
}

inline double hypervolume(const std::vector<ObjectiveVector>& points, const ObjectiveVector& z) {
  return hypervolume(std::span<const ObjectiveVector>(points), z);
}

/// Mean squared gap of the per-objective sorted value lists. Empty when
/// fewer than two distinct points are given.
inline std::optional<double> sparsity(std::span<const ObjectiveVector> points) {
  std::vector<ObjectiveVector> uniq(points.begin(), points.end());
  std::sort(uniq.begin(), uniq.end(), detail::lex_less);
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (uniq.size() < 2) return std::nullopt;
  const auto m = uniq.front().size();
  double total = 0.0;
  std::vector<double> vals(uniq.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < uniq.size(); ++j) vals[j] = uniq[j][i];
    std::sort(vals.begin(), vals.end());
    for (std::size_t j = 0; j + 1 < vals.size(); ++j) {
      const double gap = vals[j + 1] - vals[j];
      total += gap * gap;
    }
  }
  return total / double(uniq.size() - 1);
}

inline std::optional<double> sparsity(const std::vector<ObjectiveVector>& points) {
  return sparsity(std::span<const ObjectiveVector>(points));
}

}  // namespace pa2d
