#pragma once

// Multi-objective MDP interface and the built-in desk-scale environments.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pa2d/core.hpp"

namespace pa2d {

struct Interval {
  double lo;
  double hi;
};

struct MomdpSpec {
  int state_dim = 1;
  int action_dim = 1;
  int num_objectives = 2;
  int horizon = 1;
  double gamma = 1.0;
  std::vector<Interval> action_bounds;

  void validate() const {
    require(state_dim >= 1 && action_dim >= 1, "MOMDP dimensions must be positive");
    require(num_objectives >= 2, "MOMDP needs at least two objectives");
    require(horizon >= 1, "MOMDP horizon must be >= 1");
    require(gamma > 0.0 && gamma <= 1.0, "MOMDP gamma must lie in (0, 1]");
    require(static_cast<int>(action_bounds.size()) == action_dim,
            "MOMDP needs one action bound per action dimension");
  }
};

struct Transition {
  Vector state;
  Vector action;  ///< after clamping to the action bounds
  ObjectiveVector reward;
  Vector next_state;
  bool terminal = false;
};

using Trajectory = std::vector<Transition>;

struct StepResult {
  Vector next_state;
  ObjectiveVector reward;
  bool terminal = false;
  Vector applied_action;
};

/// Environments are immutable after construction: `reset` draws from an
/// explicit seed and `step` is a pure function of (state, action), so one
/// instance can be shared by concurrent rollouts.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual const MomdpSpec& spec() const = 0;
  virtual std::string name() const = 0;
  virtual Vector reset(std::uint64_t seed) const = 0;
  virtual StepResult step(const Vector& state, const Vector& action) const = 0;

  Vector clamp_action(const Vector& action) const {
    const auto& b = spec().action_bounds;
    Vector out(action.size());
    for (Eigen::Index i = 0; i < action.size(); ++i)
      out[i] = std::clamp(action[i], b[i].lo, b[i].hi);
    return out;
  }

 protected:
  void check_step_inputs(const Vector& state, const Vector& action) const {
    require(action.size() == spec().action_dim, name() + ": action has wrong dimension");
    require(action.allFinite(), name() + ": non-finite action rejected");
    require(state.size() == spec().state_dim, name() + ": state has wrong dimension");
  }
};

/// Point mass in the plane driven by an acceleration. Objective 1 rewards
/// forward speed, objective 2 rewards low control effort.
class MoPoint final : public Environment {
 public:
  struct Params {
    int horizon = 64;
    double gamma = 0.99;
    double damping = 0.95;
    double dt = 0.05;
    double alive_reward = 1.0;
    double energy_shift = 2.0;  ///< C
    double init_noise = 0.1;    ///< half-width of the uniform initial position
    double max_action = 1.0;
  };

  MoPoint() : MoPoint(Params{}) {}
  explicit MoPoint(Params p) : p_(p) {
    spec_.state_dim = 4;  // x, y, vx, vy
    spec_.action_dim = 2;
    spec_.num_objectives = 2;
    spec_.horizon = p.horizon;
    spec_.gamma = p.gamma;
    spec_.action_bounds.assign(2, Interval{-p.max_action, p.max_action});
    spec_.validate();
  }

  const MomdpSpec& spec() const override { return spec_; }
  std::string name() const override { return "mo_point"; }
  const Params& params() const { return p_; }

  Vector reset(std::uint64_t seed) const override {
    Rng rng = make_stream(seed, 0x706f696e74);
    std::uniform_real_distribution<double> pos(-p_.init_noise, p_.init_noise);
    Vector s = Vector::Zero(4);
    s[0] = pos(rng);
    s[1] = pos(rng);
    return s;
  }

  StepResult step(const Vector& state, const Vector& action) const override {
    check_step_inputs(state, action);
    StepResult out;
    out.applied_action = clamp_action(action);
    const Vector& a = out.applied_action;
    out.next_state = state;
    out.next_state.segment(2, 2) = p_.damping * state.segment(2, 2) + p_.dt * a;
    out.next_state.segment(0, 2) += p_.dt * out.next_state.segment(2, 2);
    out.reward = speed_energy_reward(out.next_state[2], a);
    return out;
  }

  /// r_v = v + r_alive, r_e = -sum a_i^2 + r_alive + C.
  ObjectiveVector speed_energy_reward(double forward_velocity, const Vector& action) const {
    ObjectiveVector r(2);
    r[0] = forward_velocity + p_.alive_reward;
    r[1] = -action.squaredNorm() + p_.alive_reward + p_.energy_shift;
    return r;
  }

 private:
  Params p_;
  MomdpSpec spec_;
};

/// Single-step bandit with reward_i = -|a - c_i|^2. The Pareto set is the
/// convex hull of the targets, which gives an analytic front.
class MoQuadratic final : public Environment {
 public:
  /// `targets` is m x d: one target per objective.
  explicit MoQuadratic(Matrix targets, double action_limit = 2.0) : targets_(std::move(targets)) {
    require(targets_.rows() >= 2 && targets_.cols() >= 1, "mo_quadratic needs >= 2 targets");
    require(targets_.allFinite(), "mo_quadratic targets must be finite");
    spec_.state_dim = 1;
    spec_.action_dim = static_cast<int>(targets_.cols());
    spec_.num_objectives = static_cast<int>(targets_.rows());
    spec_.horizon = 1;
    spec_.gamma = 1.0;
    spec_.action_bounds.assign(targets_.cols(), Interval{-action_limit, action_limit});
    spec_.validate();
  }

  /// Two objectives in the plane: c1 = (1, 0), c2 = (0, 1).
  static MoQuadratic two_objective() { return MoQuadratic(Matrix::Identity(2, 2)); }
  /// Three objectives: the unit vectors of R^3.
  static MoQuadratic three_objective() { return MoQuadratic(Matrix::Identity(3, 3)); }

  const MomdpSpec& spec() const override { return spec_; }
  std::string name() const override {
    return spec_.num_objectives == 3 ? "mo_quadratic3" : "mo_quadratic";
  }
  const Matrix& targets() const { return targets_; }

  Vector reset(std::uint64_t) const override { return Vector::Zero(1); }

  StepResult step(const Vector& state, const Vector& action) const override {
    check_step_inputs(state, action);
    StepResult out;
    out.applied_action = clamp_action(action);
    out.reward = reward(out.applied_action);
    out.next_state = state;
    out.terminal = true;
    return out;
  }

  ObjectiveVector reward(const Vector& action) const {
    return -(targets_.rowwise() - action.transpose()).rowwise().squaredNorm();
  }

  /// Maximizer of w . r over actions: the w-weighted mix of the targets.
  Vector weighted_optimum(const Vector& w) const { return targets_.transpose() * w; }

  /// Objective vectors of Pareto-optimal actions on a regular lattice of the
  /// weight simplex with `resolution` subdivisions per edge.
  std::vector<ObjectiveVector> front_samples(int resolution) const;

 private:
  Matrix targets_;
  MomdpSpec spec_;
};

namespace detail {
inline void lattice_rec(int m, int left, int idx, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
  if (idx == m - 1) {
    cur[idx] = left;
    out.push_back(cur);
    return;
  }
  for (int v = left; v >= 0; --v) {
    cur[idx] = v;
    lattice_rec(m, left - v, idx + 1, cur, out);
  }
}
}  // namespace detail

/// All weight vectors with components in {0, 1/H, ..., 1}, in descending
/// lexicographic order.
inline std::vector<Vector> simplex_lattice(int m, int degree) {
  require(m >= 1 && degree >= 0, "simplex_lattice: bad arguments");
  std::vector<std::vector<int>> raw;
  std::vector<int> cur(m, 0);
  detail::lattice_rec(m, degree, 0, cur, raw);
  std::vector<Vector> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    Vector w(m);
    for (int i = 0; i < m; ++i) w[i] = degree == 0 ? 1.0 / m : static_cast<double>(r[i]) / degree;
    out.push_back(w);
  }
  return out;
}

inline std::vector<ObjectiveVector> MoQuadratic::front_samples(int resolution) const {
  std::vector<ObjectiveVector> out;
  for (const auto& w : simplex_lattice(spec_.num_objectives, resolution))
    out.push_back(reward(weighted_optimum(w)));
  return out;
}

/// Discounted per-objective return of a trajectory.
inline ObjectiveVector mo_return(const Trajectory& traj, double gamma) {
  require(!traj.empty(), "mo_return: empty trajectory");
  ObjectiveVector g = ObjectiveVector::Zero(traj.front().reward.size());
  double discount = 1.0;
  for (const auto& tr : traj) {
    g += discount * tr.reward;
    discount *= gamma;
  }
  return g;
}

/// Runs one episode of at most `horizon` steps. `policy(state)` returns the
/// raw action; the environment clamps it.
template <class Policy>
Trajectory rollout(const Environment& env, Policy&& policy, std::uint64_t reset_seed) {
  Trajectory traj;
  const int horizon = env.spec().horizon;
  traj.reserve(horizon);
  Vector state = env.reset(reset_seed);
  for (int t = 0; t < horizon; ++t) {
    const Vector action = policy(state);
    StepResult res = env.step(state, action);
    traj.push_back(Transition{state, std::move(res.applied_action), std::move(res.reward),
                              res.next_state, res.terminal});
    if (res.terminal) break;
    state = std::move(res.next_state);
  }
  return traj;
}

}  // namespace pa2d
