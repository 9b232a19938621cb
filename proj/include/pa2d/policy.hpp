#pragma once

// Diagonal-Gaussian policy and m-output critic, trained by scalarized PPO on
// per-objective advantages.

#include <numbers>
#include <vector>

#include "pa2d/momdp.hpp"
#include "pa2d/pareto.hpp"

namespace pa2d {

/// Fully connected map in -> out, either linear or with one tanh hidden
/// layer, over a flat parameter vector laid out as
/// [W1 (hidden x in, row-major), b1, W2 (out x hidden, row-major), b2].
/// With hidden == 0 the layout is [W (out x in, row-major), b].
struct Mlp {
  int in = 1;
  int hidden = 0;
  int out = 1;

  Eigen::Index size() const {
    return hidden > 0 ? Eigen::Index(hidden) * in + hidden + Eigen::Index(out) * hidden + out
                      : Eigen::Index(out) * in + out;
  }

  struct Cache {
    Vector h;  ///< tanh activations; empty for a linear map
  };

  Vector forward(const Eigen::Ref<const Vector>& p, const Vector& x, Cache* cache = nullptr) const {
    if (hidden == 0) {
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
          p.data(), out, in);
      return w * x + p.segment(Eigen::Index(out) * in, out);
    }
    Eigen::Index off = 0;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w1(
        p.data(), hidden, in);
    off += Eigen::Index(hidden) * in;
    Vector h = (w1 * x + p.segment(off, hidden)).array().tanh().matrix();
    off += hidden;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w2(
        p.data() + off, out, hidden);
    off += Eigen::Index(out) * hidden;
    Vector y = w2 * h + p.segment(off, out);
    if (cache) cache->h = std::move(h);
    return y;
  }

  /// Adds (d output / d params)^T * upstream into `grad`.
  void backward(const Eigen::Ref<const Vector>& p, const Vector& x, const Cache& cache,
                const Vector& upstream, Eigen::Ref<Vector> grad) const {
    if (hidden == 0) {
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw(
          grad.data(), out, in);
      gw += upstream * x.transpose();
      grad.segment(Eigen::Index(out) * in, out) += upstream;
      return;
    }
    const Eigen::Index w2_off = Eigen::Index(hidden) * in + hidden;
    const Eigen::Index b2_off = w2_off + Eigen::Index(out) * hidden;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w2(
        p.data() + w2_off, out, hidden);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw2(
        grad.data() + w2_off, out, hidden);
    gw2 += upstream * cache.h.transpose();
    grad.segment(b2_off, out) += upstream;
    const Vector dpre = ((w2.transpose() * upstream).array() * (1.0 - cache.h.array().square()))
                            .matrix();
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw1(
        grad.data(), hidden, in);
    gw1 += dpre * x.transpose();
    grad.segment(Eigen::Index(hidden) * in, hidden) += dpre;
  }

  /// Scaled-normal weights, zero biases, output layer scaled by `out_scale`.
  Vector init(Rng& rng, double out_scale) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector p = Vector::Zero(size());
    if (hidden == 0) {
      for (Eigen::Index i = 0; i < Eigen::Index(out) * in; ++i)
        p[i] = out_scale * normal(rng) / std::sqrt(double(in));
      return p;
    }
    for (Eigen::Index i = 0; i < Eigen::Index(hidden) * in; ++i)
      p[i] = normal(rng) / std::sqrt(double(in));
    const Eigen::Index w2_off = Eigen::Index(hidden) * in + hidden;
    for (Eigen::Index i = 0; i < Eigen::Index(out) * hidden; ++i)
      p[w2_off + i] = out_scale * normal(rng) / std::sqrt(double(hidden));
    return p;
  }
};

struct PolicyShape {
  int state_dim = 1;
  int action_dim = 1;
  int hidden = 32;  ///< 0 selects a linear mean
  double log_std_min = -5.0;
  double log_std_max = 2.0;

  Mlp mean_net() const { return Mlp{state_dim, hidden, action_dim}; }
  Eigen::Index size() const { return mean_net().size() + action_dim; }
  Eigen::Index log_std_offset() const { return mean_net().size(); }

  bool operator==(const PolicyShape&) const = default;
};

/// Flat policy parameters: mean network followed by one log standard
/// deviation per action dimension.
struct GaussianPolicy {
  PolicyShape shape;
  Vector params;

  static GaussianPolicy zeros(const PolicyShape& shape) {
    return GaussianPolicy{shape, Vector::Zero(shape.size())};
  }

  static GaussianPolicy random(const PolicyShape& shape, Rng& rng, double log_std_init) {
    GaussianPolicy pol{shape, Vector::Zero(shape.size())};
    pol.params.head(shape.mean_net().size()) = shape.mean_net().init(rng, 0.01);
    pol.params.tail(shape.action_dim).setConstant(log_std_init);
    pol.clamp_log_std();
    return pol;
  }

  Eigen::Index dim() const { return params.size(); }

  auto log_std() const { return params.tail(shape.action_dim); }

  void clamp_log_std() {
    params.tail(shape.action_dim) =
        params.tail(shape.action_dim).cwiseMax(shape.log_std_min).cwiseMin(shape.log_std_max);
  }

  Vector mean(const Vector& state) const {
    return shape.mean_net().forward(params.head(shape.mean_net().size()), state);
  }

  /// Samples from N(mean(state), diag(exp(log_std))^2), or returns the mean.
  Vector act(const Vector& state, Rng& rng, bool deterministic = false) const {
    Vector a = mean(state);
    if (deterministic) return a;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index j = 0; j < a.size(); ++j) a[j] += std::exp(log_std()[j]) * normal(rng);
    return a;
  }

  double log_prob(const Vector& state, const Vector& action) const {
    const Vector mu = mean(state);
    const auto ls = log_std();
    double lp = 0.0;
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      const double z = (action[j] - mu[j]) * std::exp(-ls[j]);
      lp += -0.5 * z * z - ls[j] - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return lp;
  }

  /// Gradient of log pi(action | state) with respect to all parameters.
  Vector log_prob_grad(const Vector& state, const Vector& action) const {
    Vector grad = Vector::Zero(dim());
    add_log_prob_grad(state, action, 1.0, grad);
    return grad;
  }

  /// grad += scale * d log pi / d params.
  void add_log_prob_grad(const Vector& state, const Vector& action, double scale,
                         Eigen::Ref<Vector> grad) const {
    const Mlp net = shape.mean_net();
    Mlp::Cache cache;
    const Vector mu = net.forward(params.head(net.size()), state, &cache);
    const auto ls = log_std();
    Vector dmu(mu.size());
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      const double inv_var = std::exp(-2.0 * ls[j]);
      const double diff = action[j] - mu[j];
      dmu[j] = scale * diff * inv_var;
      grad[shape.log_std_offset() + j] += scale * (diff * diff * inv_var - 1.0);
    }
    net.backward(params.head(net.size()), state, cache, dmu, grad.head(net.size()));
  }
};

/// Value function with one output per objective.
struct Critic {
  Mlp net;
  Vector params;

  static Critic random(int state_dim, int hidden, int num_objectives, Rng& rng) {
    Mlp net{state_dim, hidden, num_objectives};
    Vector p = net.init(rng, 0.0);
    return Critic{net, std::move(p)};
  }

  static Critic zeros(int state_dim, int hidden, int num_objectives) {
    Mlp net{state_dim, hidden, num_objectives};
    return Critic{net, Vector::Zero(net.size())};
  }

  Vector value(const Vector& state) const { return net.forward(params, state); }
};

/// Small Adam optimizer over a flat vector. `descend` minimizes, otherwise
/// the step ascends the gradient.
struct Adam {
  double lr;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Vector m1;
  Vector m2;
  int t = 0;

  void step(Vector& params, const Vector& grad, bool descend) {
    if (m1.size() != params.size()) {
      m1 = Vector::Zero(params.size());
      m2 = Vector::Zero(params.size());
    }
    ++t;
    m1 = beta1 * m1 + (1.0 - beta1) * grad;
    m2 = beta2 * m2 + (1.0 - beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1, t);
    const double c2 = 1.0 - std::pow(beta2, t);
    const Vector delta =
        (lr * (m1 / c1).array() / ((m2 / c2).array().sqrt() + eps)).matrix();
    if (descend)
      params -= delta;
    else
      params += delta;
  }
};

/// Component-wise generalized advantage estimation. `values` holds V(s_t)
/// per step; `bootstrap` is V(s_T) after the last step (zero if terminal).
inline std::vector<ObjectiveVector> gae(const std::vector<ObjectiveVector>& rewards,
                                        const std::vector<ObjectiveVector>& values,
                                        const ObjectiveVector& bootstrap, double gamma,
                                        double lambda) {
  require(rewards.size() == values.size(), "gae: rewards and values differ in length");
  std::vector<ObjectiveVector> adv(rewards.size());
  ObjectiveVector running = ObjectiveVector::Zero(bootstrap.size());
  ObjectiveVector next_value = bootstrap;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    const ObjectiveVector delta = rewards[i] + gamma * next_value - values[i];
    running = delta + gamma * lambda * running;
    adv[i] = running;
    next_value = values[i];
  }
  return adv;
}

inline std::vector<ObjectiveVector> gae(const Trajectory& traj, const Critic& critic, double gamma,
                                        double lambda) {
  std::vector<ObjectiveVector> rewards, values;
  for (const auto& tr : traj) {
    rewards.push_back(tr.reward);
    values.push_back(critic.value(tr.state));
  }
  const ObjectiveVector bootstrap = traj.empty() || traj.back().terminal
                                        ? ObjectiveVector::Zero(critic.net.out)
                                        : ObjectiveVector(critic.value(traj.back().next_state));
  return gae(rewards, values, bootstrap, gamma, lambda);
}

/// Steps collected under one policy snapshot. `advantages` are what the
/// surrogate consumes (normalized per objective when enabled); `returns` are
/// the critic's regression targets.
struct RolloutBatch {
  std::vector<Vector> states;
  std::vector<Vector> actions;  ///< raw sampled actions, before clamping
  std::vector<double> log_probs;
  std::vector<ObjectiveVector> advantages;
  std::vector<ObjectiveVector> returns;
  std::vector<ObjectiveVector> episode_returns;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
};

/// Zero mean, unit variance per objective.
inline void normalize_advantages(std::vector<ObjectiveVector>& adv) {
  if (adv.size() < 2) return;
  const auto m = adv.front().size();
  ObjectiveVector mean = ObjectiveVector::Zero(m), sq = ObjectiveVector::Zero(m);
  for (const auto& a : adv) mean += a;
  mean /= double(adv.size());
  for (const auto& a : adv) sq += (a - mean).cwiseAbs2();
  const ObjectiveVector std = (sq / double(adv.size())).cwiseSqrt();
  for (auto& a : adv) a = ((a - mean).array() / (std.array() + 1e-8)).matrix();
}

struct BatchOptions {
  int episodes = 32;
  double gamma = 0.99;
  double lambda = 0.95;
  bool normalize = false;
};

inline RolloutBatch collect_batch(const Environment& env, const GaussianPolicy& policy,
                                  const Critic& critic, const BatchOptions& opt, Rng& rng) {
  RolloutBatch batch;
  std::uniform_int_distribution<std::uint64_t> seed_dist;
  for (int ep = 0; ep < opt.episodes; ++ep) {
    std::vector<Vector> raw;
    auto sample = [&](const Vector& s) {
      Vector a = policy.act(s, rng);
      raw.push_back(a);
      return a;
    };
    const Trajectory traj = rollout(env, sample, seed_dist(rng));
    const auto adv = gae(traj, critic, opt.gamma, opt.lambda);
    for (std::size_t t = 0; t < traj.size(); ++t) {
      batch.states.push_back(traj[t].state);
      batch.actions.push_back(raw[t]);
      batch.log_probs.push_back(policy.log_prob(traj[t].state, raw[t]));
      batch.returns.push_back(adv[t] + critic.value(traj[t].state));
      batch.advantages.push_back(adv[t]);
    }
    batch.episode_returns.push_back(mo_return(traj, env.spec().gamma));
  }
  if (opt.normalize) normalize_advantages(batch.advantages);
  return batch;
}

/// Row i is the batch average of grad log pi * advantage_i: the gradient of
/// objective i's surrogate at the collecting parameters.
inline Matrix estimate_gradient_set(const GaussianPolicy& policy, const RolloutBatch& batch) {
  require(!batch.empty(), "estimate_gradient_set: empty batch");
  const auto m = batch.advantages.front().size();
  Matrix grads = Matrix::Zero(m, policy.dim());
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const Vector g = policy.log_prob_grad(batch.states[t], batch.actions[t]);
    grads.noalias() += batch.advantages[t] * g.transpose();
  }
  grads /= double(batch.size());
  require(grads.allFinite(), "estimate_gradient_set: non-finite gradient");
  return grads;
}

struct PpoOptions {
  double clip_eps = 0.2;
  int epochs = 10;
  double lr = 3e-3;
  double critic_lr = 1e-2;
};

/// Gradient of the clipped surrogate mean_t min(r_t A_t, clip(r_t) A_t).
inline Vector clipped_surrogate_grad(const GaussianPolicy& policy, const RolloutBatch& batch,
                                     const std::vector<double>& scalar_adv, double clip_eps) {
  Vector grad = Vector::Zero(policy.dim());
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const double a = scalar_adv[t];
    if (a == 0.0) continue;
    const double ratio = std::exp(policy.log_prob(batch.states[t], batch.actions[t]) -
                                  batch.log_probs[t]);
    const bool clipped = (a > 0.0 && ratio > 1.0 + clip_eps) || (a < 0.0 && ratio < 1.0 - clip_eps);
    if (clipped) continue;
    policy.add_log_prob_grad(batch.states[t], batch.actions[t], ratio * a, grad);
  }
  return grad / double(batch.size());
}

/// Clipped-surrogate ascent on omega . advantage and critic regression onto
/// the per-objective return targets.
inline std::pair<GaussianPolicy, Critic> ppo_update(const GaussianPolicy& policy,
                                                    const Critic& critic,
                                                    const RolloutBatch& batch,
                                                    const WeightVector& omega,
                                                    const PpoOptions& opt) {
  require(!batch.empty(), "ppo_update: empty batch");
  const Vector& w = omega.values();
  require(w.size() == batch.advantages.front().size(), "ppo_update: weight length != m");
  require(w.minCoeff() >= -1e-6 && std::abs(w.sum() - 1.0) <= 1e-6,
          "ppo_update: omega is not on the simplex");

  std::vector<double> scalar(batch.size());
  for (std::size_t t = 0; t < batch.size(); ++t) scalar[t] = w.dot(batch.advantages[t]);

  GaussianPolicy pol = policy;
  Adam adam{opt.lr};
  for (int e = 0; e < opt.epochs; ++e) {
    const Vector g = clipped_surrogate_grad(pol, batch, scalar, opt.clip_eps);
    adam.step(pol.params, g, /*descend=*/false);
    pol.clamp_log_std();
  }

  Critic cr = critic;
  Adam cadam{opt.critic_lr};
  for (int e = 0; e < opt.epochs; ++e) {
    Vector g = Vector::Zero(cr.params.size());
    for (std::size_t t = 0; t < batch.size(); ++t) {
      Mlp::Cache cache;
      const Vector v = cr.net.forward(cr.params, batch.states[t], &cache);
      cr.net.backward(cr.params, batch.states[t], cache, v - batch.returns[t], g);
    }
    cadam.step(cr.params, g / double(batch.size()), /*descend=*/true);
  }
  require(pol.params.allFinite() && cr.params.allFinite(), "ppo_update: non-finite parameters");
  return {std::move(pol), std::move(cr)};
}

/// Discounted return of the deterministic (mean-action) policy for each of
/// `episodes` episodes, reset with seeds 0..episodes-1.
inline std::vector<ObjectiveVector> evaluate_episodes(const Environment& env,
                                                      const GaussianPolicy& policy, int episodes) {
  require(episodes >= 1, "evaluate_policy: need at least one episode");
  std::vector<ObjectiveVector> out;
  out.reserve(episodes);
  Rng unused(0);
  auto mean_action = [&](const Vector& s) { return policy.act(s, unused, true); };
  for (int ep = 0; ep < episodes; ++ep)
    out.push_back(mo_return(rollout(env, mean_action, std::uint64_t(ep)), env.spec().gamma));
  return out;
}

/// Mean of `evaluate_episodes`.
inline ObjectiveVector evaluate_policy(const Environment& env, const GaussianPolicy& policy,
                                       int episodes) {
  ObjectiveVector total = ObjectiveVector::Zero(env.spec().num_objectives);
  for (const auto& r : evaluate_episodes(env, policy, episodes)) total += r;
  return total / double(episodes);
}

}  // namespace pa2d
