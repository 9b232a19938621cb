#pragma once

// Min-norm common ascent direction over a set of per-objective gradients.

#include <algorithm>
#include <numeric>
#include <vector>

#include "pa2d/core.hpp"

namespace pa2d {

/// A point on the probability simplex.
class WeightVector {
 public:
  WeightVector() = default;

  /// Throws unless `w` is nonnegative and sums to one within `tol`.
  static WeightVector checked(const Vector& w, double tol = 1e-9) {
    require(w.size() >= 1 && w.allFinite(), "weight vector must be finite and non-empty");
    require(w.minCoeff() >= -tol, "weight vector has a negative component");
    require(std::abs(w.sum() - 1.0) <= tol, "weight vector does not sum to one");
    WeightVector out;
    out.w_ = w;
    return out;
  }

  static WeightVector uniform(int m) { return checked(uniform_weights(m)); }

  static WeightVector basis(int m, int i) {
    Vector e = Vector::Zero(m);
    e[i] = 1.0;
    return checked(e);
  }

  const Vector& values() const { return w_; }
  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }

 private:
  Vector w_;
};

/// Euclidean projection onto {w : w >= 0, sum w = 1} by the sort-threshold
/// rule.
inline WeightVector project_to_simplex(const Vector& v) {
  require(v.size() >= 1 && v.allFinite(), "project_to_simplex: input must be finite");
  const auto n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  Vector w = (v.array() - theta).max(0.0);
  // Renormalize away rounding so the simplex invariant holds to 1e-12.
  w /= w.sum();
  return WeightVector::checked(w);
}

struct AscentResult {
  WeightVector alpha;
  Vector direction;     ///< sum_i alpha_i g_i
  double squared_norm;  ///< |direction|^2
  bool stationary;
  int iterations;
};

struct MinNormOptions {
  double tol = 1e-10;  ///< stop when |alpha_{t+1} - alpha_t|_inf < tol
  int max_iters = 10'000;
  /// Negative means the scale-aware default 1e-8 * (1 + max_i |g_i|^2).
  double stationarity_eps = -1.0;
};

inline double default_stationarity_eps(const Matrix& grads) {
  return 1e-8 * (1.0 + grads.rowwise().squaredNorm().maxCoeff());
}

/// Pairwise inner products of the gradient rows, G G^T (m x m).
inline Matrix gram_matrix(const Matrix& grads) { return grads * grads.transpose(); }

namespace detail {

// Exact minimizer of a^T K a on the face spanned by `support`, or nothing if
// that minimizer is infeasible or violates the KKT conditions on the rest.
inline bool polish_on_support(const Matrix& gram, const std::vector<int>& support, Vector& alpha) {
  const int m = static_cast<int>(gram.rows());
  const int s = static_cast<int>(support.size());
  Matrix kkt = Matrix::Zero(s + 1, s + 1);
  Vector rhs = Vector::Zero(s + 1);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) kkt(a, b) = gram(support[a], support[b]);
    kkt(a, s) = 1.0;
    kkt(s, a) = 1.0;
  }
  rhs[s] = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  if (!sol.allFinite()) return false;
  Vector cand = Vector::Zero(m);
  for (int a = 0; a < s; ++a) {
    if (sol[a] < -1e-12) return false;
    cand[support[a]] = std::max(sol[a], 0.0);
  }
  const double total = cand.sum();
  if (!(total > 0.0)) return false;
  cand /= total;
  if ((kkt * sol - rhs).cwiseAbs().maxCoeff() >
      1e-9 * (1.0 + gram.cwiseAbs().maxCoeff()))
    return false;
  const Vector grad = gram * cand;
  const double value = cand.dot(grad);
  const double scale = 1.0 + gram.diagonal().maxCoeff();
  for (int i = 0; i < m; ++i)
    if (grad[i] < value - 1e-10 * scale) return false;
  alpha = cand;
  return true;
}

}  // namespace detail

/// Solves min_alpha |sum_i alpha_i g_i|^2 over the simplex, where g_i is row i
/// of `grads` (m x d). Projected gradient on the m x m Gram matrix, started
/// from the uniform point, followed by an exact solve on the detected support.
inline AscentResult min_norm_direction(const Matrix& grads, const MinNormOptions& opt = {}) {
  const int m = static_cast<int>(grads.rows());
  require(m >= 2, "min_norm_direction: need at least two objectives");
  require(grads.allFinite(), "min_norm_direction: gradients must be finite");

  const Matrix gram = gram_matrix(grads);
  const double lipschitz =
      gram.diagonal().maxCoeff() + gram.cwiseAbs().rowwise().sum().maxCoeff();

  Vector alpha = uniform_weights(m);
  int iters = 0;
  if (lipschitz > 0.0) {
    const double step = 1.0 / (2.0 * lipschitz);
    for (; iters < opt.max_iters; ++iters) {
      const Vector next = project_to_simplex(alpha - step * 2.0 * (gram * alpha)).values();
      const double delta = (next - alpha).cwiseAbs().maxCoeff();
      alpha = next;
      if (delta < opt.tol) {
        ++iters;
        break;
      }
    }

    std::vector<int> support;
    for (int i = 0; i < m; ++i)
      if (alpha[i] > 1e-9) support.push_back(i);
    Vector polished;
    bool found = !support.empty() && detail::polish_on_support(gram, support, polished);
    // Small m: if the iterate's support was wrong, check every face.
    for (unsigned mask = 1; !found && m <= 6 && mask < (1u << m); ++mask) {
      support.clear();
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) support.push_back(i);
      found = detail::polish_on_support(gram, support, polished);
    }
    if (found && polished.dot(gram * polished) <=
                     alpha.dot(gram * alpha) + 1e-12 * (1.0 + gram.diagonal().maxCoeff()))
      alpha = polished;
  }

  AscentResult out{WeightVector::checked(alpha, 1e-9), grads.transpose() * alpha, 0.0, false,
                   iters};
  out.squared_norm = out.direction.squaredNorm();
  const double eps =
      opt.stationarity_eps >= 0.0 ? opt.stationarity_eps : default_stationarity_eps(grads);
  out.stationary = out.squared_norm <= eps;
  return out;
}

/// Closed-form alpha_1 for two objectives; the symmetric point 0.5 when the
/// gradients coincide.
inline double analytic_two_objective_alpha(const Vector& g1, const Vector& g2) {
  require(g1.size() == g2.size(), "analytic_two_objective_alpha: size mismatch");
  require(g1.allFinite() && g2.allFinite(), "analytic_two_objective_alpha: non-finite input");
  const Vector diff = g1 - g2;
  if (diff.norm() < 1e-12) return 0.5;
  const double raw = (g2 - g1).dot(g2) / diff.squaredNorm();
  return std::clamp(raw, 0.0, 1.0);
}

inline bool is_pareto_stationary(const Matrix& grads, double eps = -1.0) {
  MinNormOptions opt;
  opt.stationarity_eps = eps;
  return min_norm_direction(grads, opt).stationary;
}

}  // namespace pa2d
