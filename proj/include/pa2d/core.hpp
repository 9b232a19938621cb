#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pa2d {

/// Per-objective returns, rewards or expected returns. Length m.
using ObjectiveVector = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

inline bool all_finite(const Eigen::Ref<const Matrix>& x) { return x.allFinite(); }

/// Independent generator for one (seed, stream...) tuple. Results never
/// depend on the order in which streams are created or consumed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(c),    0x9e3779b9u};
  return Rng(seq);
}

inline Vector uniform_weights(int m) { return Vector::Constant(m, 1.0 / m); }

}  // namespace pa2d
