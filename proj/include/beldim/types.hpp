#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace beldim {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using VecI = Eigen::VectorXi;

// Deterministic RNG contract: mt19937_64 (standardized output sequence) with
// fixed mappings below. std::*_distribution is never used; its output is
// implementation-defined and would break byte-reproducibility of runs.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(uint64_t seed) : engine(seed) {}

  // uniform double in [0, 1), 53 bits
  double uniform01() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    int v = static_cast<int>(uniform01() * n);
    return v < n ? v : n - 1;
  }

  // index i with probability w[i]/sum(w); CDF scan, ties broken low
  int categorical(const Vec& w) {
    const double total = w.sum();
    if (total <= 0.0) throw std::invalid_argument("categorical: weights sum to zero");
    double u = uniform01() * total;
    double acc = 0.0;
    for (int i = 0; i < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    return static_cast<int>(w.size()) - 1;
  }

  // Exp(1) sample, used for Dirichlet rows
  double exponential() {
    double u = uniform01();
    return -std::log1p(-u);
  }
};

// argmax over a row vector, lowest index wins ties
inline int argmax_low(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int best = 0;
  for (int j = 1; j < row.size(); ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

// per-state max over actions of an S x A table
inline Vec row_max(const Mat& table) {
  return table.rowwise().maxCoeff();
}

inline constexpr double kProbTol = 1e-12;
inline constexpr double kDedupTol = 1e-12;

}  // namespace beldim
