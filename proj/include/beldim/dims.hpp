#pragma once

#include "beldim/bellman.hpp"

namespace beldim {

struct SearchOptions {
  long long node_cap = 10000000;
};

// Longest-sequence search result. witness lists element indices in order;
// cert_row[k] is the function certifying independence of witness[k] from its
// prefix at threshold eps_prime. exact is false when the node budget was
// exhausted (value is then a lower bound).
struct SequenceCertificate {
  int value = 0;
  double eps = 0.0;
  double eps_prime = 0.0;
  std::vector<int> witness;
  std::vector<int> cert_row;
  bool exact = true;
  long long nodes = 0;
};

// Core search. E(g, j) is the value of function g on element j (an expectation
// for distribution families, a point evaluation for Dirac families). Element j
// is independent of a prefix set C at threshold t when some row g has
// sum_{i in C} E(g,i)^2 <= t^2 and |E(g,j)| > t. The search maximizes sequence
// length over the candidate thresholds {|E(g,j)| - 1e-9*(1+|E(g,j)|) : > eps}
// and eps itself.
SequenceCertificate longest_independent_sequence(const Mat& E, double eps,
                                                 const SearchOptions& opts = {});

bool verify_sequence_certificate(const Mat& E, double eps, const SequenceCertificate& cert);

// Distributional Eluder dimension of the function rows over the family columns.
inline SequenceCertificate de_dimension(const Mat& E, double eps, const SearchOptions& opts = {}) {
  return longest_independent_sequence(E, eps, opts);
}

// Eluder dimension of a point class. values(g, x) is g's value at point x.
// The signed independence condition g1(z) - g2(z) > t over ordered pairs is
// run as |d(z)| > t over unordered differences; certificates carry pairs
// oriented so the signed condition holds.
struct EluderCertificate {
  SequenceCertificate seq;
  std::vector<std::pair<int, int>> cert_pair;
};
EluderCertificate eluder_dimension(const Mat& values, double eps, const SearchOptions& opts = {});

bool verify_eluder_certificate(const Mat& values, double eps, const EluderCertificate& cert);

enum class RollinKind { Greedy, Dirac };  // the D_F and D_Delta families

// Bellman-Eluder dimension: max over steps of the distributional Eluder
// dimension of the step-h residual class over the chosen family. v_type uses
// the greedy-action residual over state families.
struct BeResult {
  int value = 0;
  int argmax_h = 0;
  std::vector<SequenceCertificate> per_step;
  std::vector<std::vector<int>> residual_member;  // [h] -> member id per residual row
  std::vector<std::vector<int>> family_member;    // [h] -> member id (Greedy) or point id (Dirac)
};
BeResult be_dimension(const TabularMdp& mdp, const FunctionClass& fc, RollinKind family,
                      double eps, const SearchOptions& opts = {});
BeResult vbe_dimension(const TabularMdp& mdp, const FunctionClass& fc, RollinKind family,
                       double eps, const SearchOptions& opts = {});

// Expectation matrix the BE search runs on at step h: rows index deduplicated
// residual functions, columns the family distributions, entries E_nu[g].
// Index maps match BeResult's residual_member / family_member, so per-step
// certificates re-verify directly against this matrix.
struct BeMatrix {
  Mat E;
  std::vector<int> residual_member;
  std::vector<int> family_member;
};
BeMatrix be_expectation_matrix(const TabularMdp& mdp, const FunctionClass& fc, int h,
                               RollinKind family, bool v_type);

// Average Bellman error matrix at step h: M(i, j) is member i's residual
// averaged over the roll-in of member j's greedy policy.
struct BellmanErrorMatrix {
  int h = 0;
  Mat M;
};
BellmanErrorMatrix bellman_error_matrix(const TabularMdp& mdp, const FunctionClass& fc, int h,
                                        bool v_type);

// Count of singular values above tol * sigma_max; zero matrix has rank 0.
int numeric_rank(const Mat& M, double tol = 1e-8);

// Bellman rank: max over steps of the numeric rank of the error matrix.
// zeta[h] is the norm diagnostic from the SVD factorization (max row norms of
// U*sqrt(S) and V*sqrt(S) multiplied).
struct RankResult {
  int value = 0;
  std::vector<int> per_step;
  std::vector<Vec> singular_values;
  std::vector<double> zeta;
  std::vector<BellmanErrorMatrix> matrices;
};
RankResult bellman_rank(const TabularMdp& mdp, const FunctionClass& fc, bool v_type = false,
                        double tol = 1e-8);

// Effective dimension of a finite vector set: smallest n such that the maximum
// over size-n multisets of log det(I + (1/eps^2) sum x_i x_i^T) is <= n/e.
// The maximum is certified exactly by branch and bound (determinant-lemma
// upper bound) for |X| <= 12 and n <= 256 within the node budget; otherwise a
// greedy scan reports a flagged lower bound.
struct EffDimResult {
  int value = 0;
  bool exact = true;
  int lower_bound = 0;
  int greedy_value = 0;
  long long nodes = 0;
};
EffDimResult effective_dimension(const std::vector<Vec>& xs, double eps,
                                 const SearchOptions& opts = {});

}  // namespace beldim
