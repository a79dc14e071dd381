#pragma once

#include "beldim/mdp.hpp"

namespace beldim {

inline constexpr int kEnumerationCap = 100000;

// Finite class of per-step value tables. Members are deduplicated at
// construction (max-norm < 1e-12). layer_tables[h] holds the distinct step-h
// tables; member_layer[m][h] indexes into it. A class built from per-step
// factors keeps factored = true and members enumerate the cross product.
struct FunctionClass {
  int H = 0, S = 0, A = 0;
  std::vector<QTuple> members;
  std::vector<std::vector<Mat>> layer_tables;   // [h] -> distinct tables
  std::vector<std::vector<int>> member_layer;   // [member][h] -> layer table id
  bool factored = false;

  int size() const { return static_cast<int>(members.size()); }
};

FunctionClass make_class(int H, int S, int A, std::vector<QTuple> members);

// Cross product of per-step table lists (deduplicated per layer first).
// Throws if the product exceeds kEnumerationCap.
FunctionClass make_factored_class(int H, int S, int A, std::vector<std::vector<Mat>> layers);

// Range report for the nominal [0,1] normalization; out-of-range members are
// legal (several canonical instances live outside it) but flagged here.
struct RangeReport {
  double lo = 0.0, hi = 0.0;
  bool within_unit = true;
};
RangeReport validate_range(const FunctionClass& fc);

// Subset of members, bitset semantics.
struct VersionSpace {
  std::vector<uint8_t> alive;

  static VersionSpace full(int n) { return {std::vector<uint8_t>(n, 1)}; }
  int count() const {
    int c = 0;
    for (uint8_t b : alive) c += b;
    return c;
  }
  bool operator[](int i) const { return alive[i] != 0; }
};

// Greedy policy of a tuple; argmax ties resolve to the lowest action index.
Policy greedy_policy(const QTuple& f);

// Roll-in distributions at step h induced by the greedy policies of members.
// Deduplicated (L1 < 1e-12); kept_member[i] is the lowest member index whose
// roll-in distribution i represents. V-type takes the state marginal.
struct RollinFamily {
  std::vector<StepDistribution> dists;
  std::vector<int> kept_member;
};
RollinFamily rollin_family(const TabularMdp& mdp, const FunctionClass& fc, int h, DistKind kind);

// Point masses: one per (s,a) pair (q-type) or per state (v-type).
std::vector<StepDistribution> dirac_family(const TabularMdp& mdp, DistKind kind);

// Closure under the Bellman backup: top layer gets seeds_H plus the backup of
// the zero function; every other layer gets its seeds plus the backups of all
// tables one layer below. Values are clamped to [0,1] only when a backup
// exceeds 1 (reported via clamped). Realizability holds by construction when
// include_qstar is set.
struct ClosureResult {
  FunctionClass fc;
  bool clamped = false;
};
ClosureResult closure_class(const TabularMdp& mdp, const std::vector<std::vector<Mat>>& seeds,
                            bool include_qstar = true);

// max over members f and steps h of min distance from the Bellman backup of
// f_{h+1} to the step-h layer tables; 0 (within tolerance) iff the class is
// complete under the backup operator.
double completeness_defect(const TabularMdp& mdp, const FunctionClass& fc);

// Index of the member equal to optimal_q within tol (max-norm), or -1.
int find_member(const FunctionClass& fc, const QTuple& f, double tol = 1e-9);

}  // namespace beldim
