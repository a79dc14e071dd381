#pragma once

#include <optional>

#include "beldim/types.hpp"

namespace beldim {

// Finite-horizon tabular MDP. Steps are 0-based internally (h in [0, H)).
// transition[h] is (S*A) x S row-stochastic, row index s*A + a.
// reward[h] is S x A. init is a distribution over S.
struct TabularMdp {
  int H = 0, S = 0, A = 0;
  std::vector<Mat> transition;
  std::vector<Mat> reward;
  Vec init;

  int sa(int s, int a) const { return s * A + a; }
};

// Deterministic nonstationary policy: action[h][s].
struct Policy {
  std::vector<VecI> action;
};

struct Step {
  int s, a;
  double r;
  int s_next;
};

using Trajectory = std::vector<Step>;

enum class DistKind { OverStateAction, OverState };

// Probability weights over S*A pairs (flat, index s*A+a) or over S.
struct StepDistribution {
  DistKind kind = DistKind::OverStateAction;
  Vec w;
};

struct MdpValidation {
  bool ok = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;  // e.g. max achievable reward sum > 1
};

MdpValidation validate_mdp(const TabularMdp& mdp);

// Per-step optimal tables: q[h] is S x A with q[H] implicitly zero.
struct QTuple {
  std::vector<Mat> q;
};

// Backward induction; max residual of the fixed point is <= 1e-12 by construction.
QTuple optimal_q(const TabularMdp& mdp);

double optimal_value(const TabularMdp& mdp);

// Exact V^pi at the initial distribution.
double policy_value(const TabularMdp& mdp, const Policy& pi);

// Per-step state-value tables V^pi_h(s) for h in [0, H).
std::vector<Vec> policy_state_values(const TabularMdp& mdp, const Policy& pi);

// Forward DP: occupancy[h] is the distribution of (s_h, a_h) under pi.
std::vector<StepDistribution> occupancy(const TabularMdp& mdp, const Policy& pi);

// State marginal of an OverStateAction distribution.
Vec state_marginal(const StepDistribution& d, int S, int A);

Trajectory simulate_episode(const TabularMdp& mdp, const Policy& pi, Rng& rng);

// Follows pi except at step h_uniform (0-based) where the action is uniform;
// pi resumes from step h_uniform+1.
Trajectory simulate_with_uniform_action_at(const TabularMdp& mdp, const Policy& pi,
                                           int h_uniform, Rng& rng);

}  // namespace beldim
