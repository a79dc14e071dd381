#pragma once

#include "beldim/golf.hpp"

namespace beldim {

struct OliveConfig {
  double zeta_act = 0.1;
  double zeta_elim = 0.05;
  long long n_act = 1000;
  long long n_elim = 1000;
  ExecMode mode = ExecMode::MonteCarlo;
  int max_phases = 1000;
  uint64_t seed = 0;
};

// zeta_act = 2 eps / H, zeta_elim = eps / (2 H sqrt(d)), n_act = H^2 iota /
// eps^2, n_elim = H^2 d log(n_members) iota / eps^2 (times A for the v-type
// variant), iota = c log(H d / (delta eps)). n_scale divides the episode
// counts, zeta_scale multiplies both thresholds. max_phases = 2 (d H + 1).
OliveConfig olive_config_from_theorem(double eps, int d, int H, int n_members, int A,
                                      double delta = 0.01, double c = 4.0, double n_scale = 1.0,
                                      double zeta_scale = 1.0);

struct OlivePhase {
  int phase;  // 1-based
  int f_index;
  std::vector<double> est_errors;  // per step
  double sum_err;
  int activated_step;    // -1 on the terminating phase
  bool anomaly_argmax;   // no single step reached zeta_act; argmax used
  int eliminated;
  int survivors;  // after elimination
};

struct OliveResult {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::vector<OlivePhase> phases;
  std::vector<int> policy_member;             // executed member per phase
  std::vector<std::vector<int>> activations;  // [h] -> phases (1-based) activated at h
  int out_member = -1;  // terminating phase's member; last executed on abort
  double out_value = 0.0;
  double vstar = 0.0;
  int qstar_index = -1;
  bool qstar_survived = true;
  long long episodes_used = 0;
};

// Phased elimination: each phase selects the optimistic survivor, estimates
// its average Bellman error at every step (n_act fresh episodes, or exact
// occupancies in ExactLoss mode), terminates when the sum is at most
// H*zeta_act, otherwise activates the smallest qualifying step, refreshes
// n_elim episodes, and keeps survivors whose estimated error at that step is
// at most zeta_elim in absolute value.
OliveResult run_olive(const TabularMdp& mdp, const FunctionClass& fc, const OliveConfig& cfg);

// V-type variant: elimination episodes take a uniform action at the activated
// step and survivors are scored with the importance-weighted estimator;
// activation uses the strict > comparison.
OliveResult run_volive(const TabularMdp& mdp, const FunctionClass& fc, const OliveConfig& cfg);

struct AuditStep {
  int h;
  std::vector<int> phase;
  std::vector<uint8_t> independent;
  bool all_certified = true;
};

struct AuditReport {
  double threshold = 0.0;
  std::vector<AuditStep> steps;  // only steps with activations
  bool all_certified = true;
};

// Re-verifies that, at every step, the roll-in distributions of the phases
// activated there form an independent sequence with respect to the residual
// class at the given threshold (each element independent of its predecessors).
AuditReport audit_independence(const TabularMdp& mdp, const FunctionClass& fc,
                               const OliveResult& result, bool v_type, double threshold);

}  // namespace beldim
