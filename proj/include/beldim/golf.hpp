#pragma once

#include "beldim/bellman.hpp"

namespace beldim {

enum class ExecMode { MonteCarlo, ExactLoss };
enum class RunStatus { Ok, EmptyVersionSpace, MaxPhases };

inline const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::EmptyVersionSpace: return "empty_version_space";
    case RunStatus::MaxPhases: return "max_phases";
  }
  return "unknown";
}

struct GolfConfig {
  int K = 100;
  double beta = -1.0;  // negative: use default_golf_beta
  ExecMode mode = ExecMode::MonteCarlo;
  uint64_t seed = 0;
  std::vector<std::vector<Mat>> aux_layers;  // empty: reuse the class's own layers
};

// 2 * log(|F union G| * K * H * 100) with |F union G| counted as members plus
// distinct auxiliary tables.
double default_golf_beta(const FunctionClass& fc, const std::vector<std::vector<Mat>>& aux,
                         int K);

struct GolfEpisode {
  int k;  // 1-based
  int f_index;
  double opt_value;
  double policy_value;
  double regret;
  double cum_regret;
  int b_size;
  bool qstar_in_b;
};

struct GolfResult {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::vector<GolfEpisode> episodes;
  int out_member = -1;   // uniform draw over executed episodes
  int best_member = -1;  // best exact policy value among executed
  double out_value = 0.0;
  double best_value = 0.0;
  double vstar = 0.0;
  int qstar_index = -1;
  double beta_used = 0.0;
};

// Members whose squared loss at every step is within beta of the best
// auxiliary-table loss against the same next-step table. Standalone
// recomputation from the dataset; run_golf maintains the same sets
// incrementally.
VersionSpace confidence_set(const TabularMdp& mdp, const FunctionClass& fc,
                            const std::vector<std::vector<Mat>>& aux_layers, const Dataset& data,
                            double beta);

// argmax over alive members of E_init[max_a f_0]; lowest index wins ties; -1
// when the version space is empty.
int optimistic_select(const TabularMdp& mdp, const FunctionClass& fc, const VersionSpace& B);

// Optimistic elimination with append-only datasets: each episode selects the
// optimistic survivor, executes its greedy policy, and appends one tuple per
// step. ExactLoss mode replaces empirical losses with their conditional
// expectation under the executed policies' occupancies.
GolfResult run_golf(const TabularMdp& mdp, const FunctionClass& fc, const GolfConfig& cfg);

// Variant for state-level guarantees: each episode collects, for every step h,
// one tuple by rolling in with the selected policy and taking a uniform action
// at h. PAC only; the regret columns are reported as 0.
GolfResult run_vgolf(const TabularMdp& mdp, const FunctionClass& fc, const GolfConfig& cfg);

}  // namespace beldim
