#pragma once

#include "beldim/function_class.hpp"

namespace beldim {

// One-step backup: (r_h + P_h max_a' next)(s,a). next is S x A; the top call
// passes the zero table for the step above the horizon.
Mat apply_bellman(const TabularMdp& mdp, const Mat& next, int h);

// f_h - backup(f_{h+1}), an S x A table.
Mat q_residual(const TabularMdp& mdp, const QTuple& f, int h);

// Residual evaluated at the greedy action of f_h: s -> (f_h - backup)(s, pi_f(s)).
Vec v_residual(const TabularMdp& mdp, const QTuple& f, int h);

// Residual of f at step h averaged over the step-h occupancy of pi (exact).
double avg_bellman_error(const TabularMdp& mdp, const QTuple& f, const Policy& pi, int h);

// Same with the v-type residual against the state marginal of pi's occupancy.
double v_avg_bellman_error(const TabularMdp& mdp, const QTuple& f, const Policy& pi, int h);

// Residuals of every member at every step, materialized once per class.
struct ResidualCache {
  std::vector<std::vector<Mat>> q;  // [member][h], S x A
  std::vector<std::vector<Vec>> v;  // [member][h], S
};
ResidualCache build_residual_cache(const TabularMdp& mdp, const FunctionClass& fc);

struct Transition {
  int s, a;
  double r;
  int s_next;
};

// Per-step tuple storage. GOLF appends across episodes; OLIVE replaces per phase.
struct Dataset {
  std::vector<std::vector<Transition>> layers;

  explicit Dataset(int H = 0) : layers(H) {}
  void append(int h, const Transition& t) { layers[h].push_back(t); }
  void refresh(int h, std::vector<Transition> ts) { layers[h] = std::move(ts); }
  size_t size(int h) const { return layers[h].size(); }
};

// Sample mean of f_h(s,a) - r - max_a' f_{h+1}(s_next, a') over tuples; 0 on empty.
double estimate_bellman_error(const std::vector<Transition>& tuples, const QTuple& f, int h);

// Importance-weighted variant for uniform-action data at step h:
//   A * 1[a = greedy_{f_h}(s)] * (f_h(s,a) - r - max_a' f_{h+1}(s_next, a')).
double iw_estimate_bellman_error(const std::vector<Transition>& tuples, const QTuple& f, int h,
                                 int A);

// Sum (not mean) of squared empirical residuals of table xi against target
// built from zeta_next (zero table above the horizon); 0 on empty.
double squared_loss(const std::vector<Transition>& tuples, const Mat& xi, const Mat& zeta_next);

}  // namespace beldim
