#include "beldim/golf.hpp"

#include <cmath>

namespace beldim {

namespace {

bool same_table(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff() < kDedupTol;
}

// Loss bookkeeping shared by the standalone confidence set and the runners.
// Rows at step h are the class's distinct step-h tables followed by auxiliary
// tables not already among them; columns are the distinct step-(h+1) tables
// (a single zero table at the horizon).
struct LossTables {
  int H, S, A;
  std::vector<std::vector<Mat>> rows;      // [h] row tables
  std::vector<std::vector<int>> aux_rows;  // [h] row ids eligible for the inf
  std::vector<std::vector<Mat>> cols;      // [h] next-step tables
  std::vector<std::vector<Vec>> col_vmax;  // [h][c] per-state max of cols[h][c]
  std::vector<Mat> loss;                   // [h] rows x cols, accumulated
  // exact mode: per (h, c), E[max_a' col(s',a')] and its square under P_h
  std::vector<std::vector<Mat>> col_pv, col_pv2;

  LossTables(const TabularMdp& mdp, const FunctionClass& fc,
             const std::vector<std::vector<Mat>>& aux, bool exact) {
    H = fc.H;
    S = fc.S;
    A = fc.A;
    rows.resize(H);
    aux_rows.resize(H);
    cols.resize(H);
    col_vmax.resize(H);
    loss.resize(H);
    col_pv.resize(H);
    col_pv2.resize(H);
    for (int h = 0; h < H; ++h) {
      rows[h] = fc.layer_tables[h];
      for (const Mat& g : aux[h]) {
        int found = -1;
        for (size_t i = 0; i < rows[h].size(); ++i)
          if (same_table(rows[h][i], g)) {
            found = static_cast<int>(i);
            break;
          }
        if (found < 0) {
          rows[h].push_back(g);
          found = static_cast<int>(rows[h].size()) - 1;
        }
        bool dup = false;
        for (int id : aux_rows[h]) dup = dup || id == found;
        if (!dup) aux_rows[h].push_back(found);
      }
      cols[h] = (h + 1 < H) ? fc.layer_tables[h + 1] : std::vector<Mat>{Mat::Zero(S, A)};
      for (const Mat& ct : cols[h]) col_vmax[h].push_back(row_max(ct));
      loss[h] = Mat::Zero(rows[h].size(), cols[h].size());
      if (exact) {
        for (size_t c = 0; c < cols[h].size(); ++c) {
          Vec v = col_vmax[h][c];
          Vec pv = mdp.transition[h] * v;
          Vec pv2 = mdp.transition[h] * v.cwiseProduct(v);
          Mat mpv(S, A), mpv2(S, A);
          for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
              mpv(s, a) = pv[mdp.sa(s, a)];
              mpv2(s, a) = pv2[mdp.sa(s, a)];
            }
          col_pv[h].push_back(mpv);
          col_pv2[h].push_back(mpv2);
        }
      }
    }
  }

  void add_tuple(int h, const Transition& t) {
    for (size_t c = 0; c < cols[h].size(); ++c) {
      const double vn = col_vmax[h][c][t.s_next];
      for (size_t r = 0; r < rows[h].size(); ++r) {
        double d = rows[h][r](t.s, t.a) - t.r - vn;
        loss[h](r, c) += d * d;
      }
    }
  }

  // one episode's exact contribution: weights over (s,a) at step h
  void add_occupancy(const TabularMdp& mdp, int h,
                     const std::vector<std::pair<int, double>>& support) {
    for (size_t c = 0; c < cols[h].size(); ++c)
      for (size_t r = 0; r < rows[h].size(); ++r) {
        double acc = 0.0;
        for (const auto& [sa, w] : support) {
          int s = sa / A, a = sa % A;
          double d = rows[h][r](s, a) - mdp.reward[h](s, a);
          acc += w * (d * d - 2.0 * d * col_pv[h][c](s, a) + col_pv2[h][c](s, a));
        }
        loss[h](r, c) += acc;
      }
  }

  // member m alive iff its loss is within beta of the auxiliary inf at every step
  bool member_ok(const FunctionClass& fc, int m, int h, double beta) const {
    int row = fc.member_layer[m][h];
    int col = (h + 1 < H) ? fc.member_layer[m][h + 1] : 0;
    double best = 1e300;
    for (int g : aux_rows[h]) best = std::min(best, loss[h](g, col));
    return loss[h](row, col) <= best + beta + 1e-12 * (1.0 + best);
  }

  VersionSpace version_space(const FunctionClass& fc, double beta) const {
    VersionSpace B = VersionSpace::full(fc.size());
    for (int m = 0; m < fc.size(); ++m)
      for (int h = 0; h < H && B.alive[m]; ++h)
        if (!member_ok(fc, m, h, beta)) B.alive[m] = 0;
    return B;
  }
};

std::vector<std::vector<Mat>> effective_aux(const FunctionClass& fc,
                                            const std::vector<std::vector<Mat>>& aux) {
  return aux.empty() ? fc.layer_tables : aux;
}

}  // namespace

double default_golf_beta(const FunctionClass& fc, const std::vector<std::vector<Mat>>& aux,
                         int K) {
  const auto& g = effective_aux(fc, aux);
  long long card = fc.size();
  for (const auto& layer : g) card += static_cast<long long>(layer.size());
  return 2.0 * std::log(static_cast<double>(card) * K * fc.H * 100.0);
}

VersionSpace confidence_set(const TabularMdp& mdp, const FunctionClass& fc,
                            const std::vector<std::vector<Mat>>& aux_layers, const Dataset& data,
                            double beta) {
  LossTables lt(mdp, fc, effective_aux(fc, aux_layers), false);
  for (int h = 0; h < fc.H; ++h)
    for (const Transition& t : data.layers[h]) lt.add_tuple(h, t);
  return lt.version_space(fc, beta);
}

int optimistic_select(const TabularMdp& mdp, const FunctionClass& fc, const VersionSpace& B) {
  int best = -1;
  double best_v = -1e300;
  for (int m = 0; m < fc.size(); ++m) {
    if (!B[m]) continue;
    double v = mdp.init.dot(row_max(fc.members[m].q[0]));
    if (best < 0 || v > best_v) {
      best = m;
      best_v = v;
    }
  }
  return best;
}

namespace {

GolfResult run_golf_impl(const TabularMdp& mdp, const FunctionClass& fc, const GolfConfig& cfg,
                         bool v_variant) {
  GolfResult res;
  const auto aux = effective_aux(fc, cfg.aux_layers);
  res.beta_used = cfg.beta < 0.0 ? default_golf_beta(fc, cfg.aux_layers, cfg.K) : cfg.beta;
  res.vstar = optimal_value(mdp);
  res.qstar_index = find_member(fc, optimal_q(mdp));

  Rng rng(cfg.seed);
  LossTables lt(mdp, fc, aux, cfg.mode == ExecMode::ExactLoss);

  std::vector<double> opt_value(fc.size());
  for (int m = 0; m < fc.size(); ++m) opt_value[m] = mdp.init.dot(row_max(fc.members[m].q[0]));
  std::vector<Policy> pol_cache(fc.size());
  std::vector<double> pv_cache(fc.size(), -1e300);
  std::vector<uint8_t> pol_ready(fc.size(), 0);
  auto policy_of = [&](int m) -> const Policy& {
    if (!pol_ready[m]) {
      pol_cache[m] = greedy_policy(fc.members[m]);
      pv_cache[m] = policy_value(mdp, pol_cache[m]);
      pol_ready[m] = 1;
    }
    return pol_cache[m];
  };

  double cum_regret = 0.0;
  for (int k = 1; k <= cfg.K; ++k) {
    VersionSpace B = lt.version_space(fc, res.beta_used);
    int f = optimistic_select(mdp, fc, B);
    if (f < 0) {
      res.status = RunStatus::EmptyVersionSpace;
      res.message = "confidence set empty at episode " + std::to_string(k);
      break;
    }
    const Policy& pi = policy_of(f);
    double pv = pv_cache[f];
    double regret = v_variant ? 0.0 : res.vstar - pv;
    cum_regret += regret;
    res.episodes.push_back({k, f, opt_value[f], pv, regret, cum_regret, B.count(),
                            res.qstar_index >= 0 && B[res.qstar_index]});

    if (cfg.mode == ExecMode::MonteCarlo) {
      if (!v_variant) {
        Trajectory traj = simulate_episode(mdp, pi, rng);
        for (int h = 0; h < fc.H; ++h)
          lt.add_tuple(h, {traj[h].s, traj[h].a, traj[h].r, traj[h].s_next});
      } else {
        for (int h = 0; h < fc.H; ++h) {
          Trajectory traj = simulate_with_uniform_action_at(mdp, pi, h, rng);
          lt.add_tuple(h, {traj[h].s, traj[h].a, traj[h].r, traj[h].s_next});
        }
      }
    } else {
      auto occ = occupancy(mdp, pi);
      for (int h = 0; h < fc.H; ++h) {
        std::vector<std::pair<int, double>> support;
        if (!v_variant) {
          for (int sa = 0; sa < fc.S * fc.A; ++sa)
            if (occ[h].w[sa] > 0.0) support.push_back({sa, occ[h].w[sa]});
        } else {
          Vec marg = state_marginal(occ[h], fc.S, fc.A);
          for (int s = 0; s < fc.S; ++s)
            if (marg[s] > 0.0)
              for (int a = 0; a < fc.A; ++a)
                support.push_back({s * fc.A + a, marg[s] / fc.A});
        }
        lt.add_occupancy(mdp, h, support);
      }
    }
  }

  if (!res.episodes.empty()) {
    int draw = rng.uniform_int(static_cast<int>(res.episodes.size()));
    res.out_member = res.episodes[draw].f_index;
    res.out_value = pv_cache[res.out_member];
    for (const auto& ep : res.episodes)
      if (res.best_member < 0 || pv_cache[ep.f_index] > res.best_value) {
        res.best_member = ep.f_index;
        res.best_value = pv_cache[ep.f_index];
      }
  }
  return res;
}

}  // namespace

GolfResult run_golf(const TabularMdp& mdp, const FunctionClass& fc, const GolfConfig& cfg) {
  return run_golf_impl(mdp, fc, cfg, false);
}

GolfResult run_vgolf(const TabularMdp& mdp, const FunctionClass& fc, const GolfConfig& cfg) {
  return run_golf_impl(mdp, fc, cfg, true);
}

}  // namespace beldim
