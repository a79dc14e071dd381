#include "beldim/mdp.hpp"

#include <cmath>

namespace beldim {

MdpValidation validate_mdp(const TabularMdp& mdp) {
  MdpValidation v;
  auto fail = [&](const std::string& msg) {
    v.ok = false;
    v.errors.push_back(msg);
  };

  if (mdp.H <= 0 || mdp.S <= 0 || mdp.A <= 0) {
    fail("H, S, A must be positive");
    return v;
  }
  if ((int)mdp.transition.size() != mdp.H) fail("transition must have H entries");
  if ((int)mdp.reward.size() != mdp.H) fail("reward must have H entries");
  if (mdp.init.size() != mdp.S) fail("init must have S entries");
  if (!v.ok) return v;

  for (int h = 0; h < mdp.H; ++h) {
    const Mat& P = mdp.transition[h];
    if (P.rows() != mdp.S * mdp.A || P.cols() != mdp.S) {
      fail("transition[" + std::to_string(h) + "] must be (S*A) x S");
      continue;
    }
    if ((P.array() < -kProbTol).any()) fail("negative transition probability at step " + std::to_string(h));
    for (int row = 0; row < P.rows(); ++row) {
      if (std::abs(P.row(row).sum() - 1.0) > kProbTol)
        fail("transition row " + std::to_string(row) + " at step " + std::to_string(h) + " does not sum to 1");
    }
    if (mdp.reward[h].rows() != mdp.S || mdp.reward[h].cols() != mdp.A)
      fail("reward[" + std::to_string(h) + "] must be S x A");
  }
  if ((mdp.init.array() < -kProbTol).any()) fail("negative initial probability");
  if (std::abs(mdp.init.sum() - 1.0) > kProbTol) fail("init does not sum to 1");
  if (!v.ok) return v;

  // Worst-case achievable reward sum over trajectories with positive probability.
  Vec g = Vec::Zero(mdp.S);
  for (int h = mdp.H - 1; h >= 0; --h) {
    Vec g_prev(mdp.S);
    for (int s = 0; s < mdp.S; ++s) {
      double best = -1e300;
      for (int a = 0; a < mdp.A; ++a) {
        double reach = 0.0;
        for (int sn = 0; sn < mdp.S; ++sn)
          if (mdp.transition[h](mdp.sa(s, a), sn) > kProbTol) reach = std::max(reach, g[sn]);
        best = std::max(best, mdp.reward[h](s, a) + reach);
      }
      g_prev[s] = best;
    }
    g = g_prev;
  }
  double worst = 0.0;
  for (int s = 0; s < mdp.S; ++s)
    if (mdp.init[s] > kProbTol) worst = std::max(worst, g[s]);
  if (worst > 1.0 + 1e-9)
    v.warnings.push_back("max achievable reward sum " + std::to_string(worst) + " exceeds 1");
  return v;
}

QTuple optimal_q(const TabularMdp& mdp) {
  QTuple out;
  out.q.resize(mdp.H);
  Vec v_next = Vec::Zero(mdp.S);
  for (int h = mdp.H - 1; h >= 0; --h) {
    Vec pv = mdp.transition[h] * v_next;  // (S*A) expected next value
    Mat q(mdp.S, mdp.A);
    for (int s = 0; s < mdp.S; ++s)
      for (int a = 0; a < mdp.A; ++a) q(s, a) = mdp.reward[h](s, a) + pv[mdp.sa(s, a)];
    out.q[h] = q;
    v_next = row_max(q);
  }
  return out;
}

double optimal_value(const TabularMdp& mdp) {
  QTuple qs = optimal_q(mdp);
  return mdp.init.dot(row_max(qs.q[0]));
}

std::vector<Vec> policy_state_values(const TabularMdp& mdp, const Policy& pi) {
  std::vector<Vec> v(mdp.H);
  Vec v_next = Vec::Zero(mdp.S);
  for (int h = mdp.H - 1; h >= 0; --h) {
    Vec cur(mdp.S);
    for (int s = 0; s < mdp.S; ++s) {
      int a = pi.action[h][s];
      cur[s] = mdp.reward[h](s, a) + mdp.transition[h].row(mdp.sa(s, a)).dot(v_next);
    }
    v[h] = cur;
    v_next = cur;
  }
  return v;
}

double policy_value(const TabularMdp& mdp, const Policy& pi) {
  return mdp.init.dot(policy_state_values(mdp, pi)[0]);
}

std::vector<StepDistribution> occupancy(const TabularMdp& mdp, const Policy& pi) {
  std::vector<StepDistribution> occ(mdp.H);
  Vec state = mdp.init;
  for (int h = 0; h < mdp.H; ++h) {
    Vec w = Vec::Zero(mdp.S * mdp.A);
    for (int s = 0; s < mdp.S; ++s) w[mdp.sa(s, pi.action[h][s])] = state[s];
    occ[h] = {DistKind::OverStateAction, w};
    state = mdp.transition[h].transpose() * w;
  }
  return occ;
}

Vec state_marginal(const StepDistribution& d, int S, int A) {
  if (d.kind == DistKind::OverState) return d.w;
  Vec m = Vec::Zero(S);
  for (int s = 0; s < S; ++s) m[s] = d.w.segment(s * A, A).sum();
  return m;
}

static Trajectory simulate_impl(const TabularMdp& mdp, const Policy& pi, int h_uniform, Rng& rng) {
  Trajectory traj;
  traj.reserve(mdp.H);
  int s = rng.categorical(mdp.init);
  for (int h = 0; h < mdp.H; ++h) {
    int a = (h == h_uniform) ? rng.uniform_int(mdp.A) : pi.action[h][s];
    double r = mdp.reward[h](s, a);
    int sn = rng.categorical(mdp.transition[h].row(mdp.sa(s, a)).transpose());
    traj.push_back({s, a, r, sn});
    s = sn;
  }
  return traj;
}

Trajectory simulate_episode(const TabularMdp& mdp, const Policy& pi, Rng& rng) {
  return simulate_impl(mdp, pi, -1, rng);
}

Trajectory simulate_with_uniform_action_at(const TabularMdp& mdp, const Policy& pi,
                                           int h_uniform, Rng& rng) {
  if (h_uniform < 0 || h_uniform >= mdp.H)
    throw std::invalid_argument("simulate_with_uniform_action_at: step out of range");
  return simulate_impl(mdp, pi, h_uniform, rng);
}

}  // namespace beldim
