#include "beldim/olive.hpp"

#include <cmath>

namespace beldim {

OliveConfig olive_config_from_theorem(double eps, int d, int H, int n_members, int A,
                                      double delta, double c, double n_scale,
                                      double zeta_scale) {
  if (eps <= 0.0 || d < 1 || H < 1 || n_members < 2)
    throw std::invalid_argument("olive_config_from_theorem: bad arguments");
  OliveConfig cfg;
  const double iota = c * std::log(static_cast<double>(H) * d / (delta * eps));
  cfg.zeta_act = zeta_scale * 2.0 * eps / H;
  cfg.zeta_elim = zeta_scale * eps / (2.0 * H * std::sqrt(static_cast<double>(d)));
  cfg.n_act = static_cast<long long>(std::ceil(H * H * iota / (eps * eps) / n_scale));
  double ne = H * H * d * std::log(static_cast<double>(n_members)) * iota / (eps * eps);
  if (A > 0) ne *= A;
  cfg.n_elim = static_cast<long long>(std::ceil(ne / n_scale));
  cfg.n_act = std::max<long long>(cfg.n_act, 1);
  cfg.n_elim = std::max<long long>(cfg.n_elim, 1);
  cfg.max_phases = 2 * (d * H + 1);
  return cfg;
}

namespace {

OliveResult run_olive_impl(const TabularMdp& mdp, const FunctionClass& fc,
                           const OliveConfig& cfg, bool v_type) {
  OliveResult res;
  res.vstar = optimal_value(mdp);
  res.qstar_index = find_member(fc, optimal_q(mdp));
  res.activations.resize(fc.H);

  Rng rng(cfg.seed);
  VersionSpace B = VersionSpace::full(fc.size());
  const bool exact = cfg.mode == ExecMode::ExactLoss;

  std::vector<Policy> pol_cache(fc.size());
  std::vector<uint8_t> pol_ready(fc.size(), 0);
  auto policy_of = [&](int m) -> const Policy& {
    if (!pol_ready[m]) {
      pol_cache[m] = greedy_policy(fc.members[m]);
      pol_ready[m] = 1;
    }
    return pol_cache[m];
  };

  for (int phase = 1; phase <= cfg.max_phases; ++phase) {
    int f = optimistic_select(mdp, fc, B);
    if (f < 0) {
      res.status = RunStatus::EmptyVersionSpace;
      res.message = "survivor set empty entering phase " + std::to_string(phase);
      return res;
    }
    const Policy& pi = policy_of(f);
    res.policy_member.push_back(f);
    res.out_member = f;
    res.out_value = policy_value(mdp, pi);

    OlivePhase ph;
    ph.phase = phase;
    ph.f_index = f;
    ph.est_errors.assign(fc.H, 0.0);

    Dataset act_data(fc.H);
    if (exact) {
      for (int h = 0; h < fc.H; ++h)
        ph.est_errors[h] = v_type ? v_avg_bellman_error(mdp, fc.members[f], pi, h)
                                  : avg_bellman_error(mdp, fc.members[f], pi, h);
    } else {
      for (long long e = 0; e < cfg.n_act; ++e) {
        Trajectory traj = simulate_episode(mdp, pi, rng);
        for (int h = 0; h < fc.H; ++h)
          act_data.append(h, {traj[h].s, traj[h].a, traj[h].r, traj[h].s_next});
      }
      res.episodes_used += cfg.n_act;
      for (int h = 0; h < fc.H; ++h)
        ph.est_errors[h] = estimate_bellman_error(act_data.layers[h], fc.members[f], h);
    }
    ph.sum_err = 0.0;
    for (double e : ph.est_errors) ph.sum_err += e;

    if (ph.sum_err <= fc.H * cfg.zeta_act) {
      ph.activated_step = -1;
      ph.anomaly_argmax = false;
      ph.eliminated = 0;
      ph.survivors = B.count();
      res.phases.push_back(std::move(ph));
      res.status = RunStatus::Ok;
      return res;
    }

    int t = -1;
    for (int h = 0; h < fc.H; ++h) {
      bool hit = v_type ? ph.est_errors[h] > cfg.zeta_act : ph.est_errors[h] >= cfg.zeta_act;
      if (hit) {
        t = h;
        break;
      }
    }
    ph.anomaly_argmax = t < 0;
    if (t < 0) {
      t = 0;
      for (int h = 1; h < fc.H; ++h)
        if (ph.est_errors[h] > ph.est_errors[t]) t = h;
    }
    ph.activated_step = t;
    res.activations[t].push_back(phase);

    std::vector<double> scores(fc.size(), 0.0);
    if (exact) {
      for (int m = 0; m < fc.size(); ++m)
        if (B[m])
          scores[m] = v_type ? v_avg_bellman_error(mdp, fc.members[m], pi, t)
                             : avg_bellman_error(mdp, fc.members[m], pi, t);
    } else {
      Dataset elim_data(fc.H);
      for (long long e = 0; e < cfg.n_elim; ++e) {
        Trajectory traj = v_type ? simulate_with_uniform_action_at(mdp, pi, t, rng)
                                 : simulate_episode(mdp, pi, rng);
        for (int h = 0; h < fc.H; ++h)
          elim_data.append(h, {traj[h].s, traj[h].a, traj[h].r, traj[h].s_next});
      }
      res.episodes_used += cfg.n_elim;
      for (int m = 0; m < fc.size(); ++m)
        if (B[m])
          scores[m] = v_type
                          ? iw_estimate_bellman_error(elim_data.layers[t], fc.members[m], t, fc.A)
                          : estimate_bellman_error(elim_data.layers[t], fc.members[m], t);
    }

    int eliminated = 0;
    for (int m = 0; m < fc.size(); ++m) {
      if (!B[m]) continue;
      if (std::abs(scores[m]) > cfg.zeta_elim) {
        B.alive[m] = 0;
        ++eliminated;
        if (m == res.qstar_index) res.qstar_survived = false;
      }
    }
    ph.eliminated = eliminated;
    ph.survivors = B.count();
    res.phases.push_back(std::move(ph));
  }

  res.status = RunStatus::MaxPhases;
  res.message = "phase cap reached without termination";
  return res;
}

}  // namespace

OliveResult run_olive(const TabularMdp& mdp, const FunctionClass& fc, const OliveConfig& cfg) {
  return run_olive_impl(mdp, fc, cfg, false);
}

OliveResult run_volive(const TabularMdp& mdp, const FunctionClass& fc, const OliveConfig& cfg) {
  return run_olive_impl(mdp, fc, cfg, true);
}

AuditReport audit_independence(const TabularMdp& mdp, const FunctionClass& fc,
                               const OliveResult& result, bool v_type, double threshold) {
  AuditReport report;
  report.threshold = threshold;
  const double t2 = threshold * threshold;

  for (int h = 0; h < fc.H; ++h) {
    if (result.activations[h].empty()) continue;
    AuditStep step;
    step.h = h;
    step.phase = result.activations[h];

    // residual rows over the full class
    std::vector<Vec> rows;
    for (int m = 0; m < fc.size(); ++m) {
      if (v_type) {
        rows.push_back(v_residual(mdp, fc.members[m], h));
      } else {
        Mat q = q_residual(mdp, fc.members[m], h);
        Vec r(mdp.S * mdp.A);
        for (int s = 0; s < mdp.S; ++s)
          for (int a = 0; a < mdp.A; ++a) r[mdp.sa(s, a)] = q(s, a);
        rows.push_back(std::move(r));
      }
    }

    std::vector<Vec> dists;
    for (int phase : step.phase) {
      int m = result.policy_member[phase - 1];
      StepDistribution d = occupancy(mdp, greedy_policy(fc.members[m]))[h];
      dists.push_back(v_type ? state_marginal(d, mdp.S, mdp.A) : d.w);
    }

    std::vector<double> ssq(rows.size(), 0.0);
    for (size_t j = 0; j < dists.size(); ++j) {
      bool ok = false;
      for (size_t g = 0; g < rows.size() && !ok; ++g)
        ok = ssq[g] <= t2 && std::abs(rows[g].dot(dists[j])) > threshold;
      step.independent.push_back(ok ? 1 : 0);
      step.all_certified = step.all_certified && ok;
      for (size_t g = 0; g < rows.size(); ++g) {
        double e = rows[g].dot(dists[j]);
        ssq[g] += e * e;
      }
    }
    report.all_certified = report.all_certified && step.all_certified;
    report.steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace beldim
