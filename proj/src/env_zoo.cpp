#include "beldim/env_zoo.hpp"

namespace beldim {

static TabularMdp stub_mdp(int S, int A, Vec init) {
  TabularMdp mdp;
  mdp.H = 1;
  mdp.S = S;
  mdp.A = A;
  Mat P = Mat::Zero(S * A, S);
  P.col(0).setOnes();
  mdp.transition = {P};
  mdp.reward = {Mat::Zero(S, A)};
  mdp.init = std::move(init);
  return mdp;
}

NamedInstance make_indicator_bandit(int m) {
  if (m < 2) throw std::invalid_argument("indicator_bandit needs m >= 2");
  NamedInstance inst;
  inst.name = "indicator_bandit_m" + std::to_string(m);
  inst.mdp = stub_mdp(1, m, Vec::Ones(1));

  std::vector<QTuple> members(m);
  for (int i = 0; i < m; ++i) {
    Mat q = Mat::Ones(1, m);
    q(0, i) = 2.0;
    members[i].q = {q};
  }
  inst.fc = make_class(1, 1, m, std::move(members));

  inst.theta = Mat::Zero(m + 1, m);
  for (int i = 0; i < m; ++i) {
    inst.theta(0, i) = 1.0;
    inst.theta(i + 1, i) = 1.0;
  }

  inst.facts = {
      {Measure::Eluder, Family::None, Relation::GE, m - 1, {0.5}},
      {Measure::Rank, Family::None, Relation::EQ, m, {}},
      {Measure::Be, Family::Greedy, Relation::LE, 5, {0.5}},
      {Measure::Be, Family::Dirac, Relation::LE, 5, {0.5}},
  };
  return inst;
}

NamedInstance make_state_indicator(int m) {
  if (m < 2) throw std::invalid_argument("state_indicator needs m >= 2");
  NamedInstance inst;
  inst.name = "state_indicator_m" + std::to_string(m);
  Vec init = Vec::Zero(m);
  init[0] = 1.0;
  inst.mdp = stub_mdp(m, 2, std::move(init));

  std::vector<QTuple> members(m);
  for (int i = 0; i < m; ++i) {
    Mat q = Mat::Zero(m, 2);
    for (int s = 0; s < m; ++s)
      for (int a = 0; a < 2; ++a) q(s, a) = (s == i ? 1.0 : 0.0) + (a == 0 ? 1.0 : 0.0);
    members[i].q = {q};
  }
  inst.fc = make_class(1, m, 2, std::move(members));

  inst.facts = {
      {Measure::Be, Family::Greedy, Relation::LE, 1, {0.4}},
      {Measure::Be, Family::Dirac, Relation::GE, m, {0.4}},
  };
  return inst;
}

NamedInstance make_sign_flip(int m) {
  if (m < 2) throw std::invalid_argument("sign_flip needs m >= 2");
  NamedInstance inst;
  inst.name = "sign_flip_m" + std::to_string(m);
  inst.mdp = stub_mdp(2, m, Vec::Constant(2, 0.5));

  std::vector<QTuple> members(m);
  for (int i = 0; i < m; ++i) {
    Mat q(2, m);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < m; ++a) q(s, a) = (s == 0 ? 1.0 : -1.0) + (a == i ? 0.5 : 0.0);
    members[i].q = {q};
  }
  inst.fc = make_class(1, 2, m, std::move(members));

  inst.facts = {
      {Measure::Be, Family::Greedy, Relation::GE, m, {0.4}},
      {Measure::Be, Family::Dirac, Relation::LE, 10, {0.4}},
  };
  return inst;
}

NamedInstance make_random_closure(int S, int A, int H, int n_seeds_per_step, uint64_t seed) {
  if (S < 1 || A < 1 || H < 1 || n_seeds_per_step < 0)
    throw std::invalid_argument("make_random_closure: bad shape");
  NamedInstance inst;
  inst.name = "random_closure_S" + std::to_string(S) + "_A" + std::to_string(A) + "_H" +
              std::to_string(H) + "_n" + std::to_string(n_seeds_per_step) + "_s" +
              std::to_string(seed);
  Rng rng(seed);

  TabularMdp mdp;
  mdp.H = H;
  mdp.S = S;
  mdp.A = A;
  mdp.transition.resize(H);
  mdp.reward.resize(H);
  for (int h = 0; h < H; ++h) {
    Mat P(S * A, S);
    for (int row = 0; row < S * A; ++row) {
      Vec e(S);
      for (int s = 0; s < S; ++s) e[s] = rng.exponential();
      P.row(row) = (e / e.sum()).transpose();
    }
    mdp.transition[h] = P;
  }
  for (int h = 0; h < H; ++h) {
    Mat r(S, A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) r(s, a) = rng.uniform01() / H;
    mdp.reward[h] = r;
  }
  mdp.init = Vec::Zero(S);
  mdp.init[0] = 1.0;
  inst.mdp = mdp;

  // layer-h seeds live in [0, (H-h)/H]: every backup then stays below
  // 1/H + (H-h-1)/H, so the closure never clamps and stays exactly complete
  std::vector<std::vector<Mat>> seeds(H);
  for (int h = 0; h < H; ++h) {
    const double hi = static_cast<double>(H - h) / H;
    for (int k = 0; k < n_seeds_per_step; ++k) {
      Mat t(S, A);
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) t(s, a) = rng.uniform01() * hi;
      seeds[h].push_back(t);
    }
  }
  ClosureResult closed = closure_class(mdp, seeds, true);
  if (closed.clamped) throw std::runtime_error("make_random_closure: unexpected clamping");
  inst.fc = std::move(closed.fc);
  inst.realizable = find_member(inst.fc, optimal_q(mdp)) >= 0;
  inst.complete = completeness_defect(mdp, inst.fc) <= 1e-10;
  return inst;
}

static int eval_measure(const NamedInstance& inst, const Fact& f, double eps,
                        const SearchOptions& opts) {
  switch (f.measure) {
    case Measure::Eluder: {
      int best = 0;
      for (int h = 0; h < inst.fc.H; ++h) {
        Mat values(inst.fc.layer_tables[h].size(), inst.mdp.S * inst.mdp.A);
        for (size_t i = 0; i < inst.fc.layer_tables[h].size(); ++i) {
          const Mat& t = inst.fc.layer_tables[h][i];
          for (int s = 0; s < inst.mdp.S; ++s)
            for (int a = 0; a < inst.mdp.A; ++a) values(i, inst.mdp.sa(s, a)) = t(s, a);
        }
        best = std::max(best, eluder_dimension(values, eps, opts).seq.value);
      }
      return best;
    }
    case Measure::Be:
      return be_dimension(inst.mdp, inst.fc,
                          f.family == Family::Dirac ? RollinKind::Dirac : RollinKind::Greedy, eps,
                          opts)
          .value;
    case Measure::Vbe:
      return vbe_dimension(inst.mdp, inst.fc,
                           f.family == Family::Dirac ? RollinKind::Dirac : RollinKind::Greedy, eps,
                           opts)
          .value;
    case Measure::Rank:
      return bellman_rank(inst.mdp, inst.fc).value;
  }
  return -1;
}

std::vector<FactCheck> check_facts(const NamedInstance& inst, const SearchOptions& opts) {
  std::vector<FactCheck> out;
  for (const Fact& f : inst.facts) {
    std::vector<double> eps_list = f.eps_points.empty() ? std::vector<double>{0.0} : f.eps_points;
    for (double eps : eps_list) {
      int measured = eval_measure(inst, f, eps, opts);
      bool pass = false;
      switch (f.rel) {
        case Relation::LE: pass = measured <= f.value; break;
        case Relation::GE: pass = measured >= f.value; break;
        case Relation::EQ: pass = measured == f.value; break;
      }
      out.push_back({f, eps, measured, pass});
    }
  }
  return out;
}

}  // namespace beldim
