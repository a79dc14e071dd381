#include "beldim/function_class.hpp"

#include <algorithm>

#include "beldim/bellman.hpp"

namespace beldim {

static bool same_table(const Mat& a, const Mat& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() < tol;
}

static int intern_table(std::vector<Mat>& tables, const Mat& t, double tol) {
  for (size_t i = 0; i < tables.size(); ++i)
    if (same_table(tables[i], t, tol)) return static_cast<int>(i);
  tables.push_back(t);
  return static_cast<int>(tables.size()) - 1;
}

FunctionClass make_class(int H, int S, int A, std::vector<QTuple> members) {
  FunctionClass fc;
  fc.H = H;
  fc.S = S;
  fc.A = A;
  fc.layer_tables.resize(H);
  for (auto& f : members) {
    if ((int)f.q.size() != H) throw std::invalid_argument("member has wrong number of steps");
    std::vector<int> lids(H);
    for (int h = 0; h < H; ++h) {
      if (f.q[h].rows() != S || f.q[h].cols() != A)
        throw std::invalid_argument("member table has wrong shape");
      lids[h] = intern_table(fc.layer_tables[h], f.q[h], kDedupTol);
    }
    bool dup = false;
    for (const auto& prev : fc.member_layer)
      if (prev == lids) {
        dup = true;
        break;
      }
    if (dup) continue;
    fc.members.push_back(std::move(f));
    fc.member_layer.push_back(std::move(lids));
  }
  if (fc.members.empty()) throw std::invalid_argument("function class is empty");
  return fc;
}

FunctionClass make_factored_class(int H, int S, int A, std::vector<std::vector<Mat>> layers) {
  if ((int)layers.size() != H) throw std::invalid_argument("factored class needs H layers");
  std::vector<std::vector<Mat>> uniq(H);
  long long product = 1;
  for (int h = 0; h < H; ++h) {
    for (const Mat& t : layers[h]) {
      if (t.rows() != S || t.cols() != A) throw std::invalid_argument("layer table has wrong shape");
      intern_table(uniq[h], t, kDedupTol);
    }
    if (uniq[h].empty()) throw std::invalid_argument("factored layer is empty");
    product *= (long long)uniq[h].size();
    if (product > kEnumerationCap)
      throw std::invalid_argument("factored enumeration exceeds cap of 100000 members");
  }

  FunctionClass fc;
  fc.H = H;
  fc.S = S;
  fc.A = A;
  fc.factored = true;
  fc.layer_tables = uniq;
  std::vector<int> lids(H, 0);
  for (long long m = 0; m < product; ++m) {
    long long rem = m;
    for (int h = H - 1; h >= 0; --h) {
      lids[h] = static_cast<int>(rem % uniq[h].size());
      rem /= uniq[h].size();
    }
    QTuple f;
    f.q.resize(H);
    for (int h = 0; h < H; ++h) f.q[h] = uniq[h][lids[h]];
    fc.members.push_back(std::move(f));
    fc.member_layer.push_back(lids);
  }
  return fc;
}

RangeReport validate_range(const FunctionClass& fc) {
  RangeReport r{1e300, -1e300, true};
  for (const auto& f : fc.members)
    for (const Mat& t : f.q) {
      r.lo = std::min(r.lo, t.minCoeff());
      r.hi = std::max(r.hi, t.maxCoeff());
    }
  r.within_unit = r.lo >= -kDedupTol && r.hi <= 1.0 + kDedupTol;
  return r;
}

Policy greedy_policy(const QTuple& f) {
  Policy pi;
  pi.action.resize(f.q.size());
  for (size_t h = 0; h < f.q.size(); ++h) {
    const Mat& t = f.q[h];
    VecI acts(t.rows());
    for (int s = 0; s < t.rows(); ++s) acts[s] = argmax_low(t.row(s));
    pi.action[h] = acts;
  }
  return pi;
}

RollinFamily rollin_family(const TabularMdp& mdp, const FunctionClass& fc, int h, DistKind kind) {
  RollinFamily fam;
  for (int m = 0; m < fc.size(); ++m) {
    Policy pi = greedy_policy(fc.members[m]);
    StepDistribution d = occupancy(mdp, pi)[h];
    if (kind == DistKind::OverState) d = {DistKind::OverState, state_marginal(d, mdp.S, mdp.A)};
    bool dup = false;
    for (const auto& prev : fam.dists)
      if ((prev.w - d.w).cwiseAbs().sum() < 1e-12) {
        dup = true;
        break;
      }
    if (!dup) {
      fam.dists.push_back(std::move(d));
      fam.kept_member.push_back(m);
    }
  }
  return fam;
}

std::vector<StepDistribution> dirac_family(const TabularMdp& mdp, DistKind kind) {
  std::vector<StepDistribution> fam;
  if (kind == DistKind::OverStateAction) {
    for (int i = 0; i < mdp.S * mdp.A; ++i) {
      Vec w = Vec::Zero(mdp.S * mdp.A);
      w[i] = 1.0;
      fam.push_back({DistKind::OverStateAction, w});
    }
  } else {
    for (int s = 0; s < mdp.S; ++s) {
      Vec w = Vec::Zero(mdp.S);
      w[s] = 1.0;
      fam.push_back({DistKind::OverState, w});
    }
  }
  return fam;
}

ClosureResult closure_class(const TabularMdp& mdp, const std::vector<std::vector<Mat>>& seeds,
                            bool include_qstar) {
  if ((int)seeds.size() != mdp.H) throw std::invalid_argument("closure needs H seed layers");
  ClosureResult out;
  std::vector<std::vector<Mat>> layers(mdp.H);
  auto add = [&](int h, Mat t) {
    if (t.maxCoeff() > 1.0 + kDedupTol) {
      t = t.cwiseMin(1.0);
      out.clamped = true;
    }
    intern_table(layers[h], t, kDedupTol);
  };

  for (const Mat& t : seeds[mdp.H - 1]) add(mdp.H - 1, t);
  if (include_qstar) add(mdp.H - 1, apply_bellman(mdp, Mat::Zero(mdp.S, mdp.A), mdp.H - 1));
  for (int h = mdp.H - 2; h >= 0; --h) {
    for (const Mat& t : seeds[h]) add(h, t);
    for (const Mat& below : layers[h + 1]) add(h, apply_bellman(mdp, below, h));
  }
  out.fc = make_factored_class(mdp.H, mdp.S, mdp.A, layers);
  return out;
}

double completeness_defect(const TabularMdp& mdp, const FunctionClass& fc) {
  double worst = 0.0;
  for (int h = 0; h < fc.H; ++h) {
    const auto& below = (h + 1 < fc.H) ? fc.layer_tables[h + 1]
                                       : std::vector<Mat>{Mat::Zero(fc.S, fc.A)};
    for (const Mat& zeta : below) {
      Mat target = apply_bellman(mdp, zeta, h);
      double best = 1e300;
      for (const Mat& xi : fc.layer_tables[h])
        best = std::min(best, (xi - target).cwiseAbs().maxCoeff());
      worst = std::max(worst, best);
    }
  }
  return worst;
}

int find_member(const FunctionClass& fc, const QTuple& f, double tol) {
  for (int m = 0; m < fc.size(); ++m) {
    double d = 0.0;
    for (int h = 0; h < fc.H; ++h)
      d = std::max(d, (fc.members[m].q[h] - f.q[h]).cwiseAbs().maxCoeff());
    if (d <= tol) return m;
  }
  return -1;
}

}  // namespace beldim
