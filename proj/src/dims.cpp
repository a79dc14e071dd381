#include "beldim/dims.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace beldim {

namespace {

// candidate thresholds: just below every achievable |E| value above eps, plus eps
std::vector<double> candidate_thresholds(const Mat& E, double eps) {
  std::vector<double> cands{eps};
  for (int g = 0; g < E.rows(); ++g)
    for (int j = 0; j < E.cols(); ++j) {
      double v = std::abs(E(g, j));
      if (v > eps) {
        double c = v - 1e-9 * (1.0 + v);
        if (c >= eps) cands.push_back(c);
      }
    }
  std::sort(cands.begin(), cands.end(), std::greater<double>());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

// DFS for the longest sequence at one fixed threshold. Prefix feasibility
// depends only on the chosen set, so visited sets are memoized (bitmask for
// up to 64 elements). Snapshots keep the pop exact in floating point.
struct SeqSearch {
  const Mat& E;
  double t, t2;
  long long node_cap;
  long long& nodes;
  bool& exact;

  std::vector<int> usable;
  std::vector<uint8_t> used;
  std::vector<double> ssq;
  std::vector<std::vector<double>> snapshots;
  std::vector<int> seq, cert;
  std::vector<int> best_seq, best_cert;
  std::unordered_set<uint64_t> visited;
  bool use_mask;
  uint64_t mask = 0;

  SeqSearch(const Mat& e, double thr, long long cap, long long& n, bool& ex)
      : E(e), t(thr), t2(thr * thr), node_cap(cap), nodes(n), exact(ex) {
    used.assign(E.cols(), 0);
    ssq.assign(E.rows(), 0.0);
    use_mask = E.cols() <= 64;
    std::vector<std::pair<double, int>> strength;
    for (int j = 0; j < E.cols(); ++j) {
      double best = E.col(j).cwiseAbs().maxCoeff();
      if (best > t) strength.push_back({best, j});
    }
    std::sort(strength.begin(), strength.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [v, j] : strength) usable.push_back(j);
  }

  int find_cert(int j) const {
    for (int g = 0; g < E.rows(); ++g)
      if (ssq[g] <= t2 && std::abs(E(g, j)) > t) return g;
    return -1;
  }

  void dfs() {
    if (++nodes > node_cap) {
      exact = false;
      return;
    }
    if (seq.size() > best_seq.size()) {
      best_seq = seq;
      best_cert = cert;
    }
    int remaining = 0;
    for (int j : usable)
      if (!used[j]) ++remaining;
    if (seq.size() + remaining <= best_seq.size()) return;

    for (int j : usable) {
      if (used[j] || !exact) continue;
      int g = find_cert(j);
      if (g < 0) continue;
      if (use_mask) {
        uint64_t next_mask = mask | (uint64_t{1} << j);
        if (!visited.insert(next_mask).second) continue;
        mask = next_mask;
      }
      snapshots.push_back(ssq);
      for (int r = 0; r < E.rows(); ++r) ssq[r] += E(r, j) * E(r, j);
      used[j] = 1;
      seq.push_back(j);
      cert.push_back(g);

      dfs();

      cert.pop_back();
      seq.pop_back();
      used[j] = 0;
      ssq = std::move(snapshots.back());
      snapshots.pop_back();
      if (use_mask) mask &= ~(uint64_t{1} << j);
      if (best_seq.size() == usable.size()) return;
    }
  }
};

}  // namespace

SequenceCertificate longest_independent_sequence(const Mat& E, double eps,
                                                 const SearchOptions& opts) {
  SequenceCertificate best;
  best.eps = eps;
  best.eps_prime = eps;
  if (E.rows() == 0 || E.cols() == 0) return best;

  long long nodes = 0;
  bool exact = true;
  for (double t : candidate_thresholds(E, eps)) {
    SeqSearch search(E, t, opts.node_cap, nodes, exact);
    if ((int)search.usable.size() <= best.value) continue;
    search.dfs();
    if ((int)search.best_seq.size() > best.value) {
      best.value = static_cast<int>(search.best_seq.size());
      best.eps_prime = t;
      best.witness = search.best_seq;
      best.cert_row = search.best_cert;
    }
    if (!exact || best.value == (int)E.cols()) break;
  }
  best.exact = exact;
  best.nodes = nodes;
  return best;
}

bool verify_sequence_certificate(const Mat& E, double eps, const SequenceCertificate& cert) {
  if (cert.eps_prime < eps) return false;
  if ((int)cert.witness.size() != cert.value || cert.cert_row.size() != cert.witness.size())
    return false;
  const double t = cert.eps_prime, t2 = t * t;
  std::vector<uint8_t> seen(E.cols(), 0);
  for (size_t k = 0; k < cert.witness.size(); ++k) {
    int j = cert.witness[k], g = cert.cert_row[k];
    if (j < 0 || j >= E.cols() || g < 0 || g >= E.rows() || seen[j]) return false;
    seen[j] = 1;
    double ssq = 0.0;
    for (size_t i = 0; i < k; ++i) ssq += E(g, cert.witness[i]) * E(g, cert.witness[i]);
    if (ssq > t2 || std::abs(E(g, j)) <= t) return false;
  }
  return true;
}

EluderCertificate eluder_dimension(const Mat& values, double eps, const SearchOptions& opts) {
  const int n = static_cast<int>(values.rows());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  Mat D(pairs.size(), values.cols());
  for (size_t p = 0; p < pairs.size(); ++p)
    D.row(p) = values.row(pairs[p].first) - values.row(pairs[p].second);

  EluderCertificate out;
  out.seq = longest_independent_sequence(D, eps, opts);
  for (size_t k = 0; k < out.seq.witness.size(); ++k) {
    auto [i, j] = pairs[out.seq.cert_row[k]];
    if (D(out.seq.cert_row[k], out.seq.witness[k]) < 0) std::swap(i, j);
    out.cert_pair.push_back({i, j});
  }
  return out;
}

bool verify_eluder_certificate(const Mat& values, double eps, const EluderCertificate& cert) {
  const auto& seq = cert.seq;
  if (seq.eps_prime < eps || (int)seq.witness.size() != seq.value ||
      cert.cert_pair.size() != seq.witness.size())
    return false;
  const double t = seq.eps_prime, t2 = t * t;
  std::vector<uint8_t> seen(values.cols(), 0);
  for (size_t k = 0; k < seq.witness.size(); ++k) {
    int z = seq.witness[k];
    auto [g1, g2] = cert.cert_pair[k];
    if (z < 0 || z >= values.cols() || seen[z]) return false;
    seen[z] = 1;
    double ssq = 0.0;
    for (size_t i = 0; i < k; ++i) {
      double d = values(g1, seq.witness[i]) - values(g2, seq.witness[i]);
      ssq += d * d;
    }
    if (ssq > t2) return false;
    if (values(g1, z) - values(g2, z) <= t) return false;  // signed, strict
  }
  return true;
}

namespace {

// deduplicated residual rows at step h; q-type rows are flattened S*A,
// v-type rows have length S
std::pair<Mat, std::vector<int>> residual_rows(const TabularMdp& mdp, const FunctionClass& fc,
                                               int h, bool v_type) {
  std::vector<Vec> rows;
  std::vector<int> member;
  for (int m = 0; m < fc.size(); ++m) {
    Vec r;
    if (v_type) {
      r = v_residual(mdp, fc.members[m], h);
    } else {
      Mat q = q_residual(mdp, fc.members[m], h);
      r = Vec(mdp.S * mdp.A);
      for (int s = 0; s < mdp.S; ++s)
        for (int a = 0; a < mdp.A; ++a) r[mdp.sa(s, a)] = q(s, a);
    }
    bool dup = false;
    for (const Vec& prev : rows)
      if ((prev - r).cwiseAbs().maxCoeff() < kDedupTol) {
        dup = true;
        break;
      }
    if (!dup) {
      rows.push_back(std::move(r));
      member.push_back(m);
    }
  }
  Mat R(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) R.row(i) = rows[i].transpose();
  return {R, member};
}

}  // namespace

BeMatrix be_expectation_matrix(const TabularMdp& mdp, const FunctionClass& fc, int h,
                               RollinKind family, bool v_type) {
  BeMatrix out;
  const DistKind kind = v_type ? DistKind::OverState : DistKind::OverStateAction;
  auto [R, member] = residual_rows(mdp, fc, h, v_type);
  out.residual_member = std::move(member);

  std::vector<StepDistribution> dists;
  if (family == RollinKind::Greedy) {
    RollinFamily fam = rollin_family(mdp, fc, h, kind);
    dists = std::move(fam.dists);
    out.family_member = std::move(fam.kept_member);
  } else {
    dists = dirac_family(mdp, kind);
    out.family_member.resize(dists.size());
    for (size_t i = 0; i < dists.size(); ++i) out.family_member[i] = static_cast<int>(i);
  }

  Mat W(R.cols(), dists.size());
  for (size_t c = 0; c < dists.size(); ++c) W.col(c) = dists[c].w;
  out.E = R * W;
  return out;
}

namespace {

BeResult be_dimension_impl(const TabularMdp& mdp, const FunctionClass& fc, RollinKind family,
                           double eps, const SearchOptions& opts, bool v_type) {
  BeResult out;
  out.per_step.resize(fc.H);
  out.residual_member.resize(fc.H);
  out.family_member.resize(fc.H);
  for (int h = 0; h < fc.H; ++h) {
    BeMatrix bm = be_expectation_matrix(mdp, fc, h, family, v_type);
    out.residual_member[h] = std::move(bm.residual_member);
    out.family_member[h] = std::move(bm.family_member);
    out.per_step[h] = longest_independent_sequence(bm.E, eps, opts);
    if (out.per_step[h].value > out.value) {
      out.value = out.per_step[h].value;
      out.argmax_h = h;
    }
  }
  return out;
}

}  // namespace

BeResult be_dimension(const TabularMdp& mdp, const FunctionClass& fc, RollinKind family,
                      double eps, const SearchOptions& opts) {
  return be_dimension_impl(mdp, fc, family, eps, opts, false);
}

BeResult vbe_dimension(const TabularMdp& mdp, const FunctionClass& fc, RollinKind family,
                       double eps, const SearchOptions& opts) {
  return be_dimension_impl(mdp, fc, family, eps, opts, true);
}

BellmanErrorMatrix bellman_error_matrix(const TabularMdp& mdp, const FunctionClass& fc, int h,
                                        bool v_type) {
  BellmanErrorMatrix out;
  out.h = h;
  out.M = Mat(fc.size(), fc.size());
  std::vector<Vec> rollins(fc.size());
  for (int j = 0; j < fc.size(); ++j) {
    StepDistribution d = occupancy(mdp, greedy_policy(fc.members[j]))[h];
    rollins[j] = v_type ? state_marginal(d, mdp.S, mdp.A) : d.w;
  }
  for (int i = 0; i < fc.size(); ++i) {
    Vec r;
    if (v_type) {
      r = v_residual(mdp, fc.members[i], h);
    } else {
      Mat q = q_residual(mdp, fc.members[i], h);
      r = Vec(mdp.S * mdp.A);
      for (int s = 0; s < mdp.S; ++s)
        for (int a = 0; a < mdp.A; ++a) r[mdp.sa(s, a)] = q(s, a);
    }
    for (int j = 0; j < fc.size(); ++j) out.M(i, j) = r.dot(rollins[j]);
  }
  return out;
}

int numeric_rank(const Mat& M, double tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++r;
  return r;
}

RankResult bellman_rank(const TabularMdp& mdp, const FunctionClass& fc, bool v_type, double tol) {
  RankResult out;
  out.per_step.resize(fc.H);
  out.singular_values.resize(fc.H);
  out.zeta.resize(fc.H);
  for (int h = 0; h < fc.H; ++h) {
    BellmanErrorMatrix bem = bellman_error_matrix(mdp, fc, h, v_type);
    Eigen::JacobiSVD<Mat> svd(bem.M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    out.singular_values[h] = sv;
    int r = 0;
    if (sv.size() > 0 && sv[0] > 0.0)
      for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * sv[0]) ++r;
    out.per_step[h] = r;
    if (r > 0) {
      Vec root = sv.head(r).cwiseSqrt();
      Mat phi = svd.matrixU().leftCols(r) * root.asDiagonal();
      Mat psi = svd.matrixV().leftCols(r) * root.asDiagonal();
      out.zeta[h] = phi.rowwise().norm().maxCoeff() * psi.rowwise().norm().maxCoeff();
    } else {
      out.zeta[h] = 0.0;
    }
    out.value = std::max(out.value, r);
    out.matrices.push_back(std::move(bem));
  }
  return out;
}

namespace {

double logdet_spd(const Mat& M) {
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) throw std::runtime_error("logdet: matrix not SPD");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Certify whether max over size-n multisets of log det(I + c sum x x^T) stays
// <= target. Vectors get counts in order; the determinant lemma bounds the
// gain of every remaining unit by the best single-unit gain at the current
// matrix, which only shrinks as the matrix grows.
struct EffDimSearch {
  const std::vector<Vec>& xs;
  double c;
  long long node_cap;
  long long& nodes;
  bool budget_ok = true;
  bool violated = false;
  double target = 0.0;

  EffDimSearch(const std::vector<Vec>& x, double cc, long long cap, long long& n)
      : xs(x), c(cc), node_cap(cap), nodes(n) {}

  void recurse(size_t i, int k, const Mat& M, double logdet) {
    if (violated || !budget_ok) return;
    if (++nodes > node_cap) {
      budget_ok = false;
      return;
    }
    if (logdet > target) {  // adding vectors only grows the determinant
      violated = true;
      return;
    }
    if (k == 0) return;
    Mat Minv = M.inverse();
    if (i + 1 == xs.size()) {
      double q = xs[i].dot(Minv * xs[i]);
      double final_logdet = logdet + std::log1p(c * k * q);
      if (final_logdet > target) violated = true;
      return;
    }
    double best_gain = 0.0;
    for (size_t j = i; j < xs.size(); ++j) {
      double q = xs[j].dot(Minv * xs[j]);
      best_gain = std::max(best_gain, std::log1p(c * q));
    }
    if (logdet + k * best_gain <= target) return;  // branch cannot violate

    for (int cnt = k; cnt >= 0; --cnt) {
      Mat M2 = M;
      if (cnt > 0) M2 += (c * cnt) * (xs[i] * xs[i].transpose());
      recurse(i + 1, k - cnt, M2, logdet_spd(M2));
      if (violated || !budget_ok) return;
    }
  }
};

}  // namespace

EffDimResult effective_dimension(const std::vector<Vec>& xs, double eps,
                                 const SearchOptions& opts) {
  if (xs.empty()) throw std::invalid_argument("effective_dimension: empty vector set");
  if (eps <= 0.0) throw std::invalid_argument("effective_dimension: eps must be positive");
  const int d = static_cast<int>(xs[0].size());
  for (const Vec& x : xs)
    if (x.size() != d) throw std::invalid_argument("effective_dimension: mixed dimensions");
  const double c = 1.0 / (eps * eps);
  const int n_max = 512;
  const bool exact_envelope = (int)xs.size() <= 12;

  EffDimResult out;
  long long nodes = 0;
  if (exact_envelope) {
    bool budget_ok = true;
    for (int n = 1; n <= std::min(n_max, 256) && budget_ok; ++n) {
      EffDimSearch search(xs, c, opts.node_cap, nodes);
      search.target = static_cast<double>(n) * std::exp(-1.0);
      search.recurse(0, n, Mat::Identity(d, d), 0.0);
      budget_ok = search.budget_ok;
      if (budget_ok && !search.violated) {
        out.value = n;
        out.exact = true;
        out.lower_bound = n;
        out.greedy_value = n;
        out.nodes = nodes;
        return out;
      }
    }
    if (budget_ok) throw std::runtime_error("effective_dimension: exceeded n cap of 256");
  }

  // greedy fallback: flagged lower bound
  Mat M = Mat::Identity(d, d);
  double logdet = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    Mat Minv = M.inverse();
    double best_gain = -1.0;
    size_t best_j = 0;
    for (size_t j = 0; j < xs.size(); ++j) {
      double gain = std::log1p(c * xs[j].dot(Minv * xs[j]));
      if (gain > best_gain) {
        best_gain = gain;
        best_j = j;
      }
    }
    M += c * (xs[best_j] * xs[best_j].transpose());
    logdet += best_gain;
    if (logdet <= static_cast<double>(n) * std::exp(-1.0)) {
      out.value = n;
      out.exact = false;
      out.lower_bound = n;
      out.greedy_value = n;
      out.nodes = nodes;
      return out;
    }
  }
  throw std::runtime_error("effective_dimension: greedy scan exceeded n cap of 512");
}

}  // namespace beldim
