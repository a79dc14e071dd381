#include "beldim/bellman.hpp"

namespace beldim {

Mat apply_bellman(const TabularMdp& mdp, const Mat& next, int h) {
  Vec v = row_max(next);
  Vec pv = mdp.transition[h] * v;
  Mat out(mdp.S, mdp.A);
  for (int s = 0; s < mdp.S; ++s)
    for (int a = 0; a < mdp.A; ++a) out(s, a) = mdp.reward[h](s, a) + pv[mdp.sa(s, a)];
  return out;
}

Mat q_residual(const TabularMdp& mdp, const QTuple& f, int h) {
  const int H = static_cast<int>(f.q.size());
  Mat next = (h + 1 < H) ? f.q[h + 1] : Mat::Zero(mdp.S, mdp.A);
  return f.q[h] - apply_bellman(mdp, next, h);
}

Vec v_residual(const TabularMdp& mdp, const QTuple& f, int h) {
  Mat res = q_residual(mdp, f, h);
  Vec out(mdp.S);
  for (int s = 0; s < mdp.S; ++s) out[s] = res(s, argmax_low(f.q[h].row(s)));
  return out;
}

double avg_bellman_error(const TabularMdp& mdp, const QTuple& f, const Policy& pi, int h) {
  Mat res = q_residual(mdp, f, h);
  const Vec w = occupancy(mdp, pi)[h].w;
  double acc = 0.0;
  for (int s = 0; s < mdp.S; ++s)
    for (int a = 0; a < mdp.A; ++a) acc += w[mdp.sa(s, a)] * res(s, a);
  return acc;
}

double v_avg_bellman_error(const TabularMdp& mdp, const QTuple& f, const Policy& pi, int h) {
  Vec res = v_residual(mdp, f, h);
  Vec m = state_marginal(occupancy(mdp, pi)[h], mdp.S, mdp.A);
  return m.dot(res);
}

ResidualCache build_residual_cache(const TabularMdp& mdp, const FunctionClass& fc) {
  ResidualCache c;
  c.q.resize(fc.size());
  c.v.resize(fc.size());
  for (int m = 0; m < fc.size(); ++m) {
    c.q[m].resize(fc.H);
    c.v[m].resize(fc.H);
    for (int h = 0; h < fc.H; ++h) {
      c.q[m][h] = q_residual(mdp, fc.members[m], h);
      Vec v(mdp.S);
      for (int s = 0; s < mdp.S; ++s) v[s] = c.q[m][h](s, argmax_low(fc.members[m].q[h].row(s)));
      c.v[m][h] = v;
    }
  }
  return c;
}

static double sample_residual(const Transition& t, const QTuple& f, int h) {
  const int H = static_cast<int>(f.q.size());
  double next_v = (h + 1 < H) ? f.q[h + 1].row(t.s_next).maxCoeff() : 0.0;
  return f.q[h](t.s, t.a) - t.r - next_v;
}

double estimate_bellman_error(const std::vector<Transition>& tuples, const QTuple& f, int h) {
  if (tuples.empty()) return 0.0;
  double acc = 0.0;
  for (const Transition& t : tuples) acc += sample_residual(t, f, h);
  return acc / static_cast<double>(tuples.size());
}

double iw_estimate_bellman_error(const std::vector<Transition>& tuples, const QTuple& f, int h,
                                 int A) {
  if (tuples.empty()) return 0.0;
  double acc = 0.0;
  for (const Transition& t : tuples) {
    if (t.a == argmax_low(f.q[h].row(t.s))) acc += A * sample_residual(t, f, h);
  }
  return acc / static_cast<double>(tuples.size());
}

double squared_loss(const std::vector<Transition>& tuples, const Mat& xi, const Mat& zeta_next) {
  double acc = 0.0;
  for (const Transition& t : tuples) {
    double d = xi(t.s, t.a) - t.r - zeta_next.row(t.s_next).maxCoeff();
    acc += d * d;
  }
  return acc;
}

}  // namespace beldim
