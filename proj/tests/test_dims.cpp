#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "beldim/env_zoo.hpp"
#include "beldim/io.hpp"

using namespace beldim;

namespace {

Mat random_values(int rows, int cols, uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Mat v(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) v(i, j) = scale * (2.0 * rng.uniform01() - 1.0);
  return v;
}

// independent double implementation of the eluder identity's right-hand side:
// difference rows over ordered pairs, Dirac columns
int eluder_via_differences(const Mat& values, double eps) {
  const int g = static_cast<int>(values.rows());
  Mat diff(g * g, values.cols());
  int r = 0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) diff.row(r++) = values.row(i) - values.row(j);
  SequenceCertificate c = de_dimension(diff, eps);
  REQUIRE(c.exact);
  return c.value;
}

// Two-step class whose step-1 residuals vanish identically and whose step-2
// residuals live in a 3-dimensional cosine feature span; the Bellman-error
// matrix factors through R^3 regardless of the member count m.
NamedInstance cosine_plant(int m) {
  const int F = 4;  // feature states
  NamedInstance inst;
  inst.name = "cosine_plant_m" + std::to_string(m);
  TabularMdp& mdp = inst.mdp;
  mdp.H = 2;
  mdp.S = F + 1;  // feature states 0..3, start state 4
  mdp.A = m;
  for (int h = 0; h < 2; ++h) {
    Mat P = Mat::Zero(mdp.S * mdp.A, mdp.S);
    for (int s = 0; s < mdp.S; ++s)
      for (int a = 0; a < m; ++a) P(mdp.sa(s, a), a % F) = 1.0;
    mdp.transition.push_back(P);
    mdp.reward.push_back(Mat::Zero(mdp.S, mdp.A));
  }
  mdp.init = Vec::Zero(mdp.S);
  mdp.init[F] = 1.0;

  auto phi = [&](int s) {
    Vec v(3);
    double b = M_PI * (s % F) / 2.0;
    v << 1.0, std::cos(b), std::sin(b);
    return v;
  };
  std::vector<QTuple> members;
  for (int j = 0; j < m; ++j) {
    double th = 2.0 * M_PI * j / m;
    Vec u(3);
    u << 0.1, 0.1 * std::cos(th), 0.1 * std::sin(th);
    Mat q1(mdp.S, mdp.A);  // action-independent feature value at the landing state
    for (int s = 0; s < mdp.S; ++s)
      for (int a = 0; a < m; ++a) q1(s, a) = u.dot(phi(a % F));
    Mat q2(mdp.S, mdp.A);  // value of the state itself, action-independent
    for (int s = 0; s < mdp.S; ++s)
      for (int a = 0; a < m; ++a) q2(s, a) = u.dot(phi(s));
    members.push_back({{q1, q2}});
  }
  inst.fc = make_class(2, mdp.S, mdp.A, members);
  return inst;
}

}  // namespace

TEST_CASE("longest independent sequence on hand-checkable matrices") {
  // identity expectations: every column is independent of disjoint prefixes
  Mat I3 = Mat::Identity(3, 3);
  SequenceCertificate c = de_dimension(I3, 0.5);
  CHECK(c.value == 3);
  CHECK(c.exact);
  CHECK(verify_sequence_certificate(I3, 0.5, c));
  // nothing exceeds eps' = 1
  CHECK(de_dimension(I3, 1.0).value == 0);
  // all-zero function class
  CHECK(de_dimension(Mat::Zero(2, 4), 0.1).value == 0);
  // single column: exactly 1 iff some |E| > eps
  Mat one(2, 1);
  one << 0.3, -0.6;
  CHECK(de_dimension(one, 0.5).value == 1);
  CHECK(de_dimension(one, 0.7).value == 0);
}

TEST_CASE("the threshold search prefers longer sequences at lower eps-prime") {
  // column 0 scores 1.0, columns 1 and 2 score 0.4 with orthogonal support:
  // at eps' just below 1 only one element fits; at eps' = 0.25 all three do
  Mat E(3, 3);
  E << 1.0, 0.0, 0.0, 0.0, 0.4, 0.0, 0.0, 0.0, 0.4;
  SequenceCertificate lo = de_dimension(E, 0.25);
  CHECK(lo.value == 3);
  SequenceCertificate hi = de_dimension(E, 0.5);
  CHECK(hi.value == 1);
  CHECK(hi.eps_prime >= 0.5);
}

TEST_CASE("eluder dimension equals the difference-class identity on random instances") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Mat values = random_values(5 + seed % 3, 5 + seed % 2, 1000 + seed);
    for (double eps : {0.3, 0.8}) {
      EluderCertificate ec = eluder_dimension(values, eps);
      REQUIRE(ec.seq.exact);
      CHECK(ec.seq.value == eluder_via_differences(values, eps));
      CHECK(verify_eluder_certificate(values, eps, ec));
    }
  }
}

TEST_CASE("dimension values are monotone in eps") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    Mat values = random_values(6, 6, 2000 + seed);
    int prev = -1;
    for (double eps : {0.1, 0.2, 0.4, 0.8, 1.6}) {
      int v = eluder_dimension(values, eps).seq.value;
      if (prev >= 0) CHECK(v <= prev);
      prev = v;
    }
    Mat E = random_values(6, 8, 3000 + seed);
    prev = -1;
    for (double eps : {0.1, 0.2, 0.4, 0.8}) {
      int v = de_dimension(E, eps).value;
      if (prev >= 0) CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("tampered certificates fail re-verification") {
  Mat values = random_values(6, 6, 42);
  EluderCertificate ec = eluder_dimension(values, 0.3);
  REQUIRE(ec.seq.value >= 2);
  CHECK(verify_eluder_certificate(values, 0.3, ec));

  EluderCertificate longer = ec;
  longer.seq.witness.push_back(longer.seq.witness[0]);  // repeated point
  longer.cert_pair.push_back(longer.cert_pair[0]);
  longer.seq.value++;
  CHECK_FALSE(verify_eluder_certificate(values, 0.3, longer));

  EluderCertificate wrong = ec;
  wrong.seq.eps_prime = wrong.seq.eps_prime * 3 + 1;  // too demanding now
  CHECK_FALSE(verify_eluder_certificate(values, 0.3, wrong));

  Mat E = random_values(5, 7, 43);
  SequenceCertificate sc = de_dimension(E, 0.2);
  REQUIRE(sc.value >= 2);
  CHECK(verify_sequence_certificate(E, 0.2, sc));
  // rotating the certifying rows away from their witnesses breaks the check
  SequenceCertificate bad_rows = sc;
  for (int& r : bad_rows.cert_row) r = (r + 1) % E.rows();
  bool any_changed = false;
  for (size_t i = 0; i < sc.cert_row.size(); ++i)
    any_changed |= sc.cert_row[i] != bad_rows.cert_row[i];
  REQUIRE(any_changed);
  CHECK_FALSE(verify_sequence_certificate(E, 0.2, bad_rows));
}

TEST_CASE("zoo facts hold with verified certificates") {
  for (const NamedInstance& inst :
       {make_indicator_bandit(4), make_indicator_bandit(6), make_state_indicator(4),
        make_sign_flip(4)}) {
    for (const FactCheck& fcheck : check_facts(inst)) {
      INFO(inst.name, " measure ", measure_name(fcheck.fact.measure), " eps ", fcheck.eps);
      CHECK(fcheck.pass);
    }
  }
}

TEST_CASE("be certificates re-verify against the expectation matrix") {
  NamedInstance inst = make_random_closure(3, 2, 3, 1, 21);
  for (RollinKind family : {RollinKind::Greedy, RollinKind::Dirac}) {
    for (bool v_type : {false, true}) {
      BeResult r = v_type ? vbe_dimension(inst.mdp, inst.fc, family, 0.1)
                          : be_dimension(inst.mdp, inst.fc, family, 0.1);
      for (int h = 0; h < inst.fc.H; ++h) {
        BeMatrix bm = be_expectation_matrix(inst.mdp, inst.fc, h, family, v_type);
        CHECK(bm.residual_member == r.residual_member[h]);
        CHECK(bm.family_member == r.family_member[h]);
        CHECK(verify_sequence_certificate(bm.E, 0.1, r.per_step[h]));
      }
    }
  }
}

TEST_CASE("numeric rank recovers planted factorizations") {
  CHECK(numeric_rank(Mat::Zero(4, 4)) == 0);
  CHECK(numeric_rank(Mat::Identity(5, 5)) == 5);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Mat phi = random_values(8, 3, 4000 + seed);
    Mat psi = random_values(7, 3, 5000 + seed);
    CHECK(numeric_rank(phi * psi.transpose()) == 3);
  }
  // a directionally tiny component is below the relative tolerance
  Mat M = Mat::Zero(3, 3);
  M(0, 0) = 1.0;
  M(1, 1) = 1e-12;
  CHECK(numeric_rank(M) == 1);
  CHECK(numeric_rank(M, 1e-14) == 2);
}

TEST_CASE("bellman rank: optimal singleton is zero, q-type and v-type diagonals agree") {
  NamedInstance inst = make_random_closure(3, 2, 2, 1, 33);
  QTuple qstar = optimal_q(inst.mdp);
  FunctionClass singleton = make_class(inst.mdp.H, inst.mdp.S, inst.mdp.A, {qstar});
  CHECK(bellman_rank(inst.mdp, singleton).value == 0);

  for (int h = 0; h < inst.fc.H; ++h) {
    Mat mq = bellman_error_matrix(inst.mdp, inst.fc, h, false).M;
    Mat mv = bellman_error_matrix(inst.mdp, inst.fc, h, true).M;
    CHECK((mq.diagonal() - mv.diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
    // the optimal member's row is identically zero
    int qi = find_member(inst.fc, qstar);
    REQUIRE(qi >= 0);
    CHECK(mq.row(qi).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(mv.row(qi).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("planted cosine family: rank stays 3 and be dimension is unchanged when m doubles") {
  NamedInstance small = cosine_plant(6);
  NamedInstance big = cosine_plant(12);

  RankResult rs = bellman_rank(small.mdp, small.fc);
  RankResult rb = bellman_rank(big.mdp, big.fc);
  CHECK(rs.value == 3);
  CHECK(rb.value == 3);
  CHECK(rs.per_step[0] == 0);  // step-1 residuals vanish by construction

  for (double eps : {0.05, 0.1}) {
    BeResult bs = be_dimension(small.mdp, small.fc, RollinKind::Greedy, eps);
    BeResult bb = be_dimension(big.mdp, big.fc, RollinKind::Greedy, eps);
    REQUIRE(bs.per_step[1].exact);
    REQUIRE(bb.per_step[1].exact);
    CHECK(bs.value == bb.value);
    CHECK(bs.value >= 1);
  }
}

TEST_CASE("effective dimension: scalar oracle and flags") {
  // single unit vector: smallest n with log(1+n)/n <= 1/e is 5
  std::vector<Vec> unit = {Vec::Ones(1)};
  EffDimResult r = effective_dimension(unit, 1.0);
  CHECK(r.value == 5);
  CHECK(r.exact);

  std::vector<Vec> zero = {Vec::Zero(3)};
  CHECK(effective_dimension(zero, 0.5).value == 1);

  // monotone in eps
  std::vector<Vec> xs;
  for (uint64_t s = 0; s < 4; ++s) {
    Vec v = random_values(3, 1, 6000 + s).col(0);
    xs.push_back(v / std::max(1.0, v.norm()));
  }
  int prev = -1;
  for (double eps : {0.5, 0.8, 1.2}) {
    EffDimResult e = effective_dimension(xs, eps);
    REQUIRE(e.exact);
    if (prev >= 0) CHECK(e.value <= prev);
    prev = e.value;
  }
}

TEST_CASE("eluder dimension of unit-ball linear classes is at most the effective dimension") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(7000 + seed);
    const int nx = 5 + static_cast<int>(seed % 2);
    std::vector<Vec> xs;
    for (int i = 0; i < nx; ++i) {
      Vec v(3);
      for (int d = 0; d < 3; ++d) v[d] = 2.0 * rng.uniform01() - 1.0;
      if (v.norm() > 1.0) v /= v.norm();
      xs.push_back(v);
    }
    Mat values(6, nx);
    for (int i = 0; i < 6; ++i) {
      Vec w(3);
      for (int d = 0; d < 3; ++d) w[d] = 2.0 * rng.uniform01() - 1.0;
      if (w.norm() > 1.0) w /= w.norm();
      for (int j = 0; j < nx; ++j) values(i, j) = w.dot(xs[j]);
    }
    const double eps = 1.0;
    EluderCertificate ec = eluder_dimension(values, eps);
    SearchOptions opts;
    opts.node_cap = 200000000;
    EffDimResult ed = effective_dimension(xs, eps / 2, opts);
    REQUIRE(ec.seq.exact);
    REQUIRE(ed.exact);
    CHECK(ec.seq.value <= ed.value);
  }
}
