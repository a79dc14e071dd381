#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "beldim/bellman.hpp"
#include "beldim/env_zoo.hpp"

using namespace beldim;

namespace {

QTuple tuple1(int H, int S, int A, double fill) {
  QTuple f;
  for (int h = 0; h < H; ++h) f.q.push_back(Mat::Constant(S, A, fill));
  return f;
}

TabularMdp tiny_mdp() {
  TabularMdp m;
  m.H = 2;
  m.S = 2;
  m.A = 2;
  for (int h = 0; h < 2; ++h) {
    Mat P(4, 2);
    P << 1, 0, 0, 1, 0.5, 0.5, 1, 0;
    m.transition.push_back(P);
  }
  Mat r(2, 2);
  r << 0.1, 0.0, 0.2, 0.3;
  m.reward = {r, 0.5 * r};
  m.init = Vec::Constant(2, 0.5);
  return m;
}

}  // namespace

TEST_CASE("construction dedupes members and interns layer tables") {
  std::vector<QTuple> members = {tuple1(2, 2, 2, 0.3), tuple1(2, 2, 2, 0.3),
                                 tuple1(2, 2, 2, 0.7)};
  members.push_back(members[0]);
  FunctionClass fc = make_class(2, 2, 2, members);
  CHECK(fc.size() == 2);
  CHECK(fc.layer_tables[0].size() == 2);
  CHECK(fc.layer_tables[1].size() == 2);
  // shared tables are stored once: mix layers of the two values
  QTuple mixed;
  mixed.q = {Mat::Constant(2, 2, 0.3), Mat::Constant(2, 2, 0.7)};
  FunctionClass fc2 = make_class(2, 2, 2, {members[0], members[2], mixed});
  CHECK(fc2.layer_tables[0].size() == 2);
  CHECK(fc2.member_layer[2][0] == fc2.member_layer[0][0]);
  CHECK(fc2.member_layer[2][1] == fc2.member_layer[1][1]);

  CHECK_THROWS(make_class(2, 2, 2, {}));
}

TEST_CASE("factored construction enumerates the product and enforces the cap") {
  std::vector<std::vector<Mat>> layers(2);
  for (int i = 0; i < 3; ++i) layers[0].push_back(Mat::Constant(2, 2, 0.1 * i));
  for (int i = 0; i < 4; ++i) layers[1].push_back(Mat::Constant(2, 2, 0.2 * i));
  layers[1].push_back(layers[1][0]);  // duplicate collapses before the product
  FunctionClass fc = make_factored_class(2, 2, 2, layers);
  CHECK(fc.factored);
  CHECK(fc.size() == 12);
  CHECK(fc.layer_tables[1].size() == 4);

  // 400 * 400 > enumeration cap
  std::vector<std::vector<Mat>> big(2);
  for (int i = 0; i < 400; ++i) {
    big[0].push_back(Mat::Constant(2, 2, 1e-3 * i));
    big[1].push_back(Mat::Constant(2, 2, 1e-3 * i));
  }
  CHECK_THROWS(make_factored_class(2, 2, 2, big));
}

TEST_CASE("greedy policy breaks ties toward the lowest action") {
  QTuple f = tuple1(1, 3, 3, 0.0);
  f.q[0](0, 2) = 1.0;   // unique max
  f.q[0](1, 1) = 0.5;   // tie with action 2
  f.q[0](1, 2) = 0.5;
  Policy pi = greedy_policy(f);
  CHECK(pi.action[0][0] == 2);
  CHECK(pi.action[0][1] == 1);
  CHECK(pi.action[0][2] == 0);  // all-zero row
}

TEST_CASE("closure classes are complete and contain the optimal tuple") {
  TabularMdp m = tiny_mdp();
  std::vector<std::vector<Mat>> seeds(2);
  seeds[0].push_back(Mat::Constant(2, 2, 0.4));
  seeds[1].push_back(Mat::Constant(2, 2, 0.25));
  ClosureResult cr = closure_class(m, seeds, true);
  CHECK_FALSE(cr.clamped);
  CHECK(completeness_defect(m, cr.fc) <= 1e-12);
  CHECK(find_member(cr.fc, optimal_q(m)) >= 0);

  // layer counts: top layer = seed + backup-of-zero, lower = seed + backups
  CHECK(cr.fc.layer_tables[1].size() == 2);
  CHECK(cr.fc.layer_tables[0].size() == 3);
  CHECK(cr.fc.size() == 6);
}

TEST_CASE("closure clamps and reports when a backup exceeds one") {
  TabularMdp m = tiny_mdp();
  m.reward[0] = Mat::Constant(2, 2, 0.9);
  m.reward[1] = Mat::Constant(2, 2, 0.9);  // backups reach 1.8
  std::vector<std::vector<Mat>> seeds(2);
  ClosureResult cr = closure_class(m, seeds, true);
  CHECK(cr.clamped);
  for (const auto& tables : cr.fc.layer_tables)
    for (const Mat& t : tables) CHECK(t.maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("roll-in families deduplicate by distribution, not by member") {
  NamedInstance inst = make_state_indicator(4);
  // every member's greedy policy plays action 0 everywhere -> one distribution
  RollinFamily fam = rollin_family(inst.mdp, inst.fc, 0, DistKind::OverStateAction);
  CHECK(fam.dists.size() == 1);
  CHECK(fam.kept_member[0] == 0);

  NamedInstance sf = make_sign_flip(4);
  // member i prefers action i -> four distinct roll-ins
  RollinFamily fam2 = rollin_family(sf.mdp, sf.fc, 0, DistKind::OverStateAction);
  CHECK(fam2.dists.size() == 4);
}

TEST_CASE("dirac families cover the whole domain") {
  TabularMdp m = tiny_mdp();
  auto qd = dirac_family(m, DistKind::OverStateAction);
  CHECK(qd.size() == 4);
  for (size_t i = 0; i < qd.size(); ++i) {
    CHECK(qd[i].w[i] == doctest::Approx(1.0));
    CHECK(qd[i].w.sum() == doctest::Approx(1.0));
  }
  auto vd = dirac_family(m, DistKind::OverState);
  CHECK(vd.size() == 2);
}

TEST_CASE("range report flags classes outside the unit interval") {
  FunctionClass in01 = make_class(1, 2, 2, {tuple1(1, 2, 2, 0.5)});
  CHECK(validate_range(in01).within_unit);
  NamedInstance ib = make_indicator_bandit(3);  // values in {1, 2}
  RangeReport rr = validate_range(ib.fc);
  CHECK_FALSE(rr.within_unit);
  CHECK(rr.hi == doctest::Approx(2.0));
}

TEST_CASE("version space counts and indexes") {
  VersionSpace b = VersionSpace::full(5);
  CHECK(b.count() == 5);
  b.alive[2] = 0;
  CHECK(b.count() == 4);
  CHECK_FALSE(b[2]);
  CHECK(b[0]);
}
