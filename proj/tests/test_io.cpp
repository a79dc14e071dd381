#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "beldim/env_zoo.hpp"
#include "beldim/io.hpp"

using namespace beldim;

namespace {

TabularMdp random_mdp(int S, int A, int H, uint64_t seed) {
  Rng rng(seed);
  TabularMdp m;
  m.H = H;
  m.S = S;
  m.A = A;
  for (int h = 0; h < H; ++h) {
    Mat P(S * A, S);
    for (int row = 0; row < S * A; ++row) {
      Vec e(S);
      for (int s = 0; s < S; ++s) e[s] = rng.exponential();
      P.row(row) = (e / e.sum()).transpose();
    }
    m.transition.push_back(P);
    Mat r(S, A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) r(s, a) = rng.uniform01() / H;
    m.reward.push_back(r);
  }
  m.init = Vec::Constant(S, 1.0 / S);
  return m;
}

bool mdp_equal(const TabularMdp& a, const TabularMdp& b) {
  if (a.H != b.H || a.S != b.S || a.A != b.A) return false;
  for (int h = 0; h < a.H; ++h)
    if (a.transition[h] != b.transition[h] || a.reward[h] != b.reward[h]) return false;
  return a.init == b.init;
}

}  // namespace

TEST_CASE("mdp json round-trips bit-exactly") {
  TabularMdp m = random_mdp(4, 3, 3, 11);
  Json j = mdp_to_json(m);
  TabularMdp back = mdp_from_json(j);
  CHECK(mdp_equal(m, back));
  CHECK(j.dump(2) == mdp_to_json(back).dump(2));

  Json broken = j;
  broken["P"][0][0][0][0] = 0.7;  // row no longer sums to one
  CHECK_THROWS_AS((void)mdp_from_json(broken), std::invalid_argument);
  Json ragged = j;
  ragged["r"][0][0].push_back(0.0);
  CHECK_THROWS_AS((void)mdp_from_json(ragged), std::invalid_argument);
}

TEST_CASE("class json round-trips in members and factored form") {
  NamedInstance inst = make_random_closure(3, 2, 2, 1, 5);
  Json j = class_to_json(inst.fc);
  FunctionClass back = class_from_json(j);
  REQUIRE(back.size() == inst.fc.size());
  for (int i = 0; i < back.size(); ++i)
    for (int h = 0; h < back.H; ++h) CHECK(back.members[i].q[h] == inst.fc.members[i].q[h]);
  CHECK(class_to_json(back).dump() == j.dump());

  FunctionClass fac = make_factored_class(
      2, 2, 2, {{Mat::Zero(2, 2), Mat::Ones(2, 2)}, {Mat::Constant(2, 2, 0.5)}});
  Json jf = class_to_json(fac);
  CHECK(jf.contains("factored"));
  FunctionClass fback = class_from_json(jf);
  CHECK(fback.factored);
  CHECK(fback.size() == 2);
  CHECK(class_to_json(fback).dump() == jf.dump());

  CHECK_THROWS_AS((void)class_from_json(Json{{"members", Json::array()}}), std::invalid_argument);
}

TEST_CASE("instance json keeps name, facts, flags, and features") {
  for (const NamedInstance& inst : {make_indicator_bandit(5), make_sign_flip(4),
                                    make_random_closure(3, 2, 2, 1, 9)}) {
    Json j = instance_to_json(inst);
    NamedInstance back = instance_from_json(j);
    CHECK(back.name == inst.name);
    CHECK(back.realizable == inst.realizable);
    CHECK(back.complete == inst.complete);
    REQUIRE(back.facts.size() == inst.facts.size());
    for (size_t i = 0; i < back.facts.size(); ++i) {
      CHECK(back.facts[i].measure == inst.facts[i].measure);
      CHECK(back.facts[i].family == inst.facts[i].family);
      CHECK(back.facts[i].rel == inst.facts[i].rel);
      CHECK(back.facts[i].value == inst.facts[i].value);
      CHECK(back.facts[i].eps_points == inst.facts[i].eps_points);
    }
    CHECK(back.theta == inst.theta);
    CHECK(instance_to_json(back).dump(2) == j.dump(2));
  }
  CHECK(instance_to_json(make_sign_flip(4)).contains("theta") == false);
}

TEST_CASE("name tables round-trip and accept the documented aliases") {
  for (Measure m : {Measure::Eluder, Measure::Be, Measure::Vbe, Measure::Rank})
    CHECK(measure_from_name(measure_name(m)) == m);
  for (Family f : {Family::None, Family::Greedy, Family::Dirac})
    CHECK(family_from_name(family_name(f)) == f);
  for (Relation r : {Relation::LE, Relation::GE, Relation::EQ})
    CHECK(relation_from_name(relation_name(r)) == r);
  CHECK(family_from_name("DF") == Family::Greedy);
  CHECK(family_from_name("DDelta") == Family::Dirac);
  CHECK(family_from_name("") == Family::None);
  CHECK_THROWS_AS((void)measure_from_name("spectral"), std::invalid_argument);
  CHECK_THROWS_AS((void)family_from_name("DFoo"), std::invalid_argument);
  CHECK_THROWS_AS((void)relation_from_name("<"), std::invalid_argument);
}

TEST_CASE("fmt_double prints exact round-trippable decimals") {
  for (double x : {0.1, 1.0 / 3.0, 0.5, 1e-300, 6.02e23, -2.75, 0.0, 1.0 + 1e-15}) {
    CHECK(std::strtod(fmt_double(x).c_str(), nullptr) == x);
  }
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(2.0) == "2");
}

TEST_CASE("atomic text writes land complete and overwrite in place") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "beldim_io_test";
  fs::create_directories(dir);
  const std::string p = (dir / "scratch.txt").string();
  write_text_atomic(p, "first\n");
  CHECK(read_text_file(p) == "first\n");
  write_text_atomic(p, "second line\nwith two rows\n");
  CHECK(read_text_file(p) == "second line\nwith two rows\n");
  CHECK_FALSE(fs::exists(p + ".tmp"));
  fs::remove_all(dir);
  CHECK_THROWS_AS((void)read_text_file(p), std::runtime_error);
}

TEST_CASE("csv emitters honour their header and cell contracts") {
  GolfResult g;
  g.episodes.push_back({0, 2, 0.5, 0.25, 0.25, 0.25, 3, true});
  g.episodes.push_back({1, 0, 0.5, 0.5, 0.0, 0.25, 2, true});
  CHECK(golf_episodes_csv(g) ==
        "k,f_index,opt_value,policy_value,regret,cum_regret,b_size\n"
        "0,2,0.5,0.25,0.25,0.25,3\n"
        "1,0,0.5,0.5,0,0.25,2\n");

  OliveResult o;
  OlivePhase p;
  p.phase = 1;
  p.f_index = 4;
  p.sum_err = 0.5;
  p.activated_step = 0;
  p.eliminated = 3;
  p.survivors = 2;
  o.phases.push_back(p);
  CHECK(olive_phases_csv(o) ==
        "phase,f_index,sum_err,activated_step,eliminated,survivors\n"
        "1,4,0.5,0,3,2\n");

  Dataset d(2);
  d.append(0, {1, 0, 0.5, 2});
  d.append(1, {2, 1, 0.125, 0});
  CHECK(dataset_csv(d) ==
        "h,s,a,r,s_next\n"
        "0,1,0,0.5,2\n"
        "1,2,1,0.125,0\n");
}
