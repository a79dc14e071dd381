#pragma once

#include "beldim/dims.hpp"

namespace beldim {

enum class Measure { Eluder, Be, Vbe, Rank };
enum class Family { None, Greedy, Dirac };
enum class Relation { LE, GE, EQ };

// A checkable claim about an instance: measure (at the given family) compared
// against value at every eps in eps_points.
struct Fact {
  Measure measure;
  Family family;
  Relation rel;
  int value;
  std::vector<double> eps_points;
};

struct NamedInstance {
  std::string name;
  TabularMdp mdp;
  FunctionClass fc;
  std::vector<Fact> facts;
  bool realizable = false;
  bool complete = false;
  Mat theta;  // optional feature metadata (columns index members); 0x0 when absent
};

struct FactCheck {
  Fact fact;
  double eps;
  int measured;
  bool pass;
};

std::vector<FactCheck> check_facts(const NamedInstance& inst, const SearchOptions& opts = {});

// m-armed bandit (H=1, S=1) where member i values every arm at 1 and its own
// arm at 2. Eluder dimension m-1, Bellman rank m, both Bellman-Eluder
// dimensions stay bounded (<= 5 at eps = 1/2).
NamedInstance make_indicator_bandit(int m);

// H=1, m states, 2 actions, start state 0; member i adds an indicator bump at
// state i and every member prefers action 0. All greedy roll-ins collapse to
// one distribution (greedy-family dimension 1) while the Dirac family sees the
// m indicator residuals (dimension >= m).
NamedInstance make_state_indicator(int m);

// H=1, two states drawn uniformly, m actions; values flip sign with the state
// and member i adds 0.5 on action i. Greedy roll-ins average the flip away
// only on the matching member (greedy-family dimension >= m) while Dirac
// point masses see large values everywhere (Dirac-family dimension <= 10).
NamedInstance make_sign_flip(int m);

// Random dense MDP (Dirichlet transition rows, uniform rewards scaled by 1/H,
// fixed start state) with a class closed under the Bellman backup from random
// seed tables. Layer-h seeds are drawn in [0, (H-h)/H] so backups never clamp;
// the class is exactly complete and contains the optimal tuple. Rebuild with
// the same arguments is byte-identical.
NamedInstance make_random_closure(int S, int A, int H, int n_seeds_per_step, uint64_t seed);

}  // namespace beldim
