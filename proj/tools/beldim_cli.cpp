// beldim: generate benchmark instances, compute complexity measures, and run
// the optimistic agents. Subcommands: gen | dims | run | sweep.
// Exit codes: 0 success, 2 usage error, 3 runtime abort.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "beldim/io.hpp"

namespace fs = std::filesystem;
using namespace beldim;

namespace {

int env_threads() {
  if (const char* s = std::getenv("BELDIM_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return std::min(v, 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, std::min(static_cast<int>(hw), 8));
}

// index-stable fan-out; results land in caller-owned slots
void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(env_threads(), std::max(n, 1));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

std::vector<uint64_t> parse_seed_list(const std::string& spec) {
  std::vector<uint64_t> seeds;
  size_t dots = spec.find("..");
  if (dots != std::string::npos) {
    uint64_t lo = std::stoull(spec.substr(0, dots));
    uint64_t hi = std::stoull(spec.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--seeds", "range is reversed");
    for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
  return seeds;
}

std::vector<int> parse_int_list(const std::string& spec, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

NamedInstance load_instance(const std::string& path) {
  return instance_from_json(Json::parse(read_text_file(path)));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  double pos = q * (v.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

void write_json(const std::string& path, const Json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

// ---- gen ----

struct GenArgs {
  std::string kind;
  int m = 6;
  int S = 4, A = 2, H = 3, n_seeds = 2;
  uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  NamedInstance inst;
  if (a.kind == "indicator_bandit") inst = make_indicator_bandit(a.m);
  else if (a.kind == "state_indicator") inst = make_state_indicator(a.m);
  else if (a.kind == "sign_flip") inst = make_sign_flip(a.m);
  else if (a.kind == "random_closure")
    inst = make_random_closure(a.S, a.A, a.H, a.n_seeds, a.seed);
  else throw CLI::ValidationError("kind", "unknown instance kind: " + a.kind);

  write_json(a.out, instance_to_json(inst));
  std::cout << "instance " << inst.name << ": members=" << inst.fc.size()
            << " realizable=" << (inst.realizable ? "yes" : "no")
            << " complete=" << (inst.complete ? "yes" : "no") << "\n";
  for (const Fact& f : inst.facts) {
    std::cout << "  fact " << measure_name(f.measure);
    if (f.family != Family::None) std::cout << "(" << family_name(f.family) << ")";
    std::cout << " " << relation_name(f.rel) << " " << f.value;
    if (!f.eps_points.empty()) {
      std::cout << " @eps=";
      for (size_t i = 0; i < f.eps_points.size(); ++i)
        std::cout << (i ? "," : "") << fmt_double(f.eps_points[i]);
    }
    std::cout << "\n";
  }
  return 0;
}

// ---- dims ----

struct DimsArgs {
  std::string instance;
  std::string measure = "be";
  std::string family = "greedy";
  double eps = 0.1;
  std::string out;
};

Json seq_cert_json(const SequenceCertificate& c) {
  Json j;
  j["value"] = c.value;
  j["eps_prime"] = c.eps_prime;
  j["exact"] = c.exact;
  j["witness"] = c.witness;
  return j;
}

int cmd_dims(const DimsArgs& a) {
  NamedInstance inst = load_instance(a.instance);
  const std::string& m = a.measure;
  if (m != "eluder" && m != "de" && m != "be" && m != "vbe" && m != "rank" &&
      m != "vrank" && m != "effdim")
    throw CLI::ValidationError("--measure",
                               "must be eluder, de, be, vbe, rank, vrank, or effdim");
  Family family = family_from_name(a.family);
  RollinKind rk = family == Family::Dirac ? RollinKind::Dirac : RollinKind::Greedy;

  Json rep;
  rep["measure"] = a.measure;
  rep["family"] = family_name(family);
  rep["eps"] = a.eps;
  rep["instance"] = inst.name;
  Json per_step = Json::array();

  if (m == "be" || m == "de" || m == "vbe") {
    // "de" is the distributional-Eluder view of the residual class: the same
    // per-step search as "be", reported under the generic name.
    BeResult r = m == "vbe" ? vbe_dimension(inst.mdp, inst.fc, rk, a.eps)
                            : be_dimension(inst.mdp, inst.fc, rk, a.eps);
    rep["value"] = r.value;
    rep["exact"] = true;
    for (int h = 0; h < inst.fc.H; ++h) {
      rep["exact"] = rep["exact"].get<bool>() && r.per_step[h].exact;
      Json sj = seq_cert_json(r.per_step[h]);
      sj["h"] = h;
      per_step.push_back(std::move(sj));
    }
    rep["eps_prime"] = r.per_step[r.argmax_h].eps_prime;
    rep["witness"] = r.per_step[r.argmax_h].witness;
  } else if (m == "eluder") {
    int best_h = 0;
    std::vector<EluderCertificate> certs;
    for (int h = 0; h < inst.fc.H; ++h) {
      Mat values(inst.fc.layer_tables[h].size(), inst.mdp.S * inst.mdp.A);
      for (size_t i = 0; i < inst.fc.layer_tables[h].size(); ++i)
        for (int s = 0; s < inst.mdp.S; ++s)
          for (int aa = 0; aa < inst.mdp.A; ++aa)
            values(i, inst.mdp.sa(s, aa)) = inst.fc.layer_tables[h][i](s, aa);
      certs.push_back(eluder_dimension(values, a.eps));
      if (certs[h].seq.value > certs[best_h].seq.value) best_h = h;
      Json sj = seq_cert_json(certs[h].seq);
      sj["h"] = h;
      per_step.push_back(std::move(sj));
    }
    rep["value"] = certs[best_h].seq.value;
    rep["exact"] = true;
    for (const auto& c : certs) rep["exact"] = rep["exact"].get<bool>() && c.seq.exact;
    rep["eps_prime"] = certs[best_h].seq.eps_prime;
    rep["witness"] = certs[best_h].seq.witness;
  } else if (m == "rank" || m == "vrank") {
    RankResult r = bellman_rank(inst.mdp, inst.fc, m == "vrank");
    rep["value"] = r.value;
    rep["exact"] = true;
    rep["eps_prime"] = 0.0;
    rep["witness"] = Json::array();
    for (int h = 0; h < inst.fc.H; ++h) {
      Json sj;
      sj["h"] = h;
      sj["value"] = r.per_step[h];
      sj["zeta"] = r.zeta[h];
      per_step.push_back(std::move(sj));
    }
  } else {  // effdim over the instance's feature vectors
    if (inst.theta.size() == 0)
      throw std::runtime_error("instance carries no feature vectors; effdim needs them");
    std::vector<Vec> xs;
    for (int j = 0; j < inst.theta.cols(); ++j) xs.push_back(inst.theta.col(j));
    EffDimResult r = effective_dimension(xs, a.eps);
    rep["value"] = r.value;
    rep["exact"] = r.exact;
    rep["eps_prime"] = 0.0;
    rep["witness"] = Json::array();
    if (!r.exact) {
      rep["lower_bound"] = r.lower_bound;
      rep["greedy_value"] = r.greedy_value;
    }
  }
  rep["per_step"] = std::move(per_step);
  rep["config"] = Json{{"instance", a.instance}, {"measure", a.measure},
                       {"family", family_name(family)}, {"eps", a.eps}};

  std::cout << a.measure << "(" << inst.name << ", eps=" << fmt_double(a.eps)
            << ") = " << rep["value"].get<int>()
            << (rep["exact"].get<bool>() ? "" : " (lower bound)") << "\n";
  if (!a.out.empty()) write_json(a.out, rep);
  return 0;
}

// ---- run ----

struct RunArgs {
  std::string agent = "golf";
  std::string instance;
  std::string outdir;
  std::string seeds = "1";
  std::string mode = "mc";
  int K = 1000;
  double beta = -1.0;
  double eps = 0.1;
  int d = -1;
  double zeta_act = -1.0, zeta_elim = -1.0;
  long long n_act = -1, n_elim = -1;
  int max_phases = -1;
  double c = 4.0, delta = 0.01, n_scale = 1.0, zeta_scale = 1.0;
};

ExecMode parse_mode(const std::string& s) {
  if (s == "mc") return ExecMode::MonteCarlo;
  if (s == "exact") return ExecMode::ExactLoss;
  throw CLI::ValidationError("--mode", "must be mc or exact");
}

int cmd_run(const RunArgs& a) {
  NamedInstance inst = load_instance(a.instance);
  std::vector<uint64_t> seeds = parse_seed_list(a.seeds);
  fs::create_directories(a.outdir);
  ExecMode mode = parse_mode(a.mode);
  const bool is_golf = a.agent == "golf" || a.agent == "vgolf";
  const bool v_type = a.agent == "vgolf" || a.agent == "volive";
  if (!is_golf && a.agent != "olive" && a.agent != "volive")
    throw CLI::ValidationError("--agent", "must be golf, vgolf, olive, or volive");

  Json summary;
  summary["agent"] = a.agent;
  summary["instance"] = inst.name;
  Json results = Json::array();

  if (is_golf) {
    GolfConfig cfg;
    cfg.K = a.K;
    cfg.beta = a.beta;
    cfg.mode = mode;
    const double beta_used =
        a.beta < 0.0 ? default_golf_beta(inst.fc, {}, a.K) : a.beta;
    summary["config"] = Json{{"K", a.K},        {"beta", beta_used},
                             {"mode", a.mode},  {"seeds", a.seeds},
                             {"agent", a.agent}};

    std::vector<GolfResult> runs(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), [&](int i) {
      GolfConfig c2 = cfg;
      c2.seed = seeds[i];
      runs[i] = v_type ? run_vgolf(inst.mdp, inst.fc, c2) : run_golf(inst.mdp, inst.fc, c2);
    });
    for (size_t i = 0; i < seeds.size(); ++i) {
      const GolfResult& r = runs[i];
      std::string csv_path = a.outdir + "/" + a.agent + "_seed" + std::to_string(seeds[i]) + ".csv";
      write_text_atomic(csv_path, golf_episodes_csv(r));
      Json row;
      row["seed"] = seeds[i];
      row["status"] = status_name(r.status);
      row["episodes"] = r.episodes.size();
      row["final_cum_regret"] = r.episodes.empty() ? 0.0 : r.episodes.back().cum_regret;
      row["out_member"] = r.out_member;
      row["out_value"] = r.out_value;
      row["best_value"] = r.best_value;
      row["vstar"] = r.vstar;
      row["qstar_in_final_b"] = r.episodes.empty() ? true : r.episodes.back().qstar_in_b;
      results.push_back(std::move(row));
    }
    std::vector<double> finals;
    for (const auto& r : runs)
      finals.push_back(r.episodes.empty() ? 0.0 : r.episodes.back().cum_regret);
    summary["aggregate"] =
        Json{{"median_final_cum_regret", median(finals)},
             {"q25", quantile(finals, 0.25)},
             {"q75", quantile(finals, 0.75)}};
  } else {
    OliveConfig cfg;
    cfg.mode = mode;
    int d_used = a.d;
    if (a.zeta_act > 0.0 && a.zeta_elim > 0.0 && a.n_act > 0 && a.n_elim > 0) {
      cfg.zeta_act = a.zeta_act;
      cfg.zeta_elim = a.zeta_elim;
      cfg.n_act = a.n_act;
      cfg.n_elim = a.n_elim;
      cfg.max_phases = a.max_phases > 0 ? a.max_phases : 1000;
    } else {
      if (d_used < 1) {
        double be_eps = a.eps / inst.fc.H;
        d_used = v_type ? vbe_dimension(inst.mdp, inst.fc, RollinKind::Greedy, be_eps).value
                        : be_dimension(inst.mdp, inst.fc, RollinKind::Greedy, be_eps).value;
        d_used = std::max(d_used, 1);
      }
      cfg = olive_config_from_theorem(a.eps, d_used, inst.fc.H, inst.fc.size(),
                                      v_type ? inst.fc.A : 0, a.delta, a.c, a.n_scale,
                                      a.zeta_scale);
      cfg.mode = mode;
      if (a.max_phases > 0) cfg.max_phases = a.max_phases;
    }
    summary["config"] = Json{{"zeta_act", cfg.zeta_act},   {"zeta_elim", cfg.zeta_elim},
                             {"n_act", cfg.n_act},         {"n_elim", cfg.n_elim},
                             {"max_phases", cfg.max_phases}, {"mode", a.mode},
                             {"eps", a.eps},               {"d", d_used},
                             {"seeds", a.seeds},           {"agent", a.agent}};

    std::vector<OliveResult> runs(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), [&](int i) {
      OliveConfig c2 = cfg;
      c2.seed = seeds[i];
      runs[i] = v_type ? run_volive(inst.mdp, inst.fc, c2) : run_olive(inst.mdp, inst.fc, c2);
    });
    for (size_t i = 0; i < seeds.size(); ++i) {
      const OliveResult& r = runs[i];
      std::string csv_path = a.outdir + "/" + a.agent + "_seed" + std::to_string(seeds[i]) + ".csv";
      write_text_atomic(csv_path, olive_phases_csv(r));
      Json row;
      row["seed"] = seeds[i];
      row["status"] = status_name(r.status);
      row["phases"] = r.phases.size();
      row["episodes_used"] = r.episodes_used;
      row["out_member"] = r.out_member;
      row["out_value"] = r.out_value;
      row["vstar"] = r.vstar;
      row["optimality_gap"] = r.vstar - r.out_value;
      row["qstar_survived"] = r.qstar_survived;
      results.push_back(std::move(row));
    }
    std::vector<double> gaps;
    for (const auto& r : runs) gaps.push_back(r.vstar - r.out_value);
    summary["aggregate"] = Json{{"median_optimality_gap", median(gaps)}};
  }

  summary["results"] = std::move(results);
  write_json(a.outdir + "/run_summary.json", summary);
  std::cout << "wrote " << a.outdir << "/run_summary.json (" << seeds.size() << " seeds)\n";
  return 0;
}

// ---- sweep ----

struct SweepArgs {
  std::string agent;
  std::string instance;
  std::string Ks;
  std::string seeds = "1..10";
  std::string mode = "mc";
  double beta = -1.0;
  std::string measure;
  std::string family = "greedy";
  std::string gen_kind;
  std::string ms;
  double eps = 0.5;
  std::string outdir;
};

int cmd_sweep(const SweepArgs& a) {
  fs::create_directories(a.outdir);
  if (!a.agent.empty()) {
    if (a.agent != "golf" && a.agent != "vgolf")
      throw CLI::ValidationError("--agent", "sweep supports golf or vgolf");
    NamedInstance inst = load_instance(a.instance);
    std::vector<int> Ks = parse_int_list(a.Ks, "--Ks");
    std::vector<uint64_t> seeds = parse_seed_list(a.seeds);
    ExecMode mode = parse_mode(a.mode);

    struct Unit {
      int K;
      uint64_t seed;
    };
    std::vector<Unit> units;
    for (int K : Ks)
      for (uint64_t s : seeds) units.push_back({K, s});
    std::vector<double> finals(units.size());
    parallel_for(static_cast<int>(units.size()), [&](int i) {
      GolfConfig cfg;
      cfg.K = units[i].K;
      cfg.beta = a.beta;
      cfg.mode = mode;
      cfg.seed = units[i].seed;
      GolfResult r = a.agent == "vgolf" ? run_vgolf(inst.mdp, inst.fc, cfg)
                                        : run_golf(inst.mdp, inst.fc, cfg);
      finals[i] = r.episodes.empty() ? 0.0 : r.episodes.back().cum_regret;
    });

    std::string csv = "K,median_final_cum_regret,q25,q75,n_seeds\n";
    Json rows = Json::array();
    for (size_t ki = 0; ki < Ks.size(); ++ki) {
      std::vector<double> vals;
      for (size_t si = 0; si < seeds.size(); ++si) vals.push_back(finals[ki * seeds.size() + si]);
      double med = median(vals), lo = quantile(vals, 0.25), hi = quantile(vals, 0.75);
      csv += std::to_string(Ks[ki]) + "," + fmt_double(med) + "," + fmt_double(lo) + "," +
             fmt_double(hi) + "," + std::to_string(seeds.size()) + "\n";
      rows.push_back(Json{{"K", Ks[ki]}, {"median_final_cum_regret", med}, {"q25", lo},
                          {"q75", hi}});
    }
    write_text_atomic(a.outdir + "/sweep_" + a.agent + ".csv", csv);
    Json summary;
    summary["agent"] = a.agent;
    summary["instance"] = inst.name;
    summary["config"] = Json{{"Ks", a.Ks}, {"seeds", a.seeds}, {"mode", a.mode},
                             {"beta", a.beta}, {"agent", a.agent}};
    summary["rows"] = std::move(rows);
    write_json(a.outdir + "/sweep_summary.json", summary);
    std::cout << "wrote " << a.outdir << "/sweep_" << a.agent << ".csv\n";
    return 0;
  }

  if (a.measure.empty() || a.gen_kind.empty())
    throw CLI::ValidationError("sweep", "need either --agent or --measure with --gen");
  std::vector<int> ms = parse_int_list(a.ms, "--ms");
  Measure measure = measure_from_name(a.measure);
  Family family = family_from_name(a.family);
  RollinKind rk = family == Family::Dirac ? RollinKind::Dirac : RollinKind::Greedy;

  std::string csv = "m,value,eps_prime,exact\n";
  Json rows = Json::array();
  for (int m : ms) {
    NamedInstance inst;
    if (a.gen_kind == "indicator_bandit") inst = make_indicator_bandit(m);
    else if (a.gen_kind == "state_indicator") inst = make_state_indicator(m);
    else if (a.gen_kind == "sign_flip") inst = make_sign_flip(m);
    else throw CLI::ValidationError("--gen", "sweep supports the fixed-family generators");

    int value = 0;
    double eps_prime = 0.0;
    bool exact = true;
    if (measure == Measure::Rank) {
      value = bellman_rank(inst.mdp, inst.fc).value;
    } else if (measure == Measure::Eluder) {
      Mat values(inst.fc.size(), inst.mdp.S * inst.mdp.A);
      for (int i = 0; i < inst.fc.size(); ++i)
        for (int s = 0; s < inst.mdp.S; ++s)
          for (int aa = 0; aa < inst.mdp.A; ++aa)
            values(i, inst.mdp.sa(s, aa)) = inst.fc.members[i].q[0](s, aa);
      EluderCertificate c = eluder_dimension(values, a.eps);
      value = c.seq.value;
      eps_prime = c.seq.eps_prime;
      exact = c.seq.exact;
    } else {
      BeResult r = measure == Measure::Be ? be_dimension(inst.mdp, inst.fc, rk, a.eps)
                                          : vbe_dimension(inst.mdp, inst.fc, rk, a.eps);
      value = r.value;
      eps_prime = r.per_step[r.argmax_h].eps_prime;
      for (const auto& s : r.per_step) exact = exact && s.exact;
    }
    csv += std::to_string(m) + "," + std::to_string(value) + "," + fmt_double(eps_prime) + "," +
           (exact ? "1" : "0") + "\n";
    rows.push_back(Json{{"m", m}, {"value", value}, {"eps_prime", eps_prime}, {"exact", exact}});
  }
  write_text_atomic(a.outdir + "/sweep_dims.csv", csv);
  Json summary;
  summary["measure"] = a.measure;
  summary["family"] = family_name(family);
  summary["gen"] = a.gen_kind;
  summary["config"] = Json{{"ms", a.ms}, {"eps", a.eps}, {"measure", a.measure},
                           {"family", family_name(family)}, {"gen", a.gen_kind}};
  summary["rows"] = std::move(rows);
  write_json(a.outdir + "/sweep_summary.json", summary);
  std::cout << "wrote " << a.outdir << "/sweep_dims.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-class complexity measures and optimistic agents for episodic MDPs"};
  app.require_subcommand(1);
  app.set_config("--config");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a benchmark instance");
  gen_cmd->add_option("kind", gen.kind,
                      "indicator_bandit | state_indicator | sign_flip | random_closure")
      ->required();
  gen_cmd->add_option("--m", gen.m, "family size for the fixed constructions");
  gen_cmd->add_option("--S", gen.S, "states (random_closure)");
  gen_cmd->add_option("--A", gen.A, "actions (random_closure)");
  gen_cmd->add_option("--H", gen.H, "horizon (random_closure)");
  gen_cmd->add_option("--n-seeds", gen.n_seeds, "seed tables per step (random_closure)");
  gen_cmd->add_option("--seed", gen.seed, "generator seed (random_closure)");
  gen_cmd->add_option("--out", gen.out, "output instance JSON path")->required();

  DimsArgs dims;
  CLI::App* dims_cmd = app.add_subcommand("dims", "compute a complexity measure");
  dims_cmd->add_option("--instance", dims.instance, "instance JSON path")->required();
  dims_cmd->add_option("--measure", dims.measure, "eluder | be | vbe | rank");
  dims_cmd->add_option("--family", dims.family, "greedy | dirac (be/vbe only)");
  dims_cmd->add_option("--eps", dims.eps, "scale parameter");
  dims_cmd->add_option("--out", dims.out, "report JSON path");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "run an agent across seeds");
  run_cmd->add_option("--agent", run.agent, "golf | vgolf | olive | volive")->required();
  run_cmd->add_option("--instance", run.instance, "instance JSON path")->required();
  run_cmd->add_option("--outdir", run.outdir, "output directory")->required();
  run_cmd->add_option("--seeds", run.seeds, "e.g. 1,2,3 or 1..20");
  run_cmd->add_option("--mode", run.mode, "mc | exact");
  run_cmd->add_option("--K", run.K, "episodes (golf/vgolf)");
  run_cmd->add_option("--beta", run.beta, "confidence width (negative: default)");
  run_cmd->add_option("--eps", run.eps, "target accuracy (olive defaults)");
  run_cmd->add_option("--d", run.d, "dimension used by the olive defaults (negative: compute)");
  run_cmd->add_option("--zeta-act", run.zeta_act, "activation threshold override");
  run_cmd->add_option("--zeta-elim", run.zeta_elim, "elimination threshold override");
  run_cmd->add_option("--n-act", run.n_act, "activation episodes override");
  run_cmd->add_option("--n-elim", run.n_elim, "elimination episodes override");
  run_cmd->add_option("--max-phases", run.max_phases, "phase cap override");
  run_cmd->add_option("--c", run.c, "log-factor constant in the olive defaults");
  run_cmd->add_option("--delta", run.delta, "failure probability in the olive defaults");
  run_cmd->add_option("--n-scale", run.n_scale, "divide olive episode counts");
  run_cmd->add_option("--zeta-scale", run.zeta_scale, "multiply olive thresholds");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid over K (agents) or m (dims)");
  sweep_cmd->add_option("--agent", sweep.agent, "golf | vgolf");
  sweep_cmd->add_option("--instance", sweep.instance, "instance JSON path (agent sweep)");
  sweep_cmd->add_option("--Ks", sweep.Ks, "episode grid, e.g. 250,500,1000");
  sweep_cmd->add_option("--seeds", sweep.seeds, "seed list or range");
  sweep_cmd->add_option("--mode", sweep.mode, "mc | exact");
  sweep_cmd->add_option("--beta", sweep.beta, "confidence width (negative: default)");
  sweep_cmd->add_option("--measure", sweep.measure, "dims sweep measure");
  sweep_cmd->add_option("--family", sweep.family, "greedy | dirac");
  sweep_cmd->add_option("--gen", sweep.gen_kind, "generator for the dims sweep");
  sweep_cmd->add_option("--ms", sweep.ms, "family-size grid, e.g. 4,6,8");
  sweep_cmd->add_option("--eps", sweep.eps, "scale parameter for the dims sweep");
  sweep_cmd->add_option("--outdir", sweep.outdir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (dims_cmd->parsed()) return cmd_dims(dims);
    if (run_cmd->parsed()) return cmd_run(run);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
