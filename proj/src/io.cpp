#include "beldim/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace beldim {

namespace {

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty 2d array");
  const size_t cols = j[0].size();
  Mat m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) throw std::invalid_argument("ragged 2d array");
    for (size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace

Json mdp_to_json(const TabularMdp& mdp) {
  Json j;
  j["H"] = mdp.H;
  j["S"] = mdp.S;
  j["A"] = mdp.A;
  Json P = Json::array();
  for (int h = 0; h < mdp.H; ++h) {
    Json ph = Json::array();
    for (int s = 0; s < mdp.S; ++s) {
      Json ps = Json::array();
      for (int a = 0; a < mdp.A; ++a) {
        Json row = Json::array();
        for (int sn = 0; sn < mdp.S; ++sn) row.push_back(mdp.transition[h](mdp.sa(s, a), sn));
        ps.push_back(std::move(row));
      }
      ph.push_back(std::move(ps));
    }
    P.push_back(std::move(ph));
  }
  j["P"] = std::move(P);
  Json r = Json::array();
  for (int h = 0; h < mdp.H; ++h) r.push_back(mat_to_json(mdp.reward[h]));
  j["r"] = std::move(r);
  Json init = Json::array();
  for (int s = 0; s < mdp.S; ++s) init.push_back(mdp.init[s]);
  j["init"] = std::move(init);
  return j;
}

TabularMdp mdp_from_json(const Json& j) {
  TabularMdp mdp;
  mdp.H = j.at("H").get<int>();
  mdp.S = j.at("S").get<int>();
  mdp.A = j.at("A").get<int>();
  const Json& P = j.at("P");
  const Json& r = j.at("r");
  if ((int)P.size() != mdp.H || (int)r.size() != mdp.H)
    throw std::invalid_argument("mdp json: P and r must have H entries");
  for (int h = 0; h < mdp.H; ++h) {
    Mat ph(mdp.S * mdp.A, mdp.S);
    if ((int)P[h].size() != mdp.S) throw std::invalid_argument("mdp json: P[h] must have S entries");
    for (int s = 0; s < mdp.S; ++s) {
      if ((int)P[h][s].size() != mdp.A)
        throw std::invalid_argument("mdp json: P[h][s] must have A entries");
      for (int a = 0; a < mdp.A; ++a) {
        if ((int)P[h][s][a].size() != mdp.S)
          throw std::invalid_argument("mdp json: P[h][s][a] must have S entries");
        for (int sn = 0; sn < mdp.S; ++sn) ph(mdp.sa(s, a), sn) = P[h][s][a][sn].get<double>();
      }
    }
    mdp.transition.push_back(std::move(ph));
    Mat rh = mat_from_json(r[h]);
    if (rh.rows() != mdp.S || rh.cols() != mdp.A)
      throw std::invalid_argument("mdp json: r[h] must be S x A");
    mdp.reward.push_back(std::move(rh));
  }
  const Json& init = j.at("init");
  if ((int)init.size() != mdp.S) throw std::invalid_argument("mdp json: init must have S entries");
  mdp.init = Vec(mdp.S);
  for (int s = 0; s < mdp.S; ++s) mdp.init[s] = init[s].get<double>();
  MdpValidation v = validate_mdp(mdp);
  if (!v.ok) throw std::invalid_argument("mdp json: " + v.errors.front());
  return mdp;
}

Json class_to_json(const FunctionClass& fc) {
  Json j;
  if (fc.factored) {
    Json layers = Json::array();
    for (int h = 0; h < fc.H; ++h) {
      Json layer = Json::array();
      for (const Mat& t : fc.layer_tables[h]) layer.push_back(mat_to_json(t));
      layers.push_back(std::move(layer));
    }
    j["factored"]["F"] = std::move(layers);
  } else {
    Json members = Json::array();
    for (const QTuple& f : fc.members) {
      Json q = Json::array();
      for (const Mat& t : f.q) q.push_back(mat_to_json(t));
      members.push_back(Json{{"q", std::move(q)}});
    }
    j["members"] = std::move(members);
  }
  return j;
}

FunctionClass class_from_json(const Json& j) {
  if (j.contains("factored")) {
    const Json& F = j.at("factored").at("F");
    if (F.empty()) throw std::invalid_argument("class json: factored F is empty");
    std::vector<std::vector<Mat>> layers;
    for (const Json& layer : F) {
      std::vector<Mat> tables;
      for (const Json& t : layer) tables.push_back(mat_from_json(t));
      if (tables.empty()) throw std::invalid_argument("class json: empty factored layer");
      layers.push_back(std::move(tables));
    }
    const int H = static_cast<int>(layers.size());
    const int S = static_cast<int>(layers[0][0].rows());
    const int A = static_cast<int>(layers[0][0].cols());
    return make_factored_class(H, S, A, std::move(layers));
  }
  const Json& members = j.at("members");
  if (members.empty()) throw std::invalid_argument("class json: no members");
  std::vector<QTuple> fs;
  for (const Json& mj : members) {
    QTuple f;
    for (const Json& t : mj.at("q")) f.q.push_back(mat_from_json(t));
    fs.push_back(std::move(f));
  }
  const int H = static_cast<int>(fs[0].q.size());
  const int S = static_cast<int>(fs[0].q[0].rows());
  const int A = static_cast<int>(fs[0].q[0].cols());
  return make_class(H, S, A, std::move(fs));
}

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::Eluder: return "eluder";
    case Measure::Be: return "be";
    case Measure::Vbe: return "vbe";
    case Measure::Rank: return "rank";
  }
  return "unknown";
}

const char* family_name(Family f) {
  switch (f) {
    case Family::None: return "none";
    case Family::Greedy: return "greedy";
    case Family::Dirac: return "dirac";
  }
  return "unknown";
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::LE: return "<=";
    case Relation::GE: return ">=";
    case Relation::EQ: return "==";
  }
  return "?";
}

Measure measure_from_name(const std::string& s) {
  if (s == "eluder") return Measure::Eluder;
  if (s == "be") return Measure::Be;
  if (s == "vbe") return Measure::Vbe;
  if (s == "rank") return Measure::Rank;
  throw std::invalid_argument("unknown measure: " + s);
}

Family family_from_name(const std::string& s) {
  if (s == "greedy" || s == "DF") return Family::Greedy;
  if (s == "dirac" || s == "DDelta") return Family::Dirac;
  if (s == "none" || s.empty()) return Family::None;
  throw std::invalid_argument("unknown family: " + s);
}

Relation relation_from_name(const std::string& s) {
  if (s == "<=") return Relation::LE;
  if (s == ">=") return Relation::GE;
  if (s == "==") return Relation::EQ;
  throw std::invalid_argument("unknown relation: " + s);
}

Json instance_to_json(const NamedInstance& inst) {
  Json j;
  j["name"] = inst.name;
  j["mdp"] = mdp_to_json(inst.mdp);
  j["class"] = class_to_json(inst.fc);
  Json facts = Json::array();
  for (const Fact& f : inst.facts) {
    Json fj;
    fj["measure"] = measure_name(f.measure);
    fj["family"] = family_name(f.family);
    fj["relation"] = relation_name(f.rel);
    fj["value"] = f.value;
    fj["eps"] = f.eps_points;
    facts.push_back(std::move(fj));
  }
  j["facts"] = std::move(facts);
  j["realizable"] = inst.realizable;
  j["complete"] = inst.complete;
  if (inst.theta.size() > 0) j["theta"] = mat_to_json(inst.theta);
  return j;
}

NamedInstance instance_from_json(const Json& j) {
  NamedInstance inst;
  inst.name = j.at("name").get<std::string>();
  inst.mdp = mdp_from_json(j.at("mdp"));
  inst.fc = class_from_json(j.at("class"));
  if (inst.fc.H != inst.mdp.H || inst.fc.S != inst.mdp.S || inst.fc.A != inst.mdp.A)
    throw std::invalid_argument("instance json: class shape does not match mdp");
  for (const Json& fj : j.value("facts", Json::array())) {
    Fact f;
    f.measure = measure_from_name(fj.at("measure").get<std::string>());
    f.family = family_from_name(fj.at("family").get<std::string>());
    f.rel = relation_from_name(fj.at("relation").get<std::string>());
    f.value = fj.at("value").get<int>();
    f.eps_points = fj.at("eps").get<std::vector<double>>();
    inst.facts.push_back(std::move(f));
  }
  inst.realizable = j.value("realizable", false);
  inst.complete = j.value("complete", false);
  if (j.contains("theta")) inst.theta = mat_from_json(j.at("theta"));
  return inst;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golf_episodes_csv(const GolfResult& res) {
  std::string out = "k,f_index,opt_value,policy_value,regret,cum_regret,b_size\n";
  for (const GolfEpisode& e : res.episodes) {
    out += std::to_string(e.k) + "," + std::to_string(e.f_index) + "," + fmt_double(e.opt_value) +
           "," + fmt_double(e.policy_value) + "," + fmt_double(e.regret) + "," +
           fmt_double(e.cum_regret) + "," + std::to_string(e.b_size) + "\n";
  }
  return out;
}

std::string olive_phases_csv(const OliveResult& res) {
  std::string out = "phase,f_index,sum_err,activated_step,eliminated,survivors\n";
  for (const OlivePhase& p : res.phases) {
    out += std::to_string(p.phase) + "," + std::to_string(p.f_index) + "," +
           fmt_double(p.sum_err) + "," + std::to_string(p.activated_step) + "," +
           std::to_string(p.eliminated) + "," + std::to_string(p.survivors) + "\n";
  }
  return out;
}

std::string dataset_csv(const Dataset& data) {
  std::string out = "h,s,a,r,s_next\n";
  for (size_t h = 0; h < data.layers.size(); ++h)
    for (const Transition& t : data.layers[h]) {
      out += std::to_string(h) + "," + std::to_string(t.s) + "," + std::to_string(t.a) + "," +
             fmt_double(t.r) + "," + std::to_string(t.s_next) + "\n";
    }
  return out;
}

}  // namespace beldim
