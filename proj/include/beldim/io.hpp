#pragma once

#include <json.hpp>

#include "beldim/env_zoo.hpp"
#include "beldim/golf.hpp"
#include "beldim/olive.hpp"

namespace beldim {

using Json = nlohmann::json;

// Formats (all indices 0-based, documented in the README):
//   mdp      {"H","S","A","P":[h][s][a][s'],"r":[h][s][a],"init":[s]}
//   class    {"members":[{"q":[h][s][a]},...]} or {"factored":{"F":[h][i][s][a]}}
//   instance {"name","mdp","class","facts":[...],"realizable","complete","theta"?}

Json mdp_to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const Json& j);

Json class_to_json(const FunctionClass& fc);
FunctionClass class_from_json(const Json& j);

Json instance_to_json(const NamedInstance& inst);
NamedInstance instance_from_json(const Json& j);

const char* measure_name(Measure m);
const char* family_name(Family f);
const char* relation_name(Relation r);
Measure measure_from_name(const std::string& s);
Family family_from_name(const std::string& s);  // accepts greedy/DF and dirac/DDelta
Relation relation_from_name(const std::string& s);

// %.17g, the shortest exact round-trip for CSV cells
std::string fmt_double(double x);

void write_text_atomic(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// CSV contracts: header line, LF endings, '.' decimal separator
std::string golf_episodes_csv(const GolfResult& res);   // k,f_index,opt_value,policy_value,regret,cum_regret,b_size
std::string olive_phases_csv(const OliveResult& res);   // phase,f_index,sum_err,activated_step,eliminated,survivors
std::string dataset_csv(const Dataset& data);           // h,s,a,r,s_next

}  // namespace beldim
