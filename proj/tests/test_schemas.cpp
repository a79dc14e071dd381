// Every JSON artifact the library or the command-line tool emits must
// conform to the published schemas in docs/schema/.  The schemas use a
// small keyword subset (type, enum, required, properties, items, anyOf,
// minimum), so a compact validator here checks them without an external
// dependency: library-built instances in process, everything else by
// invoking the tool and reading back what it wrote.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "beldim/env_zoo.hpp"
#include "beldim/io.hpp"

using namespace beldim;
namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the command-line binary (last program argument)

bool type_ok(const std::string& t, const Json& v) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
  if (t == "number") return v.is_number();
  return false;
}

void validate_node(const Json& schema, const Json& v, const std::string& path,
                   std::vector<std::string>& errors);

bool matches(const Json& schema, const Json& v) {
  std::vector<std::string> errs;
  validate_node(schema, v, "", errs);
  return errs.empty();
}

// All keywords in one schema object apply conjunctively; anyOf passes when
// at least one alternative validates on its own.
void validate_node(const Json& schema, const Json& v, const std::string& path,
                   std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    if (!type_ok(t, v)) {
      errors.push_back(path + ": expected " + t + ", got " + v.dump().substr(0, 40));
      return;
    }
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const Json& e : schema["enum"]) hit = hit || e == v;
    if (!hit) errors.push_back(path + ": " + v.dump() + " not in enum");
  }
  if (schema.contains("minimum") && v.is_number()) {
    if (v.get<double>() < schema["minimum"].get<double>())
      errors.push_back(path + ": " + v.dump() + " below minimum");
  }
  if (schema.contains("anyOf")) {
    bool hit = false;
    for (const Json& alt : schema["anyOf"]) hit = hit || matches(alt, v);
    if (!hit) errors.push_back(path + ": no anyOf alternative matched");
  }
  if (v.is_object()) {
    if (schema.contains("required"))
      for (const Json& k : schema["required"])
        if (!v.contains(k.get<std::string>()))
          errors.push_back(path + ": missing required key " + k.get<std::string>());
    if (schema.contains("properties"))
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
        if (v.contains(it.key())) validate_node(it.value(), v[it.key()], path + "/" + it.key(), errors);
  }
  if (v.is_array() && schema.contains("items"))
    for (size_t i = 0; i < v.size(); ++i)
      validate_node(schema["items"], v[i], path + "/" + std::to_string(i), errors);
}

Json load_schema(const std::string& name) {
  return Json::parse(read_text_file(std::string(BELDIM_SCHEMA_DIR) + "/" + name));
}

void check_valid(const Json& schema, const Json& v, const std::string& what) {
  std::vector<std::string> errors;
  validate_node(schema, v, what, errors);
  std::string msg;
  for (const std::string& e : errors) msg += e + "; ";
  CHECK_MESSAGE(errors.empty(), msg);
}

void run_cli(const std::string& args) {
  const std::string cmd = "'" + g_cli + "' " + args + " >/dev/null";
  REQUIRE_MESSAGE(std::system(cmd.c_str()) == 0, cmd);
}

Json read_json(const fs::path& p) { return Json::parse(read_text_file(p.string())); }

}  // namespace

TEST_CASE("validator subset rejects shape violations") {
  Json schema = Json::parse(R"({
    "type": "object",
    "required": ["a", "b"],
    "properties": {
      "a": {"type": "integer", "minimum": 1},
      "b": {"enum": ["x", "y"]},
      "c": {"type": "array", "items": {"type": "number"}},
      "d": {"anyOf": [{"type": "string"}, {"type": "boolean"}]}
    }
  })");
  CHECK(matches(schema, Json{{"a", 3}, {"b", "x"}}));
  CHECK(matches(schema, Json{{"a", 1}, {"b", "y"}, {"c", {0.5, 2.0}}, {"d", true}}));
  CHECK_FALSE(matches(schema, Json{{"a", 3}}));                           // missing b
  CHECK_FALSE(matches(schema, Json{{"a", 0}, {"b", "x"}}));               // below minimum
  CHECK_FALSE(matches(schema, Json{{"a", 2.5}, {"b", "x"}}));             // not integer
  CHECK_FALSE(matches(schema, Json{{"a", 3}, {"b", "z"}}));               // not in enum
  CHECK_FALSE(matches(schema, Json{{"a", 3}, {"b", "x"}, {"c", {"s"}}}));  // bad item
  CHECK_FALSE(matches(schema, Json{{"a", 3}, {"b", "x"}, {"d", 7}}));     // no anyOf arm
}

TEST_CASE("library-built instances conform to the instance schema") {
  Json schema = load_schema("instance.schema.json");
  check_valid(schema, instance_to_json(make_indicator_bandit(5)), "indicator_bandit(5)");
  check_valid(schema, instance_to_json(make_state_indicator(4)), "state_indicator(4)");
  check_valid(schema, instance_to_json(make_sign_flip(4)), "sign_flip(4)");
  check_valid(schema, instance_to_json(make_random_closure(3, 2, 2, 1, 29)),
              "random_closure(3,2,2,1,29)");
}

TEST_CASE("command-line artifacts conform to their schemas") {
  REQUIRE_MESSAGE(!g_cli.empty(), "pass the tool path as the last program argument");
  const fs::path dir = fs::temp_directory_path() / "beldim_schema_artifacts";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::string ib = (dir / "ib.json").string();
  const std::string rc = (dir / "rc.json").string();
  run_cli("gen indicator_bandit --m 5 --out '" + ib + "'");
  run_cli("gen random_closure --S 3 --A 2 --H 2 --n-seeds 1 --seed 29 --out '" + rc + "'");

  Json inst_schema = load_schema("instance.schema.json");
  check_valid(inst_schema, read_json(ib), "gen indicator_bandit");
  check_valid(inst_schema, read_json(rc), "gen random_closure");

  // dims: every measure keyword, on both instance forms; effdim needs the
  // feature vectors the indicator bandit carries.
  Json dims_schema = load_schema("dims_report.schema.json");
  const std::vector<std::pair<std::string, std::string>> dims_cases = {
      {"--instance '" + ib + "' --measure eluder --eps 0.5", "d_eluder.json"},
      {"--instance '" + ib + "' --measure de --family dirac --eps 0.3", "d_de.json"},
      {"--instance '" + ib + "' --measure be --family dirac --eps 0.4", "d_be.json"},
      {"--instance '" + ib + "' --measure rank", "d_rank.json"},
      {"--instance '" + ib + "' --measure effdim --eps 0.5", "d_effdim.json"},
      {"--instance '" + rc + "' --measure vbe --family greedy --eps 0.1", "d_vbe.json"},
      {"--instance '" + rc + "' --measure vrank", "d_vrank.json"},
  };
  for (const auto& [args, file] : dims_cases) {
    const std::string out = (dir / file).string();
    run_cli("dims " + args + " --out '" + out + "'");
    check_valid(dims_schema, read_json(out), file);
  }

  Json run_schema = load_schema("run_summary.schema.json");
  run_cli("run --agent golf --instance '" + rc + "' --K 40 --seeds 1..4 --outdir '" +
          (dir / "golf").string() + "'");
  check_valid(run_schema, read_json(dir / "golf" / "run_summary.json"), "run golf");
  run_cli("run --agent olive --instance '" + rc +
          "' --eps 0.05 --n-scale 100 --zeta-scale 10 --seeds 1,2 --outdir '" +
          (dir / "olive").string() + "'");
  check_valid(run_schema, read_json(dir / "olive" / "run_summary.json"), "run olive");

  Json sweep_schema = load_schema("sweep_summary.schema.json");
  run_cli("sweep --agent vgolf --instance '" + rc + "' --Ks 50,100 --seeds 1..3 --outdir '" +
          (dir / "sweep_agent").string() + "'");
  check_valid(sweep_schema, read_json(dir / "sweep_agent" / "sweep_summary.json"), "sweep agent");
  run_cli("sweep --measure be --family greedy --gen state_indicator --ms 4,6 --eps 0.4 --outdir '" +
          (dir / "sweep_dims").string() + "'");
  check_valid(sweep_schema, read_json(dir / "sweep_dims" / "sweep_summary.json"), "sweep dims");

  fs::remove_all(dir);
}

int main(int argc, char** argv) {
  std::vector<char*> args(argv, argv + argc);
  if (args.size() > 1 && args.back()[0] != '-') {
    g_cli = args.back();
    args.pop_back();
  }
  doctest::Context ctx(static_cast<int>(args.size()), args.data());
  return ctx.run();
}
