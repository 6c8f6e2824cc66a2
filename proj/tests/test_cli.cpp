#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "abmc/cli.hpp"

using abmc::io::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

std::string write_spec(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("abmc_cli_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "abmc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = abmc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expected_code = 0) {
  args.push_back("--json");
  Run r = run(args);
  CHECK(r.code == expected_code);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("ext report") {
  auto spec = write_spec("ext", R"({"format": 1, "command": "ext", "algebra": "Z",
                                    "args": {"M": "Z/4", "N": "Z/6"}})");
  json r = run_json({"ext", spec});
  CHECK(r["format"] == 1);
  CHECK(r["pass"] == true);
  CHECK(r["result"]["structure"] == "Z/2");
  CHECK(r["summary"] == "Ext^1(Z/4, Z/6) = Z/2");
  Run text = run({"ext", spec, "--text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("Ext^1(Z/4, Z/6) = Z/2") != std::string::npos);
}

TEST_CASE("spec errors carry JSON pointers and exit 2") {
  auto check_pointer = [](const std::string& name, const std::string& text, const std::string& command,
                          const std::string& pointer) {
    json r = run_json({command, write_spec(name, text)}, 2);
    CHECK(r["error"]["pointer"] == pointer);
  };
  check_pointer("unknown_top", R"({"format": 1, "algebra": "Z", "extra": 3})", "catalog", "/extra");
  check_pointer("unknown_arg", R"({"format": 1, "algebra": "Z", "args": {"M": "Z", "N": "Z", "deg": 1}})", "ext",
                "/args/deg");
  check_pointer("bad_format", R"({"format": 2, "algebra": "Z"})", "catalog", "/format");
  check_pointer("no_format", R"({"algebra": "Z"})", "catalog", "/format");
  check_pointer("bad_module", R"({"format": 1, "algebra": "Z", "args": {"M": "Z/x", "N": "Z"}})", "ext", "/args/M");
  check_pointer("bad_matrix",
                R"({"format": 1, "algebra": "Z", "structure": "quasi-frobenius",
                    "args": {"map": {"src": "Z", "dst": "Z", "matrix": [[1, 2]]}}})",
                "weq", "/args/map/matrix/0");
  check_pointer("wrong_command", R"({"format": 1, "command": "hom", "algebra": "Z"})", "ext", "/command");
  check_pointer("bad_bounds", R"({"format": 1, "algebra": "Z", "bounds": {"max_dimension": 2}})", "catalog",
                "/bounds/max_dimension");
  check_pointer("bad_seed", R"({"format": 1, "algebra": "Z", "seed": -1})", "catalog", "/seed");

  CHECK(run({"frobnicate", write_spec("any", R"({"format": 1})")}).code == 2);
  CHECK(run({"ext"}).code == 2);
  CHECK(run({"ext", "/nonexistent/spec.json"}).code == 2);
  CHECK(run({"ext", write_spec("garbage", "{not json")}).code == 2);
  CHECK(run({"catalog", write_spec("empty", R"({"format": 1})"), "--preset", "nope"}).code == 2);
  CHECK(run({"catalog", write_spec("empty", R"({"format": 1})"), "--json", "--text"}).code == 2);
}

TEST_CASE("catalog bound beyond the cap is a usage error") {
  auto spec = write_spec("big", R"({"format": 1, "algebra": "Z", "bounds": 9})");
  json r = run_json({"catalog", spec}, 2);
  CHECK(r["error"]["pointer"] == "/bounds");
}

TEST_CASE("presets and overrides") {
  auto empty = write_spec("empty", R"({"format": 1})");
  json r = run_json({"catalog", empty, "--preset", "qf-f2c2"});
  CHECK(r["algebra"] == "F2[C2]");
  CHECK(r["result"]["count"] == 9);
  json small = run_json({"catalog", empty, "--preset", "qf-f2c2", "--bounds", "2"});
  CHECK(small["bounds"]["max_dim"] == 2);
  CHECK(small["result"]["count"] == 4);
  auto spec_bounds = write_spec("preset_in_spec", R"({"format": 1, "preset": "qf-f2c2", "bounds": {"max_dim": 3}})");
  CHECK(run_json({"catalog", spec_bounds})["result"]["count"] == 6);
  CHECK(run_json({"catalog", empty, "--preset", "purity-z", "--seed", "9"})["seed"] == 9);
  CHECK(run_json({"catalog", empty, "--preset", "purity-z", "--bounds", "0"})["result"]["count"] == 1);
}

TEST_CASE("purity query through classify") {
  auto empty = write_spec("empty", R"({"format": 1})");
  json r = run_json({"classify", empty, "--preset", "purity-z"});
  CHECK(r["result"]["split"] == false);
  CHECK(r["result"]["purity"]["pure"] == false);
  CHECK(r["result"]["purity"]["witness"] == "Z/2");
}

TEST_CASE("certified failure exits 1") {
  auto spec = write_spec("thick_z", R"({"format": 1, "algebra": "Z", "bounds": 2, "args": {"class": "projectives"}})");
  json r = run_json({"thick", spec}, 1);
  CHECK(r["pass"] == false);
  CHECK(r["result"]["report"]["certificate"].get<std::string>().find("Z/2") != std::string::npos);

  auto qf_over_z = write_spec("lift_z", R"({"format": 1, "algebra": "Z", "structure": "quasi-frobenius",
    "args": {"i": {"src": "Z", "dst": "Z", "matrix": [[2]]}, "p": {"src": "Z", "dst": "Z/2", "matrix": [[1]]},
             "top": {"src": "Z", "dst": "Z", "matrix": [[1]]}, "bottom": {"src": "Z", "dst": "Z/2", "matrix": [[1]]}}})");
  json z = run_json({"lift", qf_over_z}, 1);
  CHECK(z["failure"]["kind"] == "ThicknessFailed");
}

TEST_CASE("lift of a trivial cofibration against a fibration") {
  auto spec = write_spec("lift", R"({"format": 1, "algebra": "F2[C2]", "structure": "quasi-frobenius",
    "args": {"i": {"src": "0", "dst": "A", "matrix": [[], []]}, "p": {"src": "A", "dst": "k", "matrix": [[1, 1]]},
             "top": {"src": "0", "dst": "A", "matrix": [[], []]},
             "bottom": {"src": "A", "dst": "k", "matrix": [[1, 1]]}}})");
  json r = run_json({"lift", spec});
  CHECK(r["result"]["hypothesis"] == "acyclic cofibration against fibration");
  const json& h = r["result"]["h"]["matrix"];
  REQUIRE(h.size() == 2);
  for (int col = 0; col < 2; ++col) CHECK((h[0][col].get<int>() + h[1][col].get<int>()) % 2 == 1);
}

TEST_CASE("reports are byte-identical across runs") {
  auto empty = write_spec("empty", R"({"format": 1})");
  for (const char* cmd : {"check-pair", "monoidal-check", "hereditary"}) {
    Run a = run({cmd, empty, "--preset", "qf-f2c2", "--json", "--seed", "3"});
    Run b = run({cmd, empty, "--preset", "qf-f2c2", "--json", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
