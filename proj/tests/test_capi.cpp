// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "reasonsat/reasonsat.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* kEq2 = "p cnf 4 6\n-1 -2 -3 -4 0\n-1 -2 4 0\n1 -3 0\n2 -3 -4 0\n3 -4 0\n3 4 0\n";

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  rsat_string_free(s);
  return out;
}

struct Formula {
  rsat_formula* f = nullptr;
  explicit Formula(const char* text) { REQUIRE(rsat_formula_parse_dimacs(text, &f) == RSAT_OK); }
  ~Formula() { rsat_formula_free(f); }
};

void on_progress(size_t done, size_t, size_t, size_t, void* user) {
  *static_cast<size_t*>(user) = done;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(rsat_version()).size() > 0);
  CHECK(std::string(rsat_status_name(RSAT_E_PARSE)) == "parse error");
  CHECK(std::string(rsat_status_name(RSAT_OK)) == "ok");
}

TEST_CASE("formula lifecycle") {
  Formula f(kEq2);
  CHECK(rsat_formula_num_vars(f.f) == 4);
  CHECK(rsat_formula_num_clauses(f.f) == 6);
  char* out = nullptr;
  REQUIRE(rsat_formula_write_dimacs(f.f, &out) == RSAT_OK);
  CHECK(take(out) == kEq2);
  REQUIRE(rsat_formula_render(f.f, &out) == RSAT_OK);
  CHECK(take(out).find("(NOT x1 OR NOT x2 OR NOT x3 OR NOT x4) AND") == 0);
  REQUIRE(rsat_solutions(f.f, &out) == RSAT_OK);
  CHECK(json::parse(take(out)) == json::array({"TFTF"}));
  rsat_formula_free(nullptr);
}

TEST_CASE("parse errors set the status and message") {
  rsat_formula* f = nullptr;
  CHECK(rsat_formula_parse_dimacs("p cnf 2 1\n1 1 0\n", &f) == RSAT_E_PARSE);
  CHECK(f == nullptr);
  CHECK(std::string(rsat_last_error()).find("line 2") != std::string::npos);
  CHECK(rsat_formula_parse_dimacs(nullptr, &f) == RSAT_E_INVALID_ARGUMENT);
  CHECK(rsat_formula_parse_dimacs("p cnf 1 1\n1 0\n", &f) == RSAT_OK);
  CHECK(std::string(rsat_last_error()).empty());
  rsat_formula_free(f);
}

TEST_CASE("profile and solve") {
  Formula f(kEq2);
  char* out = nullptr;
  REQUIRE(rsat_profile(f.f, &out) == RSAT_OK);
  const auto p = json::parse(take(out));
  CHECK(p["stratum"] == "resolution");
  CHECK(p["max_degree_vars"] == json::array({3, 4}));
  CHECK(p["critical"] == json::array({true, true, true, true, true, true}));

  REQUIRE(rsat_solve(f.f, R"({"resolution_preprocessing": true})", &out) == RSAT_OK);
  const auto s = json::parse(take(out));
  CHECK(s["trace"]["deduction_order"] == json::array({3, 1, -2, -4}));
  CHECK(s["trace"]["decisions"] == 0);

  REQUIRE(rsat_solve(f.f, R"({"branching": "fixed-order", "fixed_order": [4], "polarity": "true-first"})",
                     &out) == RSAT_OK);
  const auto b = json::parse(take(out));
  CHECK(b["trace"]["backtracked_vars"] == json::array({4}));
  CHECK(b["heuristic"]["fixed_order"] == json::array({4, 1, 2, 3}));
  CHECK(rsat_solve(f.f, R"({"branching": 3})", &out) == RSAT_E_CONFIG);
}

TEST_CASE("oracle limit maps to its own status") {
  Formula f("p cnf 30 1\n1 0\n");
  char* out = nullptr;
  CHECK(rsat_solutions(f.f, &out) == RSAT_E_LIMIT);
}

TEST_CASE("prompt and response parsing") {
  Formula f(kEq2);
  char* out = nullptr;
  REQUIRE(rsat_build_prompt(f.f, &out) == RSAT_OK);
  CHECK(take(out).find("Talk through the finding a solution for this SAT formula.") != std::string::npos);
  REQUIRE(rsat_parse_response(R"(ok {"SOLUTION":"TFTF","REASON":"3","EXPLANATION":"e","ERROR":-1})", 4,
                              &out) == RSAT_OK);
  const auto ok = json::parse(take(out));
  CHECK(ok["ok"] == true);
  CHECK(ok["response"]["REASON"] == 3);
  REQUIRE(rsat_parse_response(R"({"SOLUTION":"TFX","REASON":3,"EXPLANATION":"e","ERROR":-1})", 4, &out) ==
          RSAT_OK);
  const auto bad = json::parse(take(out));
  CHECK(bad["ok"] == false);
  CHECK(bad["failure"]["kind"] == "malformed_solution");
}

TEST_CASE("tagging and fitting") {
  char* out = nullptr;
  REQUIRE(rsat_tag_text("setting x4 true forces a contradiction", nullptr, &out) == RSAT_OK);
  CHECK(json::parse(take(out)) == json::array({"Causation", "Contradiction"}));
  REQUIRE(rsat_tag_text("end", R"({"E": ["end"]})", &out) == RSAT_OK);
  CHECK(json::parse(take(out)) == json::array({"E"}));

  REQUIRE(rsat_logistic_fit_csv("y\n1\n1\n1\n0\n", "y", &out) == RSAT_OK);
  const auto fit = json::parse(take(out));
  CHECK(fit["coefficients"][0]["term"] == "Intercept");
  CHECK(std::abs(fit["coefficients"][0]["estimate"].get<double>() - std::log(3.0)) < 1e-6);
  CHECK(rsat_logistic_fit_csv("y,a,b\n1,1,1\n0,0,0\n1,0,0\n0,1,1\n", "y", &out) == RSAT_E_NUMERIC);
  CHECK(std::string(rsat_last_error()).find("b") != std::string::npos);
  CHECK(rsat_logistic_fit_csv("a\n1\n", "y", &out) != RSAT_OK);
}

TEST_CASE("config resolution rejects credentials") {
  char* out = nullptr;
  REQUIRE(rsat_config_resolve(nullptr, R"({"seed": 4})", &out) == RSAT_OK);
  CHECK(json::parse(take(out))["seed"] == 4);
  CHECK(rsat_config_resolve(R"({"backend": {"llm": {"api_key": "k"}}})", nullptr, &out) == RSAT_E_CONFIG);
  CHECK(rsat_config_resolve(R"({"bogus": 1})", nullptr, &out) == RSAT_E_CONFIG);
}

TEST_CASE("generate, run and report") {
  const fs::path dir = fs::temp_directory_path() / "reasonsat_capi_exp";
  fs::remove_all(dir);
  const json cfg = {{"seed", 2},
                    {"battery", {{"per_stratum", 2}, {"shuffles", 2}}},
                    {"output_dir", dir.string()}};
  char* out = nullptr;
  REQUIRE(rsat_generate(cfg.dump().c_str(), &out) == RSAT_OK);
  CHECK(json::parse(take(out))["runs"] == 12);
  size_t done = 0;
  REQUIRE(rsat_run(cfg.dump().c_str(), on_progress, &done, &out) == RSAT_OK);
  CHECK(json::parse(take(out))["ok"] == 12);
  CHECK(done == 12);

  const fs::path report = dir / "report";
  REQUIRE(rsat_report((dir / "records.jsonl").c_str(), R"({"per_stratum": true})", report.c_str(), &out) ==
          RSAT_OK);
  const std::string text = take(out);
  CHECK(text.find("Reasons why") != std::string::npos);
  CHECK(fs::exists(report / "results.json"));
  CHECK(rsat_report((dir / "missing.jsonl").c_str(), nullptr, report.c_str(), &out) == RSAT_E_IO);
  CHECK(rsat_report((dir / "records.jsonl").c_str(), R"({"colour": 1})", report.c_str(), &out) ==
        RSAT_E_CONFIG);

  json replay = cfg;
  replay["backend"] = {{"kind", "replay"}, {"replay", {{"path", (dir / "empty.jsonl").string()}}}};
  std::ofstream(dir / "empty.jsonl").close();
  fs::remove(dir / "records.jsonl");
  CHECK(rsat_run(replay.dump().c_str(), nullptr, nullptr, &out) == RSAT_E_REPLAY_GAP);
  rsat_string_free(out);
}

TEST_CASE("null arguments are rejected") {
  char* out = nullptr;
  CHECK(rsat_solutions(nullptr, &out) == RSAT_E_INVALID_ARGUMENT);
  CHECK(rsat_generate(nullptr, &out) == RSAT_E_INVALID_ARGUMENT);
  CHECK(rsat_tag_text(nullptr, nullptr, &out) == RSAT_E_INVALID_ARGUMENT);
}
