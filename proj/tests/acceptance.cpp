// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <Eigen/Dense>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "reasonsat/analysis.hpp"
#include "reasonsat/config.hpp"
#include "reasonsat/experiment.hpp"
#include "reasonsat/generator.hpp"
#include "reasonsat/lexicon.hpp"
#include "reasonsat/logistic.hpp"
#include "reasonsat/subject.hpp"
#include "support.hpp"

using namespace reasonsat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int number, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  o.require(secs <= budget_s, "over time budget of " + std::to_string(budget_s) + " s");
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", number,
              o.detail.empty() ? "ok" : o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool satisfies(const Formula& f, const std::optional<Assignment>& a) {
  return a.has_value() && evaluate(f, *a);
}

// Oracle-based recomputation of the generation constraints.
bool valid_and_pure(const Formula& f, Stratum stratum) {
  if (f.num_vars() != 4 || f.num_clauses() < 4 || f.num_clauses() > 6) return false;
  if (count_solutions(f, 2) != 1) return false;
  for (std::size_t j = 0; j < f.num_clauses(); ++j) {
    if (count_solutions(f.without_clause(j), 2) < 2) return false;
  }
  std::set<Var> seen;
  for (const auto& c : f.clauses()) {
    for (const auto& l : c.literals()) seen.insert(l.variable);
  }
  if (seen.size() != 4) return false;
  const bool unit = !find_unit_clauses(f).empty();
  const bool res = !find_resolution_units(f).empty();
  switch (stratum) {
    case Stratum::kUnit:
      return unit;
    case Stratum::kResolution:
      return !unit && res;
    case Stratum::kNeither:
      return !unit && !res;
  }
  return false;
}

std::vector<RunRecord> run_all(const ExperimentConfig& c) {
  std::vector<RunRecord> out;
  for (const auto& e : manifest_entries(generate_dataset(c))) {
    out.push_back(execute_run(c, e, std::nullopt, nullptr));
  }
  return out;
}

Outcome c1() {
  Outcome o;
  const Formula f = rsat_test::load_fixture("eq1.cnf");
  const auto sols = enumerate_solutions(f);
  o.require(sols.size() == 1 && sols[0].to_string() == "TT", "solution set is not {TT}");
  o.require(classify_stratum(compute_profile(f)) == Stratum::kUnit, "stratum is not unit");
  const SolveTrace t = dpll_solve(f, Heuristic{});
  o.require(t.decisions == 0, "solver made decisions");
  o.require(satisfies(f, t.final_assignment), "solver did not find TT");
  return o;
}

Outcome c2() {
  Outcome o;
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  const auto sols = enumerate_solutions(f);
  o.require(sols.size() == 1 && sols[0].to_string() == "TFTF", "solution set is not {TFTF}");
  const StructureProfile p = compute_profile(f);
  o.require(p.all_clauses_critical, "not all clauses critical");
  const std::map<Var, std::size_t> degrees{{1, 3}, {2, 3}, {3, 5}, {4, 5}};
  o.require(p.degrees == degrees, "degrees differ from {3,3,5,5}");
  o.require(p.max_degree_vars == std::set<Var>{3, 4}, "max-degree set is not {x3,x4}");
  const std::set<ResolutionUnit> expected_res{{3, true, 4, 5}};
  o.require(p.resolution_units == expected_res, "resolution unit is not (x3,T) from clauses 5-6");
  o.require(classify_stratum(p) == Stratum::kResolution, "stratum is not resolution");

  Heuristic res;
  res.resolution_preprocessing = true;
  const SolveTrace r = dpll_solve(f, res);
  const std::vector<std::pair<Var, bool>> order{{3, true}, {1, true}, {2, false}, {4, false}};
  o.require(r.deduction_order == order, "deduction order is not x3, x1, -x2, -x4");
  o.require(r.backtracked_vars.empty() && r.decisions == 0, "resolution run branched");
  o.require(!r.events.empty() && r.events[0].kind == EventKind::kPropagateResolution,
            "first event is not a resolution step");

  Heuristic fixed;
  fixed.branching = BranchRule::kFixedOrder;
  fixed.polarity = PolarityRule::kTrueFirst;
  fixed.fixed_order = {4, 1, 2, 3};
  const SolveTrace b = dpll_solve(f, fixed);
  bool saw = false;
  for (const auto& e : b.events) saw |= e.kind == EventKind::kBacktrack && e.variable == 4 && !e.value;
  o.require(saw, "no BACKTRACK(x4)");
  o.require(b.final_assignment && b.final_assignment->to_string() == "TFTF", "fixed order did not end at TFTF");
  return o;
}

Outcome c3() {
  Outcome o;
  std::size_t checked = 0;
  for (Stratum s : {Stratum::kUnit, Stratum::kResolution, Stratum::kNeither}) {
    std::size_t bad = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      GenSpec spec;
      spec.stratum = s;
      spec.seed = derive_seed(20260101, stratum_name(s), seed);
      const GeneratedInstance g = generate_instance(spec);
      bad += !valid_and_pure(g.formula, s);
      ++checked;
    }
    o.require(bad == 0, std::to_string(bad) + " invalid " + std::string(stratum_name(s)) + " instances");
  }
  if (o.pass) o.detail = std::to_string(checked) + " instances valid and pure";
  return o;
}

Outcome c4() {
  Outcome o;
  Rng rng(4242);
  std::size_t disagreements = 0;
  for (int i = 0; i < 10000; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    const bool sat = count_solutions(f, 1) > 0;
    for (const Heuristic& h : rsat_test::heuristic_matrix(f.num_vars(), static_cast<std::uint64_t>(i))) {
      const SolveTrace t = dpll_solve(f, h);
      const bool ok = sat ? satisfies(f, t.final_assignment) : (!t.satisfiable() && t.exhausted);
      disagreements += !ok;
    }
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements with the oracle");
  if (o.pass) o.detail = "40000 solves agree with the oracle";
  return o;
}

Outcome c5() {
  Outcome o;
  {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 1);
    Eigen::VectorXd y(4);
    y << 1, 1, 1, 0;
    const auto fit = logistic_fit(X, y, {"Intercept"});
    o.require(std::abs(fit.coefficients[0].estimate - std::log(3.0)) < 1e-6, "intercept is not ln 3");
  }
  Rng rng(55);
  double worst_grid = 0.0, worst_score = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 400;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      y(i) = rng.bernoulli(X(i, 1) > 0 ? 0.7 : 0.35) ? 1.0 : 0.0;
    }
    const auto fit = logistic_fit(X, y, {"Intercept", "x"});
    Eigen::VectorXd beta(2);
    beta << fit.coefficients[0].estimate, fit.coefficients[1].estimate;
    // Coarse-to-fine grid search on the log-likelihood.
    Eigen::Vector2d best(0.0, 0.0);
    double step = 0.5;
    for (int level = 0; level < 8; ++level) {
      Eigen::Vector2d centre = best;
      double best_ll = -1e300;
      for (int a = -10; a <= 10; ++a) {
        for (int b = -10; b <= 10; ++b) {
          Eigen::VectorXd cand(2);
          cand << centre(0) + a * step, centre(1) + b * step;
          const double ll = logistic_log_likelihood(X, y, cand);
          if (ll > best_ll) {
            best_ll = ll;
            best = cand;
          }
        }
      }
      step /= 5.0;
    }
    worst_grid = std::max(worst_grid, (best - beta).cwiseAbs().maxCoeff());
    const Eigen::VectorXd prob = (1.0 / (1.0 + (-(X * beta).array()).exp())).matrix();
    const Eigen::VectorXd score = X.transpose() * (y - prob);
    worst_score = std::max(worst_score, score.cwiseAbs().maxCoeff());
  }
  o.require(worst_grid <= 1e-3, fmt("grid search differs by %.2e", worst_grid));
  o.require(worst_score < 1e-6, fmt("score at the optimum is %.2e", worst_score));
  if (o.pass) o.detail = fmt("max grid gap %.1e, max |score| %.1e", worst_grid, worst_score);
  return o;
}

Outcome c6() {
  Outcome o;
  int strict = 0, within_se = 0;
  std::string first_miss;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ExperimentConfig c = default_config();
    c.seed = seed;
    const auto rows = reason_regressions(observations(run_all(c), c.analysis));
    const PlantedReasons p = c.backend.model.planted;
    const ReasonLogit* truth[] = {&p.unit, &p.resolution, &p.backtrack};
    bool ok = true, ok_se = true;
    for (int i = 0; i < 3; ++i) {
      if (!rows[i].fit) {
        ok = ok_se = false;
        continue;
      }
      const std::map<std::string, double> planted{{kIntercept, truth[i]->intercept},
                                                  {kCompetingSimplification, truth[i]->competing_simplification},
                                                  {kCompetingBacktrack, truth[i]->competing_backtrack},
                                                  {kInfluence, truth[i]->influence}};
      for (const auto& co : rows[i].fit->coefficients) {
        const double d = std::abs(co.estimate - planted.at(co.name));
        const bool se_ok = co.estimable && d <= 3.0 * co.std_error;
        ok_se &= se_ok;
        ok &= se_ok && d <= 0.1;
        if (!(se_ok && d <= 0.1) && first_miss.empty()) {
          first_miss = "seed " + std::to_string(seed) + " " + rows[i].label + "/" + co.name +
                       fmt(" off by %.3f (SE %.3f)", d, co.std_error);
        }
      }
    }
    strict += ok;
    within_se += ok_se;
  }
  o.require(strict >= 19, std::to_string(strict) + "/20 seeds recover every coefficient within 3 SE and 0.1");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(within_se) + "/20 seeds within 3 SE alone";
  if (!first_miss.empty()) o.detail += "; first miss: " + first_miss;
  return o;
}

Outcome c7() {
  Outcome o;
  ExperimentConfig c = default_config();
  c.seed = 7;
  c.strata = {};
  GenSpec unit;
  unit.stratum = Stratum::kUnit;
  c.strata.push_back(unit);
  c.backend.model = ReasonModel{};
  c.backend.model.kind = ReasonModel::Kind::kSoftmax;
  c.backend.model.weights.is_unit = calibrate_unit_weight(0.68, 4);
  const auto usage = usage_rates(observations(run_all(c), c.analysis));
  const auto rate = usage[0].needed.rate();
  o.require(rate.has_value(), "no unit-only runs");
  if (rate) {
    o.require(std::abs(*rate - 0.68) <= 0.02, fmt("unit used-when-needed is %.1f%%", 100 * *rate));
    if (o.pass) {
      o.detail = fmt("unit used-when-needed %.2f%% over %.0f runs", 100 * *rate,
                     static_cast<double>(usage[0].needed.total));
    }
  }
  return o;
}

Outcome c8() {
  Outcome o;
  const auto lex = WordLexicon::standard();
  using Tags = std::vector<std::string>;
  o.require(tag_text("setting x4 true forces a contradiction", lex) == Tags{"Causation", "Contradiction"},
            "example 1");
  o.require(tag_text("this simplifies the formula and is the key step", lex) == Tags{"Simplification"},
            "example 2");
  o.require(tag_text("the assignment satisfies clause two", lex).empty(), "example 3");

  std::istringstream lines(read_file(rsat_test::fixture("tagger_golden.tsv")));
  std::string line;
  int count = 0, wrong = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string field = line.substr(tab + 1);
    Tags expect;
    if (field != "-") {
      std::istringstream in(field);
      std::string item;
      while (std::getline(in, item, ',')) expect.push_back(item);
    }
    wrong += tag_text(line.substr(0, tab), lex) != expect;
    ++count;
  }
  o.require(count == 50 && wrong == 0, std::to_string(wrong) + " of " + std::to_string(count) + " golden sentences mistagged");

  // Causation is injected with a positive unit-clause weight.
  ExperimentConfig c = default_config();
  c.seed = 8;
  c.per_stratum = 100;
  c.shuffles = 10;
  const auto rows = language_regressions(observations(run_all(c), c.analysis), lex);
  const Coefficient* unit = nullptr;
  for (const auto& r : rows) {
    if (r.row.label == "Causation" && r.row.fit) unit = r.row.fit->find(kUnitClause);
  }
  o.require(unit != nullptr, "no Causation fit");
  if (unit) {
    o.require(unit->estimate > 0 && unit->p_value < 1e-3,
              fmt("Causation ~ Unit Clause is %.3f (p=%.2g)", unit->estimate, unit->p_value));
    if (o.pass) o.detail = fmt("Causation ~ Unit Clause %.3f, p=%.2g", unit->estimate, unit->p_value);
  }
  return o;
}

Outcome c9() {
  Outcome o;
  const char* const sentences[] = {
      "Here's a SAT formula.",
      "Talk through the finding a solution for this SAT formula.",
      "Once you think you have a solution, double check it to make sure that it's correct.",
      "If not, keep reasoning to get the answer, and if you get a new one, double check it as well, "
      "and keep double-checking carefully until you think you have the answer.",
      "Keep track of any assumptions that you make that later turn out to be false.",
      "Then, at the end of your talking, tell me the main reason why this is the solution, focusing "
      "on a single variable.",
      "Do not use any python code or outside tools.",
      "Return, at the end of your response, a JSON object, with four fields.",
      "The first field, SOLUTION, should be a string with only T and F providing the satisfying "
      "assignment in order.",
      "The second field, REASON, should be an integer from 1 to 4, giving the name of the variable "
      "that is the main reason why this is the solution.",
      "The third field, EXPLANATION, should be a string that contains your explanation why this is a "
      "solution.",
      "If you made an assumption that later turned out to be false, the fourth field, ERROR, should "
      "contain the integer name of the variable you made the incorrect assumption for, and -1 "
      "otherwise.",
  };
  const std::string prompt = build_prompt(rsat_test::load_fixture("eq2.cnf"));
  std::size_t pos = 0;
  for (const char* s : sentences) {
    const auto at = prompt.find(s, pos);
    o.require(at != std::string::npos, std::string("missing or out of order: ") + s);
    if (at != std::string::npos) pos = at;
  }

  std::istringstream lines(read_file(rsat_test::fixture("transcripts_golden.jsonl")));
  std::string line;
  int cases = 0, wrong = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const auto& e = j["expect"];
    const ParsedResponse p = parse_response(j["transcript"].get<std::string>(), j["num_vars"].get<std::uint32_t>());
    bool ok = p.ok() == e["ok"].get<bool>();
    if (ok && p.ok()) {
      ok = p.response->solution == e["solution"].get<std::string>() &&
           p.response->reason_var == e["reason"].get<int>() &&
           p.response->explanation == e["explanation"].get<std::string>() &&
           p.response->error_var == e["error"].get<int>();
    } else if (ok) {
      ok = parse_failure_name(p.failure->kind) == e["kind"].get<std::string>();
    }
    wrong += !ok;
    ++cases;
  }
  o.require(cases == 13 && wrong == 0, std::to_string(wrong) + " of " + std::to_string(cases) + " golden transcripts misparsed");
  return o;
}

Outcome c10() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "reasonsat_acceptance_c10";
  fs::remove_all(root);
  std::string texts[2][2];
  for (int k = 0; k < 2; ++k) {
    ExperimentConfig c = default_config();
    c.seed = 10;
    c.per_stratum = 20;
    c.shuffles = 5;
    c.jobs = k + 1;
    c.output_dir = (root / std::to_string(k)).string();
    write_dataset(c, generate_dataset(c));
    run_experiment(c);
    texts[k][0] = read_file(fs::path(c.output_dir) / "manifest.jsonl");
    texts[k][1] = read_file(fs::path(c.output_dir) / "records.jsonl");
  }
  o.require(!texts[0][0].empty() && texts[0][0] == texts[1][0], "manifests differ");
  o.require(!texts[0][1].empty() && texts[0][1] == texts[1][1], "records differ");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  criterion(1, 1.0, c1);
  criterion(2, 0.010, c2);
  criterion(3, 60.0, c3);
  criterion(4, 60.0, c4);
  criterion(5, 10.0, c5);
  criterion(6, 300.0, c6);
  criterion(7, 120.0, c7);
  criterion(8, 30.0, c8);
  criterion(9, 10.0, c9);
  criterion(10, 60.0, c10);
  return failures == 0 ? 0 : 1;
}
