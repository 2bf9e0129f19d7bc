// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "reasonsat/analysis.hpp"
#include "reasonsat/config.hpp"
#include "reasonsat/experiment.hpp"
#include "support.hpp"

using namespace reasonsat;
namespace fs = std::filesystem;

namespace {

Observation obs(int reason, std::vector<Var> unit, std::vector<Var> res, std::optional<Var> bt,
                std::vector<Var> maxdeg = {}) {
  static int counter = 0;
  Observation o;
  o.run_id = "r" + std::to_string(counter++);
  o.num_vars = 4;
  o.reason_var = reason;
  o.unit_vars = std::move(unit);
  o.resolution_vars = std::move(res);
  o.backtrack_var = bt;
  o.max_degree_vars = std::move(maxdeg);
  return o;
}

std::vector<Observation> usage_fixture() {
  return {
      obs(1, {1}, {}, {}),         obs(2, {1}, {}, {}),   obs(3, {2}, {3}, {}),
      obs(2, {2}, {}, 4),          obs(3, {}, {3}, {}),   obs(2, {}, {1}, 2),
      obs(4, {}, {}, 4),           obs(3, {}, {}, 1),     obs(1, {}, {}, {}),
      obs(4, {}, {2, 4}, {}),
  };
}

void check_cell(const UsageCell& c, std::size_t cited, std::size_t total) {
  CHECK(c.cited == cited);
  CHECK(c.total == total);
}

std::vector<RunRecord> small_experiment_records(std::uint64_t seed) {
  ExperimentConfig c = default_config();
  c.seed = seed;
  c.per_stratum = 10;
  c.shuffles = 2;
  std::vector<RunRecord> out;
  for (const auto& e : manifest_entries(generate_dataset(c))) {
    out.push_back(execute_run(c, e, std::nullopt, nullptr));
  }
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("reasonsat_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("usage rates on a ten-record fixture") {
  const auto rows = usage_rates(usage_fixture());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].reason == "Unit Clause");
  check_cell(rows[0].possible, 2, 4);
  check_cell(rows[0].needed, 1, 2);
  CHECK(rows[1].reason == "Resolution");
  check_cell(rows[1].possible, 3, 4);
  check_cell(rows[1].needed, 2, 2);
  CHECK(rows[2].reason == "Backtrack");
  check_cell(rows[2].possible, 2, 4);
  check_cell(rows[2].needed, 1, 2);
  CHECK(*rows[1].needed.rate() == 1.0);
}

TEST_CASE("usage cells with no cases are undefined") {
  const auto rows = usage_rates({obs(1, {1}, {}, {}), obs(2, {}, {}, {})});
  CHECK(!rows[2].possible.rate());
  CHECK(!rows[1].needed.rate());
  CHECK(rows[0].possible.rate() == 1.0);
}

TEST_CASE("property: usage counts ignore record order") {
  auto fixture = usage_fixture();
  const auto base = usage_rates(fixture);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    rng.shuffle(std::span<Observation>(fixture));
    const auto rows = usage_rates(fixture);
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(rows[r].possible.cited == base[r].possible.cited);
      CHECK(rows[r].needed.total == base[r].needed.total);
    }
  }
}

TEST_CASE("regressions report a backtrack-free sample as inestimable") {
  Rng rng(6);
  std::vector<Observation> sample;
  for (int i = 0; i < 600; ++i) {
    std::vector<Var> res;
    if (rng.coin()) res.push_back(3);
    std::vector<Var> maxdeg = {static_cast<Var>(1 + rng.below(4))};
    sample.push_back(obs(static_cast<int>(1 + rng.below(4)), {1}, res, {}, maxdeg));
  }
  const auto rows = reason_regressions(sample);
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[0].fit);
  CHECK(!rows[0].fit->find(kCompetingBacktrack)->estimable);
  CHECK(rows[0].fit->find(kCompetingSimplification)->estimable);
  CHECK(!rows[0].note.empty());
  CHECK(rows[2].n == 0);
  CHECK(!rows[2].fit);
}

TEST_CASE("regressions recover a simulated influence effect") {
  Rng rng(7);
  std::vector<Observation> sample;
  for (int i = 0; i < 6000; ++i) {
    const bool influential = rng.coin();
    const bool competing = rng.coin();
    const double eta = -0.5 + 1.4 * influential - 0.6 * competing;
    const bool cite = rng.bernoulli(1.0 / (1.0 + std::exp(-eta)));
    const std::vector<Var> maxdeg = {influential ? Var{1} : Var{2}};
    sample.push_back(obs(cite ? 1 : 4, {1}, competing ? std::vector<Var>{3} : std::vector<Var>{},
                         {}, maxdeg));
  }
  const auto rows = reason_regressions(sample);
  const auto& fit = *rows[0].fit;
  CHECK(std::abs(fit.find(kInfluence)->estimate - 1.4) < 3 * fit.find(kInfluence)->std_error);
  CHECK(std::abs(fit.find(kCompetingSimplification)->estimate + 0.6) <
        3 * fit.find(kCompetingSimplification)->std_error);
}

TEST_CASE("language regressions recover an injected association") {
  Rng rng(9);
  std::vector<Observation> sample;
  for (int i = 0; i < 3000; ++i) {
    const Var cited = static_cast<Var>(1 + rng.below(4));
    const bool unit = cited == 1;
    const bool inject = rng.bernoulli(unit ? 0.7 : 0.2);
    Observation o = obs(static_cast<int>(cited), {1}, {}, {}, {2});
    o.explanation = inject ? "this simplifies things" : "x is true";
    sample.push_back(o);
  }
  const auto rows = language_regressions(sample, WordLexicon::standard());
  REQUIRE(rows.size() == 5);
  const auto& simp = rows[1];
  CHECK(simp.row.label == "Simplification");
  const auto* c = simp.row.fit->find(kUnitClause);
  CHECK(c->estimate > 0);
  CHECK(c->p_value < 1e-3);
  CHECK(std::abs(*simp.baseline() - double(simp.present) / 3000) < 1e-12);
  // Nothing else is injected, so those rows have no positives at all.
  CHECK(rows[0].present == 0);
}

TEST_CASE("significance stars") {
  CHECK(significance_stars(1e-4) == "***");
  CHECK(significance_stars(5e-3) == "**");
  CHECK(significance_stars(0.04) == "*");
  CHECK(significance_stars(0.2) == "");
}

TEST_CASE("empty record set renders explicit no-data cells") {
  const auto report = analyze({}, AnalysisOptions{});
  const auto r = render_report(report);
  CHECK(r.text.find("no data") != std::string::npos);
  CHECK(r.text.find("undefined (0/0)") != std::string::npos);
  CHECK(r.text.find("parseable") != std::string::npos);
  CHECK(!r.usage_csv.empty());
  CHECK(!r.results_json.empty());
}

TEST_CASE("reports are deterministic and golden") {
  const auto records = small_experiment_records(3);
  AnalysisOptions opts;
  opts.per_stratum = true;
  const auto a = render_report(analyze(records, opts));
  const auto b = render_report(analyze(records, opts));
  CHECK(a.text == b.text);
  CHECK(a.results_json == b.results_json);
  CHECK(a.reasons_csv == b.reasons_csv);

  const fs::path d1 = scratch_dir("report1");
  const fs::path d2 = scratch_dir("report2");
  export_report(analyze(records, opts), d1);
  export_report(analyze(records, opts), d2);
  for (const char* name : {"report.txt", "usage.csv", "reasons.csv", "language.csv", "results.json"}) {
    CHECK(read_file(d1 / name) == read_file(d2 / name));
  }
  CHECK(read_file(d1 / "report.txt") == a.text);

  const fs::path golden = rsat_test::fixture("report_golden.txt");
  if (std::getenv("REASONSAT_UPDATE_GOLDEN")) write_file_atomic(golden, a.text);
  CHECK(read_file(golden) == a.text);
}

TEST_CASE("filters and backtrack sources") {
  auto records = small_experiment_records(4);
  records[0].validation->solution_correct = false;
  records[1].status = RunStatus::kParseFailure;
  records[1].response.reset();
  AnalysisOptions opts;
  CHECK(observations(records, opts).size() == records.size() - 1);
  opts.filter = ValidityFilter::kCorrectOnly;
  CHECK(observations(records, opts).size() == records.size() - 2);

  RunRecord r = records[2];
  r.response->error_var = 9;
  CHECK(!make_observation(r, BacktrackSource::kResponse).backtrack_var);
  r.response->error_var = 2;
  CHECK(make_observation(r, BacktrackSource::kResponse).backtrack_var == Var{2});
  CHECK(make_observation(r, BacktrackSource::kTrace).backtrack_var == r.trace.first_backtracked());

  CHECK(parse_validity_filter("correct-only") == ValidityFilter::kCorrectOnly);
  CHECK(parse_backtrack_source("trace") == BacktrackSource::kTrace);
  CHECK(!parse_validity_filter("all"));
}
