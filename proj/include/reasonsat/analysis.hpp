// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reasonsat/lexicon.hpp"
#include "reasonsat/logistic.hpp"
#include "reasonsat/records.hpp"

namespace reasonsat {

enum class ValidityFilter { kParseable, kCorrectOnly };
/// Where "the backtracked variable" of a run comes from: the subject's own
/// ERROR field, or the first flip in the recorded solver trace.
enum class BacktrackSource { kResponse, kTrace };

std::string_view validity_filter_name(ValidityFilter f) noexcept;
std::optional<ValidityFilter> parse_validity_filter(std::string_view text) noexcept;
std::string_view backtrack_source_name(BacktrackSource s) noexcept;
std::optional<BacktrackSource> parse_backtrack_source(std::string_view text) noexcept;

struct AnalysisOptions {
  ValidityFilter filter = ValidityFilter::kParseable;
  BacktrackSource backtrack = BacktrackSource::kResponse;
  /// Cells with |z| below this (or inestimable) print as "(n.d.)".
  double nd_threshold = 1.96;
  bool per_stratum = false;
};

/// The per-run facts every statistic is computed from. All variables are in
/// the presentation namespace of the run.
struct Observation {
  std::string run_id;
  Stratum stratum = Stratum::kNeither;
  std::uint32_t num_vars = 0;
  int reason_var = 0;
  std::string explanation;
  std::vector<Var> unit_vars;
  std::vector<Var> resolution_vars;
  std::optional<Var> backtrack_var;
  std::vector<Var> max_degree_vars;

  bool has_unit() const noexcept { return !unit_vars.empty(); }
  bool has_resolution() const noexcept { return !resolution_vars.empty(); }
  bool has_backtrack() const noexcept { return backtrack_var.has_value(); }
  bool cites(const std::vector<Var>& vars) const noexcept;
};

Observation make_observation(const RunRecord& record, BacktrackSource source);

/// Records passing the filter, as observations sorted by run id.
std::vector<Observation> observations(const std::vector<RunRecord>& records,
                                      const AnalysisOptions& options);

struct UsageCell {
  std::size_t cited = 0;
  std::size_t total = 0;
  /// Undefined when the condition never occurs.
  std::optional<double> rate() const;
};

struct UsageRow {
  std::string reason;
  UsageCell possible;
  UsageCell needed;
};

/// Rows: Unit Clause, Resolution, Backtrack.
std::vector<UsageRow> usage_rates(const std::vector<Observation>& obs);

struct FitRow {
  std::string label;
  std::size_t n = 0;
  std::optional<RegressionResult> fit;
  /// Why `fit` is missing or degenerate; empty when the fit is clean.
  std::string note;
};

inline constexpr const char* kIntercept = "Intercept";
inline constexpr const char* kCompetingSimplification = "Competing Simplification";
inline constexpr const char* kCompetingBacktrack = "Competing Backtrack";
inline constexpr const char* kInfluence = "Influence";

/// One logistic fit per reason type over runs where that reason exists;
/// outcome is citation of an implicated variable. The Backtrack row has no
/// competing-backtrack column.
std::vector<FitRow> reason_regressions(const std::vector<Observation>& obs,
                                       const FitOptions& options = {});

inline constexpr const char* kUnitClause = "Unit Clause";
inline constexpr const char* kResolution = "Resolution";
inline constexpr const char* kBacktrack = "Backtrack";

struct LanguageRow {
  FitRow row;
  std::size_t present = 0;
  std::optional<double> baseline() const;
};

/// Per category: baseline frequency plus a logistic fit of category presence
/// on the cited variable's Unit Clause / Resolution / Influence / Backtrack
/// indicators.
std::vector<LanguageRow> language_regressions(const std::vector<Observation>& obs,
                                              const WordLexicon& lexicon,
                                              const FitOptions& options = {});

struct ReportSection {
  std::string label;
  std::size_t n = 0;
  std::vector<UsageRow> usage;
  std::vector<FitRow> reasons;
  std::vector<LanguageRow> language;
};

struct AnalysisReport {
  AnalysisOptions options;
  std::size_t total_records = 0;
  std::size_t excluded = 0;
  std::vector<ReportSection> sections;
};

AnalysisReport analyze(const std::vector<RunRecord>& records, const AnalysisOptions& options,
                       const WordLexicon& lexicon = WordLexicon::standard());

std::string significance_stars(double p);

struct RenderedReport {
  std::string text;
  std::string usage_csv;
  std::string reasons_csv;
  std::string language_csv;
  std::string results_json;
};

RenderedReport render_report(const AnalysisReport& report);

/// Writes report.txt, usage.csv, reasons.csv, language.csv and results.json.
void export_report(const AnalysisReport& report, const std::filesystem::path& dir);

}  // namespace reasonsat
