// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reasonsat/cnf.hpp"
#include "reasonsat/lexicon.hpp"
#include "reasonsat/rng.hpp"
#include "reasonsat/solver.hpp"
#include "reasonsat/structure.hpp"

namespace reasonsat {

/// The four-field answer requested by the prompt.
struct SubjectResponse {
  std::string solution;
  int reason_var = 0;
  std::string explanation;
  int error_var = -1;
  std::string raw_transcript;

  bool operator==(const SubjectResponse&) const = default;
};

enum class ParseFailureKind { kNoObject, kMissingField, kBadField, kMalformedSolution };

std::string_view parse_failure_name(ParseFailureKind kind) noexcept;

struct ParseFailure {
  ParseFailureKind kind = ParseFailureKind::kNoObject;
  std::string message;
};

/// Exactly one of response / failure is set; the transcript is kept either way.
struct ParsedResponse {
  std::optional<SubjectResponse> response;
  std::optional<ParseFailure> failure;

  bool ok() const noexcept { return response.has_value(); }
};

std::string build_prompt(const Formula& formula);

/// Picks the last object in the transcript carrying SOLUTION, REASON,
/// EXPLANATION and ERROR. Never throws on malformed input.
ParsedResponse parse_response(std::string_view text, std::uint32_t num_vars);

struct ValidationReport {
  bool solution_correct = false;
  bool reason_in_range = false;
  bool error_in_range = false;
  bool reason_equals_error = false;
};

ValidationReport validate_response(const SubjectResponse& response, const Formula& formula,
                                   const std::vector<Assignment>& oracle_solutions);

/// Per-variable utility weights for the softmax subject. The intercept is
/// shared by every variable and cancels in the softmax.
struct SoftmaxWeights {
  double is_unit = 0.0;
  double is_resolution = 0.0;
  double was_backtracked = 0.0;
  double is_max_degree = 0.0;
  double intercept = 0.0;
};

/// Logistic model for citing the variable a reason type implicates.
struct ReasonLogit {
  double intercept = 0.0;
  double competing_simplification = 0.0;
  double competing_backtrack = 0.0;
  double influence = 0.0;
};

/// One logistic row per reason type, in the shape of the usage regressions.
/// The backtrack row ignores competing_backtrack.
struct PlantedReasons {
  ReasonLogit unit;
  ReasonLogit resolution;
  ReasonLogit backtrack;
};

struct ReasonModel {
  enum class Kind { kSoftmax, kPlanted };
  Kind kind = Kind::kSoftmax;
  SoftmaxWeights weights;
  double temperature = 1.0;
  PlantedReasons planted;
};

void validate(const ReasonModel& model);

/// Softmax weight on is_unit that makes a lone unit variable the choice with
/// probability `target` among `num_vars` otherwise featureless variables.
double calibrate_unit_weight(double target, std::uint32_t num_vars, double temperature = 1.0);

/// Logistic chance that an explanation contains words from a category, as a
/// function of the cited variable's features.
struct CategoryInjection {
  double intercept = -10.0;
  double is_unit = 0.0;
  double is_resolution = 0.0;
  double is_max_degree = 0.0;
  double was_backtracked = 0.0;
};

struct ExplanationModel {
  std::map<std::string, CategoryInjection> categories;

  /// Mixed-sign associations between reason features and each category.
  static ExplanationModel table_pattern();
  /// Every category injected with the same probability regardless of features.
  static ExplanationModel uniform(double probability);
};

/// The implicated variable sets behind each reason type for one run. The
/// backtrack reason is the first flipped decision.
struct ReasonContext {
  std::vector<Var> unit_vars;
  std::vector<Var> resolution_vars;
  std::optional<Var> backtrack_var;
  std::vector<Var> max_degree_vars;
};

struct SyntheticResult {
  SubjectResponse response;
  SolveTrace trace;
};

/// Solves with `heuristic`, then samples a reason variable and an
/// explanation. Throws std::logic_error if the solver finds no solution.
SyntheticResult synthetic_respond(const Formula& formula, const StructureProfile& profile,
                                  const Heuristic& heuristic, const ReasonModel& model,
                                  const ExplanationModel& explanations, std::uint64_t seed);

/// Exposed for tests: reason-variable sampling given solver features.
Var sample_reason(const RunFeatures& features, const ReasonContext& context,
                  const ReasonModel& model, Rng& rng);

}  // namespace reasonsat
