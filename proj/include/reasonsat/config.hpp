// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reasonsat/analysis.hpp"
#include "reasonsat/generator.hpp"
#include "reasonsat/solver.hpp"
#include "reasonsat/subject.hpp"

namespace reasonsat {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generic chat-completion endpoint. The bearer token is read from the
/// environment variable named by api_key_env at call time and never stored.
struct LlmConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string api_key_env = "REASONSAT_API_KEY";
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  std::size_t max_in_flight = 4;
  std::size_t max_retries = 5;
  double backoff_initial_s = 1.0;
  double backoff_max_s = 60.0;
  double timeout_s = 120.0;
};

enum class BackendKind { kSynthetic, kLlm, kReplay };

std::string_view backend_kind_name(BackendKind kind) noexcept;

struct BackendConfig {
  BackendKind kind = BackendKind::kSynthetic;
  ReasonModel model;
  ExplanationModel explanations = ExplanationModel::table_pattern();
  LlmConfig llm;
  /// Transcript file in the transcripts.jsonl format.
  std::string replay_path;
};

/// Everything a gen/run/report cycle needs. All randomness derives from seed.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t per_stratum = 400;
  std::size_t shuffles = 20;
  std::vector<GenSpec> strata;
  /// Solver used for every run's reference trace and by the synthetic subject.
  /// Its seed field is ignored; each run derives its own.
  Heuristic heuristic;
  BackendConfig backend;
  AnalysisOptions analysis;
  std::string output_dir = "experiment";
  std::size_t jobs = 1;
  /// Stop after executing this many runs in one invocation (0 = no limit).
  std::size_t max_runs = 0;
};

/// Defaults: unit, resolution and neither strata at 4 variables, 4-6 clauses
/// of length 2-4; random branching and polarity with unit propagation and
/// level-0 resolution; the planted per-reason logit model.
ExperimentConfig default_config();

/// The planted per-reason logistic rows used by default_config().
PlantedReasons default_planted_reasons();

std::string_view branch_rule_name(BranchRule r) noexcept;
std::optional<BranchRule> parse_branch_rule(std::string_view text) noexcept;
std::string_view polarity_rule_name(PolarityRule r) noexcept;
std::optional<PolarityRule> parse_polarity_rule(std::string_view text) noexcept;

/// Missing keys keep their default_config() values; unknown keys and bad
/// values raise ConfigError naming the key.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig merge_config_json(ExperimentConfig base, std::string_view text);
std::string config_to_json(const ExperimentConfig& config);

/// Throws ConfigError on the first invalid field.
void validate(const ExperimentConfig& config);

std::string heuristic_to_json(const Heuristic& h);
Heuristic heuristic_from_json(std::string_view text);

}  // namespace reasonsat
