// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reasonsat/config.hpp"
#include "reasonsat/records.hpp"

namespace reasonsat {

struct GenSummary {
  std::size_t instances = 0;
  std::size_t runs = 0;
  std::vector<StratumStats> stats;
  std::string summary_json;
};

Dataset generate_dataset(const ExperimentConfig& config);
/// Writes manifest.jsonl, instances/<id>.cnf, summary.json and config.json
/// under output_dir.
GenSummary write_dataset(const ExperimentConfig& config, const Dataset& dataset);

/// The endpoint could not be reached, or kept failing, after all retries.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& message, std::size_t attempts)
      : std::runtime_error(message), attempts_(attempts) {}
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t attempts_;
};

struct LlmReply {
  std::string content;
  std::size_t attempts = 1;
  std::string response_model;
};

/// POSTs the prompt as one user message to a chat-completion endpoint with
/// retries, exponential backoff and jitter.
LlmReply llm_complete(const LlmConfig& config, const std::string& prompt, std::uint64_t jitter_seed);

struct ProgressInfo {
  std::size_t done = 0;
  std::size_t total = 0;
  std::size_t parse_failures = 0;
  std::size_t transport_failures = 0;
};

using ProgressFn = std::function<void(const ProgressInfo&)>;

struct RunSummary {
  std::size_t total = 0;
  std::size_t already_complete = 0;
  std::size_t executed = 0;
  std::size_t remaining = 0;
  std::size_t ok = 0;
  std::size_t parse_failures = 0;
  std::size_t transport_failures = 0;
  /// Run ids absent from a replay file.
  std::vector<std::string> replay_gaps;
  std::string summary_json;
};

/// Executes every manifest run not already complete in output_dir, appending
/// to records.partial.jsonl as runs finish, then rewrites records.jsonl and
/// transcripts.jsonl sorted by run id. Safe to interrupt and rerun.
RunSummary run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// One run, without touching the file system. Exposed for tests and the C API.
RunRecord execute_run(const ExperimentConfig& config, const ManifestEntry& entry,
                      const std::optional<std::string>& replay_transcript,
                      std::string* transcript_out);

std::uint64_t run_seed(std::uint64_t master_seed, const std::string& run_id);

}  // namespace reasonsat
