// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reasonsat/cnf.hpp"
#include "reasonsat/generator.hpp"
#include "reasonsat/solver.hpp"
#include "reasonsat/structure.hpp"
#include "reasonsat/subject.hpp"

namespace reasonsat {

/// One run slot of a generated dataset (a line of manifest.jsonl).
struct ManifestEntry {
  std::string run_id;
  std::string instance_id;
  Stratum stratum = Stratum::kNeither;
  std::size_t shuffle_index = 0;
  std::uint64_t instance_seed = 0;
  Formula base_formula;
  Formula formula;
  ShuffleKey key;
  Assignment solution;
  Assignment base_solution;
};

std::vector<ManifestEntry> manifest_entries(const Dataset& dataset);
std::string encode_manifest_entry(const ManifestEntry& entry);
ManifestEntry decode_manifest_entry(std::string_view line);

enum class RunStatus { kOk, kParseFailure, kTransportFailure };

std::string_view run_status_name(RunStatus status) noexcept;

/// The unit of analysis: one presented formula, its structure (in the
/// presentation variable namespace), a solver trace and the subject's answer.
struct RunRecord {
  std::string run_id;
  std::string instance_id;
  Stratum stratum = Stratum::kNeither;
  std::size_t shuffle_index = 0;
  Formula formula;
  Assignment solution;
  ShuffleKey key;
  StructureProfile profile;
  SolveTrace trace;
  RunStatus status = RunStatus::kOk;
  std::optional<SubjectResponse> response;
  std::optional<ParseFailure> failure;
  std::optional<ValidationReport> validation;
  /// Backend description recorded verbatim (a JSON object as text).
  std::string backend_json = "{}";
  std::size_t attempts = 1;

  bool complete() const noexcept { return status != RunStatus::kTransportFailure; }
};

/// One line; the transcript is not part of the record (see TranscriptEntry).
std::string encode_record(const RunRecord& record);
RunRecord decode_record(std::string_view line);

struct TranscriptEntry {
  std::string run_id;
  std::string transcript;
};

std::string encode_transcript(const TranscriptEntry& entry);
TranscriptEntry decode_transcript(std::string_view line);

/// The JSON objects used inside records, exposed for other front ends.
std::string profile_to_json_text(const StructureProfile& profile);
std::string trace_to_json_text(const SolveTrace& trace);

/// Reads non-empty lines; throws std::runtime_error naming the file and
/// line on malformed input.
std::vector<RunRecord> read_records(const std::filesystem::path& path);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
std::vector<TranscriptEntry> read_transcripts(const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace reasonsat
