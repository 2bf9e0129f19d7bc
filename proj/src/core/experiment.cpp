// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "reasonsat/rng.hpp"

namespace reasonsat {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kManifest = "manifest.jsonl";
constexpr const char* kRecords = "records.jsonl";
constexpr const char* kRecordsJournal = "records.partial.jsonl";
constexpr const char* kTranscripts = "transcripts.jsonl";
constexpr const char* kTranscriptsJournal = "transcripts.partial.jsonl";
constexpr const char* kGaps = "replay_gaps.txt";

std::vector<GenSpec> seeded_strata(const ExperimentConfig& config) {
  std::vector<GenSpec> out = config.strata;
  for (auto& s : out) s.seed = config.seed;
  return out;
}

// Journals may end in a half-written line after an interrupt; such lines are
// dropped and the run is simply executed again.
template <typename Decode, typename Sink>
void read_journal(const fs::path& path, Decode decode, Sink sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      sink(decode(line));
    } catch (const std::exception&) {
    }
  }
}

}  // namespace

Dataset generate_dataset(const ExperimentConfig& config) {
  validate(config);
  Battery battery{config.per_stratum, config.shuffles, config.seed};
  return generate_battery(battery, seeded_strata(config), config.jobs);
}

GenSummary write_dataset(const ExperimentConfig& config, const Dataset& dataset) {
  const fs::path dir = config.output_dir;
  fs::create_directories(dir / "instances");
  std::string manifest;
  for (const auto& e : manifest_entries(dataset)) manifest += encode_manifest_entry(e) + "\n";
  for (const auto& inst : dataset.instances) {
    write_file_atomic(dir / "instances" / (inst.id + ".cnf"), write_dimacs(inst.formula));
  }
  write_file_atomic(dir / kManifest, manifest);

  GenSummary summary;
  summary.instances = dataset.instances.size();
  summary.runs = dataset.run_count();
  summary.stats = dataset.stats;
  ojson j;
  j["seed"] = dataset.master_seed;
  j["instances"] = summary.instances;
  j["runs"] = summary.runs;
  j["strata"] = ojson::array();
  for (const auto& s : dataset.stats) {
    j["strata"].push_back({{"stratum", stratum_name(s.stratum)},
                           {"instances", s.instances},
                           {"attempts", s.attempts},
                           {"duplicate_rejections", s.duplicate_rejections},
                           {"acceptance_rate", s.acceptance_rate()}});
  }
  summary.summary_json = j.dump(2) + "\n";
  write_file_atomic(dir / "summary.json", summary.summary_json);
  write_file_atomic(dir / "config.json", config_to_json(config));
  return summary;
}

std::uint64_t run_seed(std::uint64_t master_seed, const std::string& run_id) {
  return derive_seed(master_seed, "run/" + run_id, 0);
}

RunRecord execute_run(const ExperimentConfig& config, const ManifestEntry& entry,
                      const std::optional<std::string>& replay_transcript,
                      std::string* transcript_out) {
  const std::uint64_t seed = run_seed(config.seed, entry.run_id);
  RunRecord r;
  r.run_id = entry.run_id;
  r.instance_id = entry.instance_id;
  r.stratum = entry.stratum;
  r.shuffle_index = entry.shuffle_index;
  r.formula = entry.formula;
  r.solution = entry.solution;
  r.key = entry.key;
  r.profile = compute_profile(entry.formula);

  Heuristic heuristic = config.heuristic;
  heuristic.seed = derive_seed(seed, "solver", 0);
  const std::uint32_t n = entry.formula.num_vars();
  std::string transcript;
  ojson backend;
  backend["kind"] = backend_kind_name(config.backend.kind);

  switch (config.backend.kind) {
    case BackendKind::kSynthetic: {
      SyntheticResult s = synthetic_respond(entry.formula, r.profile, heuristic, config.backend.model,
                                            config.backend.explanations, seed);
      r.trace = std::move(s.trace);
      transcript = std::move(s.response.raw_transcript);
      s.response.raw_transcript.clear();
      r.response = std::move(s.response);
      backend["model"] = config.backend.model.kind == ReasonModel::Kind::kSoftmax ? "softmax" : "planted";
      break;
    }
    case BackendKind::kReplay:
    case BackendKind::kLlm: {
      r.trace = dpll_solve(entry.formula, heuristic);
      if (config.backend.kind == BackendKind::kReplay) {
        if (!replay_transcript) throw ContractViolation("replay run " + entry.run_id + " has no transcript");
        transcript = *replay_transcript;
        backend["source"] = fs::path(config.backend.replay_path).filename().string();
      } else {
        const auto& l = config.backend.llm;
        backend["endpoint"] = l.endpoint;
        backend["model"] = l.model;
        backend["sampling"] = {{"temperature", l.temperature ? ojson(*l.temperature) : ojson(nullptr)},
                               {"top_p", l.top_p ? ojson(*l.top_p) : ojson(nullptr)},
                               {"max_tokens", l.max_tokens ? ojson(*l.max_tokens) : ojson(nullptr)}};
        try {
          const LlmReply reply = llm_complete(l, build_prompt(entry.formula), derive_seed(seed, "jitter", 0));
          transcript = reply.content;
          r.attempts = reply.attempts;
          if (!reply.response_model.empty()) backend["response_model"] = reply.response_model;
        } catch (const TransportError& e) {
          r.status = RunStatus::kTransportFailure;
          r.attempts = e.attempts();
          backend["transport_error"] = e.what();
          r.backend_json = backend.dump();
          if (transcript_out) transcript_out->clear();
          return r;
        }
      }
      ParsedResponse parsed = parse_response(transcript, n);
      if (parsed.ok()) {
        r.response = std::move(parsed.response);
        r.response->raw_transcript.clear();
      } else {
        r.status = RunStatus::kParseFailure;
        r.failure = std::move(parsed.failure);
      }
      break;
    }
  }
  backend["solver"] = nlohmann::ordered_json::parse(heuristic_to_json(heuristic));
  r.backend_json = backend.dump();
  if (r.response) {
    r.validation = validate_response(*r.response, entry.formula, enumerate_solutions(entry.formula));
  }
  if (transcript_out) *transcript_out = std::move(transcript);
  return r;
}

RunSummary run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  validate(config);
  const fs::path dir = config.output_dir;
  if (!fs::exists(dir / kManifest)) {
    throw ConfigError("no dataset at " + (dir / kManifest).string() + "; run gen first");
  }
  const std::vector<ManifestEntry> manifest = read_manifest(dir / kManifest);

  std::map<std::string, RunRecord> records;
  std::map<std::string, std::string> transcripts;
  const auto keep_record = [&](RunRecord r) { records[r.run_id] = std::move(r); };
  const auto keep_transcript = [&](TranscriptEntry t) { transcripts[t.run_id] = std::move(t.transcript); };
  if (fs::exists(dir / kRecords)) {
    for (auto& r : read_records(dir / kRecords)) keep_record(std::move(r));
  }
  read_journal(dir / kRecordsJournal, [](std::string_view l) { return decode_record(l); }, keep_record);
  if (fs::exists(dir / kTranscripts)) {
    for (auto& t : read_transcripts(dir / kTranscripts)) keep_transcript(std::move(t));
  }
  read_journal(dir / kTranscriptsJournal, [](std::string_view l) { return decode_transcript(l); },
               keep_transcript);

  std::map<std::string, std::string> replay;
  if (config.backend.kind == BackendKind::kReplay) {
    if (!fs::exists(config.backend.replay_path)) {
      throw ConfigError("replay file " + config.backend.replay_path + " does not exist");
    }
    for (auto& t : read_transcripts(config.backend.replay_path)) replay[t.run_id] = std::move(t.transcript);
  }

  RunSummary summary;
  summary.total = manifest.size();
  std::vector<const ManifestEntry*> pending;
  for (const auto& e : manifest) {
    const auto it = records.find(e.run_id);
    if (it != records.end() && it->second.complete()) {
      ++summary.already_complete;
      continue;
    }
    if (config.backend.kind == BackendKind::kReplay && !replay.count(e.run_id)) {
      summary.replay_gaps.push_back(e.run_id);
      continue;
    }
    pending.push_back(&e);
  }
  // Deterministic shuffle so strata are interleaved on rate-limited endpoints.
  Rng order(derive_seed(config.seed, "run-order", 0));
  order.shuffle(std::span<const ManifestEntry*>(pending));
  if (config.max_runs > 0 && pending.size() > config.max_runs) pending.resize(config.max_runs);

  std::ofstream record_journal(dir / kRecordsJournal, std::ios::binary | std::ios::app);
  std::ofstream transcript_journal(dir / kTranscriptsJournal, std::ios::binary | std::ios::app);
  if (!record_journal || !transcript_journal) throw std::runtime_error("cannot open journals in " + dir.string());

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  ProgressInfo info;
  info.total = pending.size();
  std::exception_ptr failure;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const ManifestEntry& e = *pending[i];
      try {
        std::optional<std::string> replayed;
        if (auto it = replay.find(e.run_id); it != replay.end()) replayed = it->second;
        std::string transcript;
        RunRecord r = execute_run(config, e, replayed, &transcript);
        const std::string line = encode_record(r);
        std::lock_guard<std::mutex> lock(mu);
        if (r.status != RunStatus::kTransportFailure) {
          transcript_journal << encode_transcript({r.run_id, transcript}) << '\n';
          transcript_journal.flush();
          transcripts[r.run_id] = std::move(transcript);
        }
        record_journal << line << '\n';
        record_journal.flush();
        ++info.done;
        info.parse_failures += r.status == RunStatus::kParseFailure;
        info.transport_failures += r.status == RunStatus::kTransportFailure;
        records[r.run_id] = std::move(r);
        if (progress) progress(info);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(pending.size());
        return;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(
      1, std::min(pending.size(), config.backend.kind == BackendKind::kLlm ? config.backend.llm.max_in_flight
                                                                           : config.jobs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  record_journal.close();
  transcript_journal.close();
  if (failure) std::rethrow_exception(failure);

  // Finalize: one sorted file each, then drop the journals.
  std::string all_records;
  std::string all_transcripts;
  for (const auto& [id, r] : records) {
    all_records += encode_record(r) + "\n";
    if (r.status == RunStatus::kOk) ++summary.ok;
    if (r.status == RunStatus::kParseFailure) ++summary.parse_failures;
    if (r.status == RunStatus::kTransportFailure) ++summary.transport_failures;
  }
  for (const auto& [id, t] : transcripts) all_transcripts += encode_transcript({id, t}) + "\n";
  write_file_atomic(dir / kRecords, all_records);
  write_file_atomic(dir / kTranscripts, all_transcripts);
  fs::remove(dir / kRecordsJournal);
  fs::remove(dir / kTranscriptsJournal);

  std::string gaps;
  for (const auto& g : summary.replay_gaps) gaps += g + "\n";
  if (!summary.replay_gaps.empty()) {
    write_file_atomic(dir / kGaps, gaps);
  } else {
    fs::remove(dir / kGaps);
  }

  summary.executed = info.done;
  std::size_t complete = 0;
  for (const auto& e : manifest) {
    const auto it = records.find(e.run_id);
    complete += it != records.end() && it->second.complete();
  }
  summary.remaining = manifest.size() - complete;

  ojson j;
  j["total"] = summary.total;
  j["already_complete"] = summary.already_complete;
  j["executed"] = summary.executed;
  j["remaining"] = summary.remaining;
  j["ok"] = summary.ok;
  j["parse_failures"] = summary.parse_failures;
  j["transport_failures"] = summary.transport_failures;
  j["replay_gaps"] = summary.replay_gaps.size();
  summary.summary_json = j.dump(2) + "\n";
  write_file_atomic(dir / "run_summary.json", summary.summary_json);
  write_file_atomic(dir / "run_config.json", config_to_json(config));
  return summary;
}

}  // namespace reasonsat
