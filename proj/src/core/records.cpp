// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/records.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace reasonsat {

using ojson = nlohmann::ordered_json;

namespace {

// Clause numbers in files are 1-based; in memory they are 0-based.
ojson key_to_json(const ShuffleKey& key) {
  ojson j;
  j["seed"] = key.seed;
  j["variable_permutation"] = key.variable_permutation;
  j["clause_order"] = key.clause_order;
  j["literal_orders"] = key.literal_orders;
  return j;
}

ShuffleKey key_from_json(const ojson& j) {
  ShuffleKey key;
  key.seed = j.at("seed").get<std::uint64_t>();
  key.variable_permutation = j.at("variable_permutation").get<std::vector<Var>>();
  key.clause_order = j.at("clause_order").get<std::vector<std::size_t>>();
  key.literal_orders = j.at("literal_orders").get<std::vector<std::vector<std::size_t>>>();
  return key;
}

Stratum stratum_from_json(const ojson& j) {
  const auto s = parse_stratum(j.get<std::string>());
  if (!s) throw std::runtime_error("unknown stratum '" + j.get<std::string>() + "'");
  return *s;
}

ojson profile_to_json(const StructureProfile& p) {
  ojson j;
  ojson units = ojson::array();
  for (const auto& u : p.unit_clause_vars) units.push_back({{"var", u.variable}, {"value", u.value}});
  j["unit_clause_vars"] = std::move(units);
  ojson res = ojson::array();
  for (const auto& r : p.resolution_units) {
    res.push_back({{"var", r.variable},
                   {"value", r.value},
                   {"clauses", {r.first_clause + 1, r.second_clause + 1}}});
  }
  j["resolution_units"] = std::move(res);
  ojson degrees = ojson::array();
  for (const auto& [v, d] : p.degrees) degrees.push_back(d);
  j["degrees"] = std::move(degrees);
  j["max_degree_vars"] = p.max_degree_vars;
  j["solution_count"] = p.solution_count;
  j["unique_solution"] = p.unique_solution ? ojson(p.unique_solution->to_string()) : ojson(nullptr);
  j["all_clauses_critical"] = p.all_clauses_critical;
  j["all_vars_occur"] = p.all_vars_occur;
  return j;
}

StructureProfile profile_from_json(const ojson& j) {
  StructureProfile p;
  for (const auto& u : j.at("unit_clause_vars")) {
    p.unit_clause_vars.insert({u.at("var").get<Var>(), u.at("value").get<bool>()});
  }
  for (const auto& r : j.at("resolution_units")) {
    const auto& c = r.at("clauses");
    p.resolution_units.insert({r.at("var").get<Var>(), r.at("value").get<bool>(),
                               c.at(0).get<std::size_t>() - 1, c.at(1).get<std::size_t>() - 1});
  }
  Var v = 1;
  for (const auto& d : j.at("degrees")) p.degrees[v++] = d.get<std::size_t>();
  p.max_degree_vars = j.at("max_degree_vars").get<std::set<Var>>();
  p.solution_count = j.at("solution_count").get<std::uint64_t>();
  if (!j.at("unique_solution").is_null()) {
    p.unique_solution = Assignment::from_string(j.at("unique_solution").get<std::string>());
  }
  p.all_clauses_critical = j.at("all_clauses_critical").get<bool>();
  p.all_vars_occur = j.at("all_vars_occur").get<bool>();
  return p;
}

ojson event_to_json(const TraceEvent& e) {
  ojson j;
  j["kind"] = event_kind_name(e.kind);
  switch (e.kind) {
    case EventKind::kDecide:
    case EventKind::kBacktrack:
      j["var"] = e.variable;
      j["value"] = e.value;
      break;
    case EventKind::kPropagateUnit:
      j["var"] = e.variable;
      j["value"] = e.value;
      j["clause"] = e.clause + 1;
      break;
    case EventKind::kPropagateResolution:
      j["var"] = e.variable;
      j["value"] = e.value;
      j["clauses"] = {e.clause_pair.first + 1, e.clause_pair.second + 1};
      break;
    case EventKind::kConflict:
      j["clause"] = e.clause + 1;
      break;
  }
  j["level"] = e.level;
  return j;
}

TraceEvent event_from_json(const ojson& j) {
  TraceEvent e;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "DECIDE") {
    e.kind = EventKind::kDecide;
  } else if (kind == "PROPAGATE_UNIT") {
    e.kind = EventKind::kPropagateUnit;
  } else if (kind == "PROPAGATE_RESOLUTION") {
    e.kind = EventKind::kPropagateResolution;
  } else if (kind == "CONFLICT") {
    e.kind = EventKind::kConflict;
  } else if (kind == "BACKTRACK") {
    e.kind = EventKind::kBacktrack;
  } else {
    throw std::runtime_error("unknown trace event kind '" + kind + "'");
  }
  if (j.contains("var")) e.variable = j.at("var").get<Var>();
  if (j.contains("value")) e.value = j.at("value").get<bool>();
  if (j.contains("clause")) e.clause = j.at("clause").get<std::size_t>() - 1;
  if (j.contains("clauses")) {
    e.clause_pair = {j.at("clauses").at(0).get<std::size_t>() - 1,
                     j.at("clauses").at(1).get<std::size_t>() - 1};
  }
  e.level = j.at("level").get<std::size_t>();
  return e;
}

ojson trace_to_json(const SolveTrace& t) {
  ojson j;
  j["satisfiable"] = t.satisfiable();
  j["exhausted"] = t.exhausted;
  j["final_assignment"] =
      t.final_assignment ? ojson(t.final_assignment->to_string()) : ojson(nullptr);
  j["decisions"] = t.decisions;
  j["conflicts"] = t.conflicts;
  j["backtracked_vars"] = t.backtracked_vars;
  ojson order = ojson::array();
  for (const auto& [v, value] : t.deduction_order) {
    order.push_back(value ? static_cast<int>(v) : -static_cast<int>(v));
  }
  j["deduction_order"] = std::move(order);
  ojson events = ojson::array();
  for (const auto& e : t.events) events.push_back(event_to_json(e));
  j["events"] = std::move(events);
  return j;
}

SolveTrace trace_from_json(const ojson& j) {
  SolveTrace t;
  t.exhausted = j.at("exhausted").get<bool>();
  if (!j.at("final_assignment").is_null()) {
    t.final_assignment = Assignment::from_string(j.at("final_assignment").get<std::string>());
  }
  t.decisions = j.at("decisions").get<std::size_t>();
  t.conflicts = j.at("conflicts").get<std::size_t>();
  t.backtracked_vars = j.at("backtracked_vars").get<std::vector<Var>>();
  for (const auto& code : j.at("deduction_order")) {
    const int c = code.get<int>();
    t.deduction_order.emplace_back(static_cast<Var>(c > 0 ? c : -c), c > 0);
  }
  for (const auto& e : j.at("events")) t.events.push_back(event_from_json(e));
  return t;
}

ojson parse_line(std::string_view line, const char* what) {
  try {
    return ojson::parse(line.begin(), line.end());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed ") + what + " line: " + e.what());
  }
}

}  // namespace

std::string profile_to_json_text(const StructureProfile& profile) {
  return profile_to_json(profile).dump();
}

std::string trace_to_json_text(const SolveTrace& trace) { return trace_to_json(trace).dump(); }

std::vector<ManifestEntry> manifest_entries(const Dataset& dataset) {
  std::vector<ManifestEntry> out;
  out.reserve(dataset.run_count());
  for (const auto& inst : dataset.instances) {
    for (const auto& v : inst.variants) {
      out.push_back(ManifestEntry{v.run_id, inst.id, inst.stratum, v.shuffle_index, inst.seed,
                                  inst.formula, v.formula, v.key, v.solution,
                                  *inst.profile.unique_solution});
    }
  }
  return out;
}

std::string encode_manifest_entry(const ManifestEntry& e) {
  ojson j;
  j["run_id"] = e.run_id;
  j["instance_id"] = e.instance_id;
  j["stratum"] = stratum_name(e.stratum);
  j["shuffle_index"] = e.shuffle_index;
  j["instance_seed"] = e.instance_seed;
  j["num_vars"] = e.formula.num_vars();
  j["base_dimacs"] = write_dimacs(e.base_formula);
  j["dimacs"] = write_dimacs(e.formula);
  j["shuffle_key"] = key_to_json(e.key);
  j["solution"] = e.solution.to_string();
  j["base_solution"] = e.base_solution.to_string();
  return j.dump();
}

ManifestEntry decode_manifest_entry(std::string_view line) {
  const ojson j = parse_line(line, "manifest");
  try {
    ManifestEntry e;
    e.run_id = j.at("run_id").get<std::string>();
    e.instance_id = j.at("instance_id").get<std::string>();
    e.stratum = stratum_from_json(j.at("stratum"));
    e.shuffle_index = j.at("shuffle_index").get<std::size_t>();
    e.instance_seed = j.at("instance_seed").get<std::uint64_t>();
    e.base_formula = parse_dimacs(j.at("base_dimacs").get<std::string>());
    e.formula = parse_dimacs(j.at("dimacs").get<std::string>());
    e.key = key_from_json(j.at("shuffle_key"));
    e.solution = Assignment::from_string(j.at("solution").get<std::string>());
    e.base_solution = Assignment::from_string(j.at("base_solution").get<std::string>());
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("malformed manifest entry: ") + ex.what());
  }
}

std::string_view run_status_name(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::kOk:
      return "ok";
    case RunStatus::kParseFailure:
      return "parse_failure";
    case RunStatus::kTransportFailure:
      return "transport_failure";
  }
  return "ok";
}

std::string encode_record(const RunRecord& r) {
  ojson j;
  j["run_id"] = r.run_id;
  j["instance_id"] = r.instance_id;
  j["stratum"] = stratum_name(r.stratum);
  j["shuffle_index"] = r.shuffle_index;
  j["num_vars"] = r.formula.num_vars();
  j["dimacs"] = write_dimacs(r.formula);
  j["solution"] = r.solution.to_string();
  j["shuffle_key"] = key_to_json(r.key);
  j["profile"] = profile_to_json(r.profile);
  j["trace"] = trace_to_json(r.trace);
  j["status"] = run_status_name(r.status);
  if (r.response) {
    j["response"] = {{"SOLUTION", r.response->solution},
                     {"REASON", r.response->reason_var},
                     {"EXPLANATION", r.response->explanation},
                     {"ERROR", r.response->error_var}};
  } else {
    j["response"] = nullptr;
  }
  if (r.failure) {
    j["failure"] = {{"kind", parse_failure_name(r.failure->kind)}, {"message", r.failure->message}};
  } else {
    j["failure"] = nullptr;
  }
  if (r.validation) {
    j["validation"] = {{"solution_correct", r.validation->solution_correct},
                       {"reason_in_range", r.validation->reason_in_range},
                       {"error_in_range", r.validation->error_in_range},
                       {"reason_equals_error", r.validation->reason_equals_error}};
  } else {
    j["validation"] = nullptr;
  }
  j["backend"] = ojson::parse(r.backend_json);
  j["attempts"] = r.attempts;
  return j.dump();
}

RunRecord decode_record(std::string_view line) {
  const ojson j = parse_line(line, "record");
  try {
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.instance_id = j.at("instance_id").get<std::string>();
    r.stratum = stratum_from_json(j.at("stratum"));
    r.shuffle_index = j.at("shuffle_index").get<std::size_t>();
    r.formula = parse_dimacs(j.at("dimacs").get<std::string>());
    r.solution = Assignment::from_string(j.at("solution").get<std::string>());
    r.key = key_from_json(j.at("shuffle_key"));
    r.profile = profile_from_json(j.at("profile"));
    r.trace = trace_from_json(j.at("trace"));
    const auto status = j.at("status").get<std::string>();
    if (status == "ok") {
      r.status = RunStatus::kOk;
    } else if (status == "parse_failure") {
      r.status = RunStatus::kParseFailure;
    } else if (status == "transport_failure") {
      r.status = RunStatus::kTransportFailure;
    } else {
      throw std::runtime_error("unknown run status '" + status + "'");
    }
    if (const auto& resp = j.at("response"); !resp.is_null()) {
      SubjectResponse s;
      s.solution = resp.at("SOLUTION").get<std::string>();
      s.reason_var = resp.at("REASON").get<int>();
      s.explanation = resp.at("EXPLANATION").get<std::string>();
      s.error_var = resp.at("ERROR").get<int>();
      r.response = std::move(s);
    }
    if (const auto& f = j.at("failure"); !f.is_null()) {
      ParseFailure pf;
      const auto kind = f.at("kind").get<std::string>();
      for (auto k : {ParseFailureKind::kNoObject, ParseFailureKind::kMissingField,
                     ParseFailureKind::kBadField, ParseFailureKind::kMalformedSolution}) {
        if (parse_failure_name(k) == kind) pf.kind = k;
      }
      pf.message = f.at("message").get<std::string>();
      r.failure = std::move(pf);
    }
    if (const auto& v = j.at("validation"); !v.is_null()) {
      r.validation = ValidationReport{v.at("solution_correct").get<bool>(),
                                      v.at("reason_in_range").get<bool>(),
                                      v.at("error_in_range").get<bool>(),
                                      v.at("reason_equals_error").get<bool>()};
    }
    r.backend_json = j.at("backend").dump();
    r.attempts = j.value("attempts", std::size_t{1});
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("malformed run record: ") + ex.what());
  }
}

std::string encode_transcript(const TranscriptEntry& entry) {
  ojson j;
  j["run_id"] = entry.run_id;
  j["transcript"] = entry.transcript;
  return j.dump();
}

TranscriptEntry decode_transcript(std::string_view line) {
  const ojson j = parse_line(line, "transcript");
  try {
    return {j.at("run_id").get<std::string>(), j.at("transcript").get<std::string>()};
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("malformed transcript entry: ") + ex.what());
  }
}

namespace {

template <typename Decode>
auto read_lines(const std::filesystem::path& path, Decode decode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<decltype(decode(std::string_view{}))> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decode(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  return read_lines(path, [](std::string_view l) { return decode_record(l); });
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  return read_lines(path, [](std::string_view l) { return decode_manifest_entry(l); });
}

std::vector<TranscriptEntry> read_transcripts(const std::filesystem::path& path) {
  return read_lines(path, [](std::string_view l) { return decode_transcript(l); });
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace reasonsat
