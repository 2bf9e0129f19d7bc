// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

namespace reasonsat {

using ojson = nlohmann::ordered_json;

std::string_view backend_kind_name(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::kSynthetic:
      return "synthetic";
    case BackendKind::kLlm:
      return "llm";
    case BackendKind::kReplay:
      return "replay";
  }
  return "synthetic";
}

std::string_view branch_rule_name(BranchRule r) noexcept {
  switch (r) {
    case BranchRule::kRandom:
      return "random";
    case BranchRule::kMaxDegree:
      return "max-degree";
    case BranchRule::kFixedOrder:
      return "fixed-order";
  }
  return "random";
}

std::optional<BranchRule> parse_branch_rule(std::string_view text) noexcept {
  if (text == "random") return BranchRule::kRandom;
  if (text == "max-degree" || text == "max_degree") return BranchRule::kMaxDegree;
  if (text == "fixed-order" || text == "fixed_order") return BranchRule::kFixedOrder;
  return std::nullopt;
}

std::string_view polarity_rule_name(PolarityRule r) noexcept {
  return r == PolarityRule::kTrueFirst ? "true-first" : "random";
}

std::optional<PolarityRule> parse_polarity_rule(std::string_view text) noexcept {
  if (text == "random") return PolarityRule::kRandom;
  if (text == "true-first" || text == "true_first") return PolarityRule::kTrueFirst;
  return std::nullopt;
}

PlantedReasons default_planted_reasons() {
  // Intercepts are chosen so the exclusive citation slots almost never
  // overflow.
  PlantedReasons p;
  p.unit = {-0.30, -0.49, -0.65, 1.39};
  p.resolution = {-1.20, -1.04, -0.21, 1.41};
  p.backtrack = {-1.70, -0.25, 0.0, 1.46};
  return p;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  for (Stratum s : {Stratum::kUnit, Stratum::kResolution, Stratum::kNeither}) {
    GenSpec spec;
    spec.stratum = s;
    c.strata.push_back(spec);
  }
  c.heuristic.branching = BranchRule::kRandom;
  c.heuristic.polarity = PolarityRule::kRandom;
  c.heuristic.unit_propagation = true;
  c.heuristic.resolution_preprocessing = true;
  c.backend.model.kind = ReasonModel::Kind::kPlanted;
  c.backend.model.planted = default_planted_reasons();
  return c;
}

namespace {

// Walks a JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  template <typename F>
  void field(const std::string& key, F&& apply) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      apply(j_.at(key), path_.empty() ? key : path_ + "." + key);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + (path_.empty() ? key : path_ + "." + key) +
                        "': " + e.what());
    }
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError("unknown config key '" + (path_.empty() ? "" : path_ + ".") + item.key() + "'");
      }
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "config key '" + path_ + "'"; }
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T>
void get_to(const nlohmann::json& j, T& out) {
  out = j.get<T>();
}

void read_number(const nlohmann::json& j, const std::string& path, double& out) {
  if (!j.is_number()) throw ConfigError("config key '" + path + "' must be a number");
  out = j.get<double>();
}

IntRange read_range(const nlohmann::json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint32_t>();
    return {v, v};
  }
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError("config key '" + path + "' must be [lo, hi] or a single integer");
  }
  return {j.at(0).get<std::uint32_t>(), j.at(1).get<std::uint32_t>()};
}

void read_heuristic(const nlohmann::json& j, const std::string& path, Heuristic& h) {
  Reader r(j, path);
  r.field("branching", [&](const nlohmann::json& v, const std::string& p) {
    const auto rule = parse_branch_rule(v.get<std::string>());
    if (!rule) throw ConfigError("config key '" + p + "': expected random, max-degree or fixed-order");
    h.branching = *rule;
  });
  r.field("polarity", [&](const nlohmann::json& v, const std::string& p) {
    const auto rule = parse_polarity_rule(v.get<std::string>());
    if (!rule) throw ConfigError("config key '" + p + "': expected random or true-first");
    h.polarity = *rule;
  });
  r.field("fixed_order", [&](const nlohmann::json& v, const std::string&) { get_to(v, h.fixed_order); });
  r.field("unit_propagation", [&](const nlohmann::json& v, const std::string&) { get_to(v, h.unit_propagation); });
  r.field("resolution_preprocessing",
          [&](const nlohmann::json& v, const std::string&) { get_to(v, h.resolution_preprocessing); });
  r.field("seed", [&](const nlohmann::json& v, const std::string&) { get_to(v, h.seed); });
  r.finish();
}

void read_logit(const nlohmann::json& j, const std::string& path, ReasonLogit& l) {
  Reader r(j, path);
  r.field("intercept", [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.intercept); });
  r.field("competing_simplification",
          [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.competing_simplification); });
  r.field("competing_backtrack",
          [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.competing_backtrack); });
  r.field("influence", [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.influence); });
  r.finish();
}

void read_synthetic(const nlohmann::json& j, const std::string& path, BackendConfig& b) {
  Reader r(j, path);
  r.field("model", [&](const nlohmann::json& v, const std::string& p) {
    const auto s = v.get<std::string>();
    if (s == "softmax") {
      b.model.kind = ReasonModel::Kind::kSoftmax;
    } else if (s == "planted") {
      b.model.kind = ReasonModel::Kind::kPlanted;
    } else {
      throw ConfigError("config key '" + p + "': expected softmax or planted");
    }
  });
  r.field("temperature", [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, b.model.temperature); });
  r.field("softmax", [&](const nlohmann::json& v, const std::string& p) {
    auto& w = b.model.weights;
    Reader s(v, p);
    s.field("is_unit", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, w.is_unit); });
    s.field("is_resolution", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, w.is_resolution); });
    s.field("was_backtracked", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, w.was_backtracked); });
    s.field("is_max_degree", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, w.is_max_degree); });
    s.field("intercept", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, w.intercept); });
    s.finish();
  });
  r.field("planted", [&](const nlohmann::json& v, const std::string& p) {
    Reader s(v, p);
    s.field("unit", [&](const nlohmann::json& x, const std::string& q) { read_logit(x, q, b.model.planted.unit); });
    s.field("resolution", [&](const nlohmann::json& x, const std::string& q) { read_logit(x, q, b.model.planted.resolution); });
    s.field("backtrack", [&](const nlohmann::json& x, const std::string& q) { read_logit(x, q, b.model.planted.backtrack); });
    s.finish();
  });
  r.field("explanations", [&](const nlohmann::json& v, const std::string& p) {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s != "table") throw ConfigError("config key '" + p + "': expected \"table\" or an object");
      b.explanations = ExplanationModel::table_pattern();
      return;
    }
    ExplanationModel m;
    for (const auto& item : v.items()) {
      CategoryInjection c;
      Reader s(item.value(), p + "." + item.key());
      s.field("intercept", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, c.intercept); });
      s.field("is_unit", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, c.is_unit); });
      s.field("is_resolution", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, c.is_resolution); });
      s.field("is_max_degree", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, c.is_max_degree); });
      s.field("was_backtracked", [&](const nlohmann::json& x, const std::string& q) { read_number(x, q, c.was_backtracked); });
      s.finish();
      m.categories[item.key()] = c;
    }
    b.explanations = std::move(m);
  });
  r.finish();
}

void read_llm(const nlohmann::json& j, const std::string& path, LlmConfig& l) {
  Reader r(j, path);
  r.field("endpoint", [&](const nlohmann::json& v, const std::string&) { get_to(v, l.endpoint); });
  r.field("model", [&](const nlohmann::json& v, const std::string&) { get_to(v, l.model); });
  r.field("api_key_env", [&](const nlohmann::json& v, const std::string&) { get_to(v, l.api_key_env); });
  r.field("temperature", [&](const nlohmann::json& v, const std::string& p) {
    if (v.is_null()) return l.temperature.reset();
    double t = 0;
    read_number(v, p, t);
    l.temperature = t;
  });
  r.field("top_p", [&](const nlohmann::json& v, const std::string& p) {
    if (v.is_null()) return l.top_p.reset();
    double t = 0;
    read_number(v, p, t);
    l.top_p = t;
  });
  r.field("max_tokens", [&](const nlohmann::json& v, const std::string&) {
    if (v.is_null()) return l.max_tokens.reset();
    l.max_tokens = v.get<int>();
  });
  r.field("max_in_flight", [&](const nlohmann::json& v, const std::string&) { get_to(v, l.max_in_flight); });
  r.field("max_retries", [&](const nlohmann::json& v, const std::string&) { get_to(v, l.max_retries); });
  r.field("backoff_initial_s", [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.backoff_initial_s); });
  r.field("backoff_max_s", [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.backoff_max_s); });
  r.field("timeout_s", [&](const nlohmann::json& v, const std::string& p) { read_number(v, p, l.timeout_s); });
  r.field("api_key", [&](const nlohmann::json&, const std::string& p) {
    throw ConfigError("config key '" + p + "' is not allowed: credentials come only from the environment "
                      "variable named by llm.api_key_env");
  });
  r.finish();
}

void read_config(const nlohmann::json& j, ExperimentConfig& c) {
  Reader r(j, "");
  r.field("seed", [&](const nlohmann::json& v, const std::string&) { get_to(v, c.seed); });
  r.field("battery", [&](const nlohmann::json& v, const std::string& p) {
    Reader b(v, p);
    b.field("per_stratum", [&](const nlohmann::json& x, const std::string&) { get_to(x, c.per_stratum); });
    b.field("shuffles", [&](const nlohmann::json& x, const std::string&) { get_to(x, c.shuffles); });
    b.finish();
  });
  r.field("strata", [&](const nlohmann::json& v, const std::string& p) {
    if (!v.is_array()) throw ConfigError("config key '" + p + "' must be an array");
    c.strata.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string q = p + "[" + std::to_string(i) + "]";
      GenSpec spec;
      if (v[i].is_string()) {
        const auto s = parse_stratum(v[i].get<std::string>());
        if (!s) throw ConfigError("config key '" + q + "': unknown stratum");
        spec.stratum = *s;
        c.strata.push_back(spec);
        continue;
      }
      Reader s(v[i], q);
      s.field("stratum", [&](const nlohmann::json& x, const std::string& k) {
        const auto st = parse_stratum(x.get<std::string>());
        if (!st) throw ConfigError("config key '" + k + "': expected unit, resolution or neither");
        spec.stratum = *st;
      });
      s.field("num_vars", [&](const nlohmann::json& x, const std::string&) { get_to(x, spec.num_vars); });
      s.field("num_clauses", [&](const nlohmann::json& x, const std::string& k) { spec.num_clauses = read_range(x, k); });
      s.field("clause_length", [&](const nlohmann::json& x, const std::string& k) { spec.clause_length = read_range(x, k); });
      s.field("max_attempts", [&](const nlohmann::json& x, const std::string&) { get_to(x, spec.max_attempts); });
      s.finish();
      c.strata.push_back(spec);
    }
  });
  r.field("heuristic", [&](const nlohmann::json& v, const std::string& p) { read_heuristic(v, p, c.heuristic); });
  r.field("backend", [&](const nlohmann::json& v, const std::string& p) {
    Reader b(v, p);
    b.field("kind", [&](const nlohmann::json& x, const std::string& k) {
      const auto s = x.get<std::string>();
      if (s == "synthetic") {
        c.backend.kind = BackendKind::kSynthetic;
      } else if (s == "llm") {
        c.backend.kind = BackendKind::kLlm;
      } else if (s == "replay") {
        c.backend.kind = BackendKind::kReplay;
      } else {
        throw ConfigError("config key '" + k + "': expected synthetic, llm or replay");
      }
    });
    b.field("synthetic", [&](const nlohmann::json& x, const std::string& k) { read_synthetic(x, k, c.backend); });
    b.field("llm", [&](const nlohmann::json& x, const std::string& k) { read_llm(x, k, c.backend.llm); });
    b.field("replay", [&](const nlohmann::json& x, const std::string& k) {
      Reader rr(x, k);
      rr.field("path", [&](const nlohmann::json& y, const std::string&) { get_to(y, c.backend.replay_path); });
      rr.finish();
    });
    b.finish();
  });
  r.field("analysis", [&](const nlohmann::json& v, const std::string& p) {
    Reader a(v, p);
    a.field("filter", [&](const nlohmann::json& x, const std::string& k) {
      const auto f = parse_validity_filter(x.get<std::string>());
      if (!f) throw ConfigError("config key '" + k + "': expected parseable or correct-only");
      c.analysis.filter = *f;
    });
    a.field("backtrack_source", [&](const nlohmann::json& x, const std::string& k) {
      const auto s = parse_backtrack_source(x.get<std::string>());
      if (!s) throw ConfigError("config key '" + k + "': expected response or trace");
      c.analysis.backtrack = *s;
    });
    a.field("nd_threshold", [&](const nlohmann::json& x, const std::string& k) { read_number(x, k, c.analysis.nd_threshold); });
    a.field("per_stratum", [&](const nlohmann::json& x, const std::string&) { get_to(x, c.analysis.per_stratum); });
    a.finish();
  });
  r.field("output_dir", [&](const nlohmann::json& v, const std::string&) { get_to(v, c.output_dir); });
  r.field("jobs", [&](const nlohmann::json& v, const std::string&) { get_to(v, c.jobs); });
  r.field("max_runs", [&](const nlohmann::json& v, const std::string&) { get_to(v, c.max_runs); });
  r.finish();
}

ojson heuristic_json(const Heuristic& h) {
  return {{"branching", branch_rule_name(h.branching)},
          {"polarity", polarity_rule_name(h.polarity)},
          {"fixed_order", h.fixed_order},
          {"unit_propagation", h.unit_propagation},
          {"resolution_preprocessing", h.resolution_preprocessing},
          {"seed", h.seed}};
}

ojson logit_json(const ReasonLogit& l) {
  return {{"intercept", l.intercept},
          {"competing_simplification", l.competing_simplification},
          {"competing_backtrack", l.competing_backtrack},
          {"influence", l.influence}};
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

}  // namespace

ExperimentConfig merge_config_json(ExperimentConfig base, std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  read_config(j, base);
  validate(base);
  return base;
}

ExperimentConfig config_from_json(std::string_view text) {
  return merge_config_json(default_config(), text);
}

std::string config_to_json(const ExperimentConfig& c) {
  ojson j;
  j["seed"] = c.seed;
  j["battery"] = {{"per_stratum", c.per_stratum}, {"shuffles", c.shuffles}};
  j["strata"] = ojson::array();
  for (const auto& s : c.strata) {
    j["strata"].push_back({{"stratum", stratum_name(s.stratum)},
                           {"num_vars", s.num_vars},
                           {"num_clauses", {s.num_clauses.lo, s.num_clauses.hi}},
                           {"clause_length", {s.clause_length.lo, s.clause_length.hi}},
                           {"max_attempts", s.max_attempts}});
  }
  j["heuristic"] = heuristic_json(c.heuristic);

  ojson backend;
  backend["kind"] = backend_kind_name(c.backend.kind);
  const auto& m = c.backend.model;
  ojson synthetic;
  synthetic["model"] = m.kind == ReasonModel::Kind::kSoftmax ? "softmax" : "planted";
  synthetic["temperature"] = m.temperature;
  synthetic["softmax"] = {{"is_unit", m.weights.is_unit},
                          {"is_resolution", m.weights.is_resolution},
                          {"was_backtracked", m.weights.was_backtracked},
                          {"is_max_degree", m.weights.is_max_degree},
                          {"intercept", m.weights.intercept}};
  synthetic["planted"] = {{"unit", logit_json(m.planted.unit)},
                          {"resolution", logit_json(m.planted.resolution)},
                          {"backtrack", logit_json(m.planted.backtrack)}};
  ojson explanations = ojson::object();
  for (const auto& [name, inj] : c.backend.explanations.categories) {
    explanations[name] = {{"intercept", inj.intercept},
                          {"is_unit", inj.is_unit},
                          {"is_resolution", inj.is_resolution},
                          {"is_max_degree", inj.is_max_degree},
                          {"was_backtracked", inj.was_backtracked}};
  }
  synthetic["explanations"] = std::move(explanations);
  backend["synthetic"] = std::move(synthetic);
  const auto& l = c.backend.llm;
  backend["llm"] = {{"endpoint", l.endpoint},
                    {"model", l.model},
                    {"api_key_env", l.api_key_env},
                    {"temperature", optional_number(l.temperature)},
                    {"top_p", optional_number(l.top_p)},
                    {"max_tokens", l.max_tokens ? ojson(*l.max_tokens) : ojson(nullptr)},
                    {"max_in_flight", l.max_in_flight},
                    {"max_retries", l.max_retries},
                    {"backoff_initial_s", l.backoff_initial_s},
                    {"backoff_max_s", l.backoff_max_s},
                    {"timeout_s", l.timeout_s}};
  backend["replay"] = {{"path", c.backend.replay_path}};
  j["backend"] = std::move(backend);
  j["analysis"] = {{"filter", validity_filter_name(c.analysis.filter)},
                   {"backtrack_source", backtrack_source_name(c.analysis.backtrack)},
                   {"nd_threshold", c.analysis.nd_threshold},
                   {"per_stratum", c.analysis.per_stratum}};
  j["output_dir"] = c.output_dir;
  j["jobs"] = c.jobs;
  j["max_runs"] = c.max_runs;
  return j.dump(2) + "\n";
}

void validate(const ExperimentConfig& c) {
  if (c.per_stratum == 0) throw ConfigError("battery.per_stratum must be positive");
  if (c.shuffles == 0) throw ConfigError("battery.shuffles must be positive");
  if (c.strata.empty()) throw ConfigError("strata must not be empty");
  std::set<Stratum> seen;
  for (const auto& s : c.strata) {
    if (!seen.insert(s.stratum).second) {
      throw ConfigError("stratum '" + std::string(stratum_name(s.stratum)) + "' listed twice");
    }
    try {
      validate(s);
    } catch (const std::exception& e) {
      throw ConfigError("stratum '" + std::string(stratum_name(s.stratum)) + "': " + e.what());
    }
  }
  try {
    validate(c.backend.model);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("backend.synthetic: ") + e.what());
  }
  if (c.heuristic.branching == BranchRule::kFixedOrder) {
    // Checked against each formula's arity when a run starts; here only shape.
    std::vector<Var> sorted = c.heuristic.fixed_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i + 1) throw ConfigError("heuristic.fixed_order must be a permutation of 1..n");
    }
  }
  if (c.jobs == 0) throw ConfigError("jobs must be positive");
  const auto& l = c.backend.llm;
  if (c.backend.kind == BackendKind::kLlm) {
    if (l.endpoint.empty()) throw ConfigError("backend.llm.endpoint must be set");
    if (l.max_in_flight == 0) throw ConfigError("backend.llm.max_in_flight must be positive");
    if (!(l.backoff_initial_s >= 0) || !(l.backoff_max_s >= l.backoff_initial_s)) {
      throw ConfigError("backend.llm backoff bounds must satisfy 0 <= initial <= max");
    }
    if (!(l.timeout_s > 0)) throw ConfigError("backend.llm.timeout_s must be positive");
  }
  if (c.backend.kind == BackendKind::kReplay && c.backend.replay_path.empty()) {
    throw ConfigError("backend.replay.path must be set for the replay backend");
  }
  if (!(c.analysis.nd_threshold >= 0) || !std::isfinite(c.analysis.nd_threshold)) {
    throw ConfigError("analysis.nd_threshold must be a non-negative number");
  }
  if (c.output_dir.empty()) throw ConfigError("output_dir must be set");
}

std::string heuristic_to_json(const Heuristic& h) { return heuristic_json(h).dump(); }

Heuristic heuristic_from_json(std::string_view text) {
  Heuristic h;
  h.unit_propagation = true;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("heuristic is not valid JSON: ") + e.what());
  }
  read_heuristic(j, "heuristic", h);
  return h;
}

}  // namespace reasonsat
