// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/subject.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "reasonsat/rng.hpp"

namespace reasonsat {

std::string_view parse_failure_name(ParseFailureKind kind) noexcept {
  switch (kind) {
    case ParseFailureKind::kNoObject:
      return "no_object";
    case ParseFailureKind::kMissingField:
      return "missing_field";
    case ParseFailureKind::kBadField:
      return "bad_field";
    case ParseFailureKind::kMalformedSolution:
      return "malformed_solution";
  }
  return "no_object";
}

std::string build_prompt(const Formula& formula) {
  std::string prompt = "Here's a SAT formula.\n\n";
  prompt += render_formula(formula);
  prompt +=
      "\n\n"
      "Talk through the finding a solution for this SAT formula.\n\n"
      "Once you think you have a solution, double check it to make sure that it's correct. "
      "If not, keep reasoning to get the answer, and if you get a new one, double check it as "
      "well, and keep double-checking carefully until you think you have the answer. Keep track "
      "of any assumptions that you make that later turn out to be false.\n\n"
      "Then, at the end of your talking, tell me the main reason why this is the solution, "
      "focusing on a single variable. Do not use any python code or outside tools.\n\n"
      "Return, at the end of your response, a JSON object, with four fields. The first field, "
      "SOLUTION, should be a string with only T and F providing the satisfying assignment in "
      "order. The second field, REASON, should be an integer from 1 to ";
  prompt += std::to_string(formula.num_vars());
  prompt +=
      ", giving the name of the variable that is the main reason why this is the solution. The "
      "third field, EXPLANATION, should be a string that contains your explanation why this is a "
      "solution. If you made an assumption that later turned out to be false, the fourth field, "
      "ERROR, should contain the integer name of the variable you made the incorrect assumption "
      "for, and -1 otherwise.";
  return prompt;
}

namespace {

using json = nlohmann::json;

constexpr const char* kFields[] = {"SOLUTION", "REASON", "EXPLANATION", "ERROR"};

// Index one past the '}' closing the object opened at `open`, honoring
// string literals, or npos when the braces never balance.
std::size_t matching_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<int> as_integer(const json& value, bool allow_negative) {
  if (value.is_number_integer()) {
    const auto v = value.get<long long>();
    if (v < -1000000 || v > 1000000) return std::nullopt;
    return static_cast<int>(v);
  }
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (std::floor(d) != d || std::abs(d) > 1e6) return std::nullopt;
    return static_cast<int>(d);
  }
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    const auto first = s.find_first_not_of(" \t\n");
    const auto last = s.find_last_not_of(" \t\n");
    if (first == std::string::npos) return std::nullopt;
    s = s.substr(first, last - first + 1);
    std::size_t i = 0;
    if (allow_negative && s[0] == '-') i = 1;
    if (i == s.size() || s.size() - i > 7) return std::nullopt;
    for (std::size_t k = i; k < s.size(); ++k) {
      if (s[k] < '0' || s[k] > '9') return std::nullopt;
    }
    return std::stoi(s);
  }
  return std::nullopt;
}

}  // namespace

ParsedResponse parse_response(std::string_view text, std::uint32_t num_vars) {
  ParsedResponse out;
  std::optional<json> chosen;
  std::size_t chosen_end = 0;
  std::vector<std::string> partial_keys;
  bool saw_object = false;

  for (std::size_t open = text.find('{'); open != std::string_view::npos;
       open = text.find('{', open + 1)) {
    const std::size_t end = matching_brace(text, open);
    if (end == std::string_view::npos) continue;
    auto candidate = json::parse(text.substr(open, end - open), nullptr, false);
    if (candidate.is_discarded() || !candidate.is_object()) continue;
    saw_object = true;
    const bool complete = std::all_of(std::begin(kFields), std::end(kFields),
                                      [&](const char* k) { return candidate.contains(k); });
    if (complete) {
      if (!chosen || end > chosen_end) {
        chosen = std::move(candidate);
        chosen_end = end;
      }
    } else if (std::any_of(std::begin(kFields), std::end(kFields),
                           [&](const char* k) { return candidate.contains(k); })) {
      partial_keys.clear();
      for (const char* k : kFields) {
        if (!candidate.contains(k)) partial_keys.emplace_back(k);
      }
    }
  }

  auto fail = [&](ParseFailureKind kind, std::string message) {
    out.failure = ParseFailure{kind, std::move(message)};
    return out;
  };

  if (!chosen) {
    if (!partial_keys.empty()) {
      std::string missing;
      for (const auto& k : partial_keys) missing += (missing.empty() ? "" : ", ") + k;
      return fail(ParseFailureKind::kMissingField, "answer object lacks " + missing);
    }
    return fail(ParseFailureKind::kNoObject,
                saw_object ? "no JSON object with the answer fields" : "no JSON object found");
  }

  const json& obj = *chosen;
  SubjectResponse r;
  r.raw_transcript = std::string(text);
  if (!obj["SOLUTION"].is_string()) {
    return fail(ParseFailureKind::kMalformedSolution, "SOLUTION is not a string");
  }
  r.solution = obj["SOLUTION"].get<std::string>();
  const bool good_solution =
      r.solution.size() == num_vars &&
      std::all_of(r.solution.begin(), r.solution.end(), [](char c) { return c == 'T' || c == 'F'; });
  if (!good_solution) {
    return fail(ParseFailureKind::kMalformedSolution,
                "SOLUTION '" + r.solution + "' is not a T/F string of length " +
                    std::to_string(num_vars));
  }
  const auto reason = as_integer(obj["REASON"], false);
  if (!reason) return fail(ParseFailureKind::kBadField, "REASON is not an integer");
  r.reason_var = *reason;
  const auto error = as_integer(obj["ERROR"], true);
  if (!error) return fail(ParseFailureKind::kBadField, "ERROR is not an integer");
  r.error_var = *error;
  if (!obj["EXPLANATION"].is_string()) {
    return fail(ParseFailureKind::kBadField, "EXPLANATION is not a string");
  }
  r.explanation = obj["EXPLANATION"].get<std::string>();
  out.response = std::move(r);
  return out;
}

ValidationReport validate_response(const SubjectResponse& response, const Formula& formula,
                                   const std::vector<Assignment>& oracle_solutions) {
  ValidationReport report;
  const int n = static_cast<int>(formula.num_vars());
  report.solution_correct =
      std::any_of(oracle_solutions.begin(), oracle_solutions.end(),
                  [&](const Assignment& a) { return a.to_string() == response.solution; });
  report.reason_in_range = response.reason_var >= 1 && response.reason_var <= n;
  report.error_in_range =
      response.error_var == -1 || (response.error_var >= 1 && response.error_var <= n);
  report.reason_equals_error = response.reason_var == response.error_var;
  return report;
}

void validate(const ReasonModel& model) {
  const auto finite = [](double x) { return std::isfinite(x); };
  const auto& w = model.weights;
  bool ok = finite(w.is_unit) && finite(w.is_resolution) && finite(w.was_backtracked) &&
            finite(w.is_max_degree) && finite(w.intercept);
  for (const ReasonLogit* row : {&model.planted.unit, &model.planted.resolution, &model.planted.backtrack}) {
    ok = ok && finite(row->intercept) && finite(row->competing_simplification) &&
         finite(row->competing_backtrack) && finite(row->influence);
  }
  if (!ok) throw ContractViolation("reason model coefficients must be finite");
  if (!(model.temperature > 0.0) || !finite(model.temperature)) {
    throw ContractViolation("reason model temperature must be positive");
  }
}

double calibrate_unit_weight(double target, std::uint32_t num_vars, double temperature) {
  if (!(target > 0.0 && target < 1.0) || num_vars < 2) {
    throw ContractViolation("calibration target must lie in (0,1) with at least two variables");
  }
  return temperature * std::log(target * (num_vars - 1) / (1.0 - target));
}

ExplanationModel ExplanationModel::table_pattern() {
  ExplanationModel m;
  m.categories["Causation"] = {-1.10, 0.95, 0.0, 0.0, 0.0};
  m.categories["Simplification"] = {-0.90, 0.60, 0.11, 0.20, -0.92};
  m.categories["Importance"] = {-0.30, -0.46, 0.0, 0.50, -0.57};
  m.categories["Counterfactual"] = {-4.00, -1.50, -0.40, -0.30, 0.80};
  m.categories["Contradiction"] = {-1.27, -0.27, 0.0, 0.0, 0.54};
  return m;
}

ExplanationModel ExplanationModel::uniform(double probability) {
  if (!(probability > 0.0 && probability < 1.0)) {
    throw ContractViolation("injection probability must lie in (0,1)");
  }
  const double logit = std::log(probability / (1.0 - probability));
  ExplanationModel m;
  for (const auto& name : WordLexicon::standard().category_names()) {
    m.categories[name] = {logit, 0.0, 0.0, 0.0, 0.0};
  }
  return m;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

bool intersects(const std::vector<Var>& a, const std::vector<Var>& b) {
  return std::any_of(a.begin(), a.end(),
                     [&](Var v) { return std::find(b.begin(), b.end(), v) != b.end(); });
}

bool contains(const std::vector<Var>& set, Var v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

Var sample_softmax(const RunFeatures& features, const ReasonModel& model, Rng& rng) {
  const auto& w = model.weights;
  std::vector<double> score(features.variables.size());
  for (std::size_t i = 0; i < score.size(); ++i) {
    const auto& f = features.variables[i];
    score[i] = (w.intercept + w.is_unit * f.is_unit + w.is_resolution * f.is_resolution +
                w.was_backtracked * f.was_backtracked + w.is_max_degree * f.is_max_degree) /
               model.temperature;
  }
  const double top = *std::max_element(score.begin(), score.end());
  double total = 0.0;
  for (double& s : score) total += (s = std::exp(s - top));
  double draw = rng.unit() * total;
  for (std::size_t i = 0; i < score.size(); ++i) {
    draw -= score[i];
    if (draw < 0.0) return static_cast<Var>(i + 1);
  }
  return static_cast<Var>(score.size());
}

// Exclusive slots: the unit, resolution and backtrack variables are cited
// with their logistic probabilities in turn; the leftover mass goes to a
// variable outside every implicated set. Marginals are exactly logistic
// whenever the sets are disjoint and the probabilities sum to at most one.
Var sample_planted(std::uint32_t num_vars, const ReasonContext& ctx, const ReasonModel& model,
                   Rng& rng) {
  const auto& p = model.planted;
  const bool has_unit = !ctx.unit_vars.empty();
  const bool has_res = !ctx.resolution_vars.empty();
  const bool has_bt = ctx.backtrack_var.has_value();
  std::vector<Var> bt_set;
  if (has_bt) bt_set.push_back(*ctx.backtrack_var);

  struct Slot {
    const std::vector<Var>* vars;
    double probability;
  };
  std::vector<Slot> slots;
  if (has_unit) {
    const double eta = p.unit.intercept + p.unit.competing_simplification * has_res +
                       p.unit.competing_backtrack * has_bt +
                       p.unit.influence * intersects(ctx.unit_vars, ctx.max_degree_vars);
    slots.push_back({&ctx.unit_vars, sigmoid(eta)});
  }
  if (has_res) {
    const double eta = p.resolution.intercept + p.resolution.competing_simplification * has_unit +
                       p.resolution.competing_backtrack * has_bt +
                       p.resolution.influence * intersects(ctx.resolution_vars, ctx.max_degree_vars);
    slots.push_back({&ctx.resolution_vars, sigmoid(eta)});
  }
  if (has_bt) {
    const double eta = p.backtrack.intercept +
                       p.backtrack.competing_simplification * (has_unit || has_res) +
                       p.backtrack.influence * contains(ctx.max_degree_vars, *ctx.backtrack_var);
    slots.push_back({&bt_set, sigmoid(eta)});
  }

  double draw = rng.unit();
  for (const Slot& slot : slots) {
    if (draw < slot.probability) return (*slot.vars)[rng.below(slot.vars->size())];
    draw -= slot.probability;
  }
  std::vector<Var> rest;
  for (Var v = 1; v <= num_vars; ++v) {
    if (!contains(ctx.unit_vars, v) && !contains(ctx.resolution_vars, v) && !contains(bt_set, v)) {
      rest.push_back(v);
    }
  }
  if (rest.empty()) return static_cast<Var>(1 + rng.below(num_vars));
  return rest[rng.below(rest.size())];
}

const std::vector<std::string>& phrases_for(const std::string& category) {
  static const std::map<std::string, std::vector<std::string>> kPhrases = {
      {"Causation",
       {"This choice forces the remaining values.", "The rest of the formula relies on it.",
        "Its value dictates how the other clauses turn out."}},
      {"Simplification",
       {"Starting from it simplifies the formula.", "With it settled the rest is easier.",
        "That is the key step."}},
      {"Importance",
       {"It is the pivotal variable here.", "This variable is crucial.",
        "It appears in multiple clauses."}},
      {"Counterfactual",
       {"Otherwise the clauses would not all hold.",
        "Had it been set the other way, the clauses could not hold."}},
      {"Contradiction",
       {"Any other value leads to a contradiction.",
        "The alternative is not consistent with the clauses."}},
  };
  static const std::vector<std::string> kNone;
  const auto it = kPhrases.find(category);
  return it == kPhrases.end() ? kNone : it->second;
}

}  // namespace

Var sample_reason(const RunFeatures& features, const ReasonContext& context,
                  const ReasonModel& model, Rng& rng) {
  if (model.kind == ReasonModel::Kind::kSoftmax) return sample_softmax(features, model, rng);
  return sample_planted(static_cast<std::uint32_t>(features.variables.size()), context, model, rng);
}

SyntheticResult synthetic_respond(const Formula& formula, const StructureProfile& profile,
                                  const Heuristic& heuristic, const ReasonModel& model,
                                  const ExplanationModel& explanations, std::uint64_t seed) {
  SyntheticResult out;
  out.trace = dpll_solve(formula, heuristic);
  if (!out.trace.satisfiable()) {
    throw std::logic_error("solver reported UNSAT on an instance expected to be satisfiable");
  }
  const RunFeatures features = extract_run_features(formula, profile, out.trace);

  ReasonContext ctx;
  for (const auto& u : profile.unit_clause_vars) ctx.unit_vars.push_back(u.variable);
  for (Var v : profile.resolution_variables()) ctx.resolution_vars.push_back(v);
  ctx.backtrack_var = out.trace.first_backtracked();
  ctx.max_degree_vars.assign(profile.max_degree_vars.begin(), profile.max_degree_vars.end());
  std::sort(ctx.unit_vars.begin(), ctx.unit_vars.end());
  ctx.unit_vars.erase(std::unique(ctx.unit_vars.begin(), ctx.unit_vars.end()), ctx.unit_vars.end());

  Rng rng(derive_seed(seed, "subject"));
  const Var reason = sample_reason(features, ctx, model, rng);

  SubjectResponse& r = out.response;
  r.solution = out.trace.final_assignment->to_string();
  r.reason_var = static_cast<int>(reason);
  r.error_var = ctx.backtrack_var ? static_cast<int>(*ctx.backtrack_var) : -1;

  const auto& f = features.of(reason);
  const bool cited_backtracked = ctx.backtrack_var && *ctx.backtrack_var == reason;
  std::string text = "Setting x" + std::to_string(reason) + " to " +
                     (out.trace.final_assignment->value(reason) ? "true" : "false") +
                     " is the main reason for the assignment " + r.solution + ".";
  Rng words(derive_seed(seed, "explanation"));
  for (const auto& [category, c] : explanations.categories) {
    const double eta = c.intercept + c.is_unit * f.is_unit + c.is_resolution * f.is_resolution +
                       c.is_max_degree * f.is_max_degree + c.was_backtracked * cited_backtracked;
    const bool inject = words.bernoulli(sigmoid(eta));
    const auto& phrases = phrases_for(category);
    const std::size_t pick = words.below(phrases.empty() ? 1 : phrases.size());
    if (inject && !phrases.empty()) text += " " + phrases[pick];
  }
  r.explanation = std::move(text);
  nlohmann::ordered_json answer = {{"SOLUTION", r.solution},
                                   {"REASON", r.reason_var},
                                   {"EXPLANATION", r.explanation},
                                   {"ERROR", r.error_var}};
  r.raw_transcript = "Synthetic subject: solved with " + std::to_string(out.trace.decisions) +
                     " decisions and " + std::to_string(out.trace.conflicts) + " conflicts.\n" +
                     answer.dump();
  return out;
}

}  // namespace reasonsat
