// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

#include <json.hpp>

namespace reasonsat {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool contains(const std::vector<Var>& set, Var v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

bool intersects(const std::vector<Var>& a, const std::vector<Var>& b) {
  return std::any_of(a.begin(), a.end(), [&](Var v) { return contains(b, v); });
}

}  // namespace

std::string_view validity_filter_name(ValidityFilter f) noexcept {
  return f == ValidityFilter::kCorrectOnly ? "correct-only" : "parseable";
}

std::optional<ValidityFilter> parse_validity_filter(std::string_view text) noexcept {
  const std::string t = lower(text);
  if (t == "parseable") return ValidityFilter::kParseable;
  if (t == "correct-only" || t == "correct_only") return ValidityFilter::kCorrectOnly;
  return std::nullopt;
}

std::string_view backtrack_source_name(BacktrackSource s) noexcept {
  return s == BacktrackSource::kTrace ? "trace" : "response";
}

std::optional<BacktrackSource> parse_backtrack_source(std::string_view text) noexcept {
  const std::string t = lower(text);
  if (t == "response") return BacktrackSource::kResponse;
  if (t == "trace") return BacktrackSource::kTrace;
  return std::nullopt;
}

bool Observation::cites(const std::vector<Var>& vars) const noexcept {
  return reason_var >= 1 && contains(vars, static_cast<Var>(reason_var));
}

Observation make_observation(const RunRecord& record, BacktrackSource source) {
  if (!record.response) throw ContractViolation("run " + record.run_id + " has no response");
  Observation o;
  o.run_id = record.run_id;
  o.stratum = record.stratum;
  o.num_vars = record.formula.num_vars();
  o.reason_var = record.response->reason_var;
  o.explanation = record.response->explanation;
  for (const auto& u : record.profile.unit_clause_vars) o.unit_vars.push_back(u.variable);
  std::sort(o.unit_vars.begin(), o.unit_vars.end());
  o.unit_vars.erase(std::unique(o.unit_vars.begin(), o.unit_vars.end()), o.unit_vars.end());
  const auto res = record.profile.resolution_variables();
  o.resolution_vars.assign(res.begin(), res.end());
  o.max_degree_vars.assign(record.profile.max_degree_vars.begin(),
                           record.profile.max_degree_vars.end());
  if (source == BacktrackSource::kTrace) {
    o.backtrack_var = record.trace.first_backtracked();
  } else {
    const int e = record.response->error_var;
    if (e >= 1 && static_cast<std::uint32_t>(e) <= o.num_vars) o.backtrack_var = static_cast<Var>(e);
  }
  return o;
}

std::vector<Observation> observations(const std::vector<RunRecord>& records,
                                      const AnalysisOptions& options) {
  std::vector<Observation> out;
  for (const auto& r : records) {
    if (r.status != RunStatus::kOk || !r.response) continue;
    if (options.filter == ValidityFilter::kCorrectOnly &&
        !(r.validation && r.validation->solution_correct)) {
      continue;
    }
    out.push_back(make_observation(r, options.backtrack));
  }
  std::sort(out.begin(), out.end(),
            [](const Observation& a, const Observation& b) { return a.run_id < b.run_id; });
  return out;
}

std::optional<double> UsageCell::rate() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(cited) / static_cast<double>(total);
}

std::vector<UsageRow> usage_rates(const std::vector<Observation>& obs) {
  UsageRow unit{kUnitClause, {}, {}};
  UsageRow res{kResolution, {}, {}};
  UsageRow bt{kBacktrack, {}, {}};
  const auto tally = [](UsageCell& cell, bool cited) {
    ++cell.total;
    cell.cited += cited;
  };
  for (const auto& o : obs) {
    if (o.has_unit()) {
      const bool cited = o.cites(o.unit_vars);
      tally(unit.possible, cited);
      if (!o.has_resolution() && !o.has_backtrack()) tally(unit.needed, cited);
    }
    if (o.has_resolution()) {
      const bool cited = o.cites(o.resolution_vars);
      tally(res.possible, cited);
      if (!o.has_unit() && !o.has_backtrack()) tally(res.needed, cited);
    }
    if (o.has_backtrack()) {
      const bool cited = o.cites({*o.backtrack_var});
      tally(bt.possible, cited);
      if (!o.has_unit() && !o.has_resolution()) tally(bt.needed, cited);
    }
  }
  return {unit, res, bt};
}

namespace {

FitRow fit_row(std::string label, const std::vector<std::vector<double>>& rows,
               const std::vector<double>& y, const std::vector<std::string>& names,
               const FitOptions& options) {
  FitRow out;
  out.label = std::move(label);
  out.n = rows.size();
  if (rows.empty()) {
    out.note = "no data";
    return out;
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  Eigen::VectorXd outcome(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    outcome[static_cast<Eigen::Index>(i)] = y[i];
  }
  try {
    out.fit = logistic_fit_dropping(x, outcome, names, options);
    std::vector<std::string> dropped;
    for (const auto& c : out.fit->coefficients) {
      if (!c.estimable) dropped.push_back(c.name);
    }
    if (!dropped.empty()) {
      out.note = "inestimable (constant or collinear on this sample):";
      for (const auto& d : dropped) out.note += " " + d + ";";
      out.note.pop_back();
    }
    if (!out.fit->warning.empty()) {
      out.note += (out.note.empty() ? "" : "; ") + out.fit->warning;
    }
  } catch (const std::exception& e) {
    out.fit.reset();
    out.note = e.what();
  }
  return out;
}

}  // namespace

std::vector<FitRow> reason_regressions(const std::vector<Observation>& obs,
                                       const FitOptions& options) {
  std::vector<std::vector<double>> ux, rx, bx;
  std::vector<double> uy, ry, by;
  for (const auto& o : obs) {
    if (o.has_unit()) {
      ux.push_back({1.0, double(o.has_resolution()), double(o.has_backtrack()),
                    double(intersects(o.unit_vars, o.max_degree_vars))});
      uy.push_back(o.cites(o.unit_vars));
    }
    if (o.has_resolution()) {
      rx.push_back({1.0, double(o.has_unit()), double(o.has_backtrack()),
                    double(intersects(o.resolution_vars, o.max_degree_vars))});
      ry.push_back(o.cites(o.resolution_vars));
    }
    if (o.has_backtrack()) {
      bx.push_back({1.0, double(o.has_unit() || o.has_resolution()),
                    double(contains(o.max_degree_vars, *o.backtrack_var))});
      by.push_back(o.cites({*o.backtrack_var}));
    }
  }
  const std::vector<std::string> full = {kIntercept, kCompetingSimplification, kCompetingBacktrack,
                                         kInfluence};
  const std::vector<std::string> short_names = {kIntercept, kCompetingSimplification, kInfluence};
  return {fit_row(kUnitClause, ux, uy, full, options), fit_row(kResolution, rx, ry, full, options),
          fit_row(kBacktrack, bx, by, short_names, options)};
}

std::optional<double> LanguageRow::baseline() const {
  if (row.n == 0) return std::nullopt;
  return static_cast<double>(present) / static_cast<double>(row.n);
}

std::vector<LanguageRow> language_regressions(const std::vector<Observation>& obs,
                                              const WordLexicon& lexicon,
                                              const FitOptions& options) {
  std::vector<std::set<std::string>> tags;
  tags.reserve(obs.size());
  std::vector<std::vector<double>> x;
  x.reserve(obs.size());
  for (const auto& o : obs) {
    const auto t = tag_text(o.explanation, lexicon);
    tags.emplace_back(t.begin(), t.end());
    const Var cited = o.reason_var >= 1 ? static_cast<Var>(o.reason_var) : 0;
    x.push_back({1.0, double(contains(o.unit_vars, cited)), double(contains(o.resolution_vars, cited)),
                 double(contains(o.max_degree_vars, cited)),
                 double(o.backtrack_var && *o.backtrack_var == cited)});
  }
  const std::vector<std::string> names = {kIntercept, kUnitClause, kResolution, kInfluence, kBacktrack};
  std::vector<LanguageRow> out;
  for (const auto& category : lexicon.category_names()) {
    std::vector<double> y(obs.size());
    std::size_t present = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      y[i] = tags[i].count(category) ? 1.0 : 0.0;
      present += tags[i].count(category);
    }
    LanguageRow row;
    row.row = fit_row(category, x, y, names, options);
    row.present = present;
    out.push_back(std::move(row));
  }
  return out;
}

AnalysisReport analyze(const std::vector<RunRecord>& records, const AnalysisOptions& options,
                       const WordLexicon& lexicon) {
  AnalysisReport report;
  report.options = options;
  report.total_records = records.size();
  const auto obs = observations(records, options);
  report.excluded = records.size() - obs.size();

  const auto section = [&](std::string label, const std::vector<Observation>& subset) {
    ReportSection s;
    s.label = std::move(label);
    s.n = subset.size();
    s.usage = usage_rates(subset);
    s.reasons = reason_regressions(subset);
    s.language = language_regressions(subset, lexicon);
    return s;
  };
  report.sections.push_back(section("pooled", obs));
  if (options.per_stratum) {
    for (Stratum st : {Stratum::kUnit, Stratum::kResolution, Stratum::kNeither}) {
      std::vector<Observation> subset;
      for (const auto& o : obs) {
        if (o.stratum == st) subset.push_back(o);
      }
      report.sections.push_back(section(std::string(stratum_name(st)), subset));
    }
  }
  return report;
}

std::string significance_stars(double p) {
  if (!(p == p)) return "";
  if (p < 1e-3) return "***";
  if (p < 1e-2) return "**";
  if (p < 0.05) return "*";
  return "";
}

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Shortest text that reads back as the same double.
std::string full(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string percent(const UsageCell& c) {
  const auto r = c.rate();
  if (!r) return "undefined (0/0)";
  return fmt("%.1f%%", *r * 100.0) + " (" + std::to_string(c.cited) + "/" + std::to_string(c.total) + ")";
}

std::string coef_cell(const FitRow& row, const std::string& term, double nd_threshold) {
  if (!row.fit) return row.n == 0 ? "no data" : "failed";
  const Coefficient* c = row.fit->find(term);
  if (!c) return "---";
  if (!c->estimable || !(std::abs(c->z) >= nd_threshold)) return "(n.d.)";
  return fmt("%+.2f", c->estimate) + "±" + fmt("%.2f", c->std_error) + significance_stars(c->p_value);
}

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char ch : s) w += (ch & 0xC0) != 0x80;
  return w;
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    if (widths.size() < r.size()) widths.resize(r.size(), 0);
    for (std::size_t j = 0; j < r.size(); ++j) widths[j] = std::max(widths[j], display_width(r[j]));
  }
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j) line += " | ";
      line += rows[i][j];
      if (j + 1 < rows[i].size()) line.append(widths[j] - display_width(rows[i][j]), ' ');
    }
    out += line + "\n";
    if (i == 0) {
      std::string rule;
      for (std::size_t j = 0; j < widths.size(); ++j) {
        if (j) rule += "-+-";
        rule.append(widths[j], '-');
      }
      out += rule + "\n";
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\n";
}

std::string opt(const std::optional<double>& v) { return v ? full(*v) : ""; }

nlohmann::ordered_json number(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json fit_json(const FitRow& row) {
  nlohmann::ordered_json j;
  j["label"] = row.label;
  j["n"] = row.n;
  j["note"] = row.note;
  if (!row.fit) {
    j["fit"] = nullptr;
    return j;
  }
  nlohmann::ordered_json f;
  f["converged"] = row.fit->converged;
  f["separation"] = row.fit->separation;
  f["iterations"] = row.fit->iterations;
  f["log_likelihood"] = number(row.fit->log_likelihood);
  nlohmann::ordered_json coefs = nlohmann::ordered_json::array();
  for (const auto& c : row.fit->coefficients) {
    coefs.push_back({{"term", c.name},
                     {"estimable", c.estimable},
                     {"estimate", number(c.estimate)},
                     {"std_error", number(c.std_error)},
                     {"z", number(c.z)},
                     {"p_value", number(c.p_value)}});
  }
  f["coefficients"] = std::move(coefs);
  j["fit"] = std::move(f);
  return j;
}

void coefficient_csv(std::string& out, const std::vector<std::string>& prefix, const FitRow& row) {
  if (!row.fit) {
    auto fields = prefix;
    fields.insert(fields.end(), {"", "", "", "", "", "", "", "", "", row.note});
    out += csv_line(fields);
    return;
  }
  for (const auto& c : row.fit->coefficients) {
    auto fields = prefix;
    fields.insert(fields.end(),
                  {c.name, full(c.estimate), full(c.std_error), full(c.z), full(c.p_value),
                   c.estimable ? "true" : "false", significance_stars(c.p_value),
                   row.fit->converged ? "true" : "false", row.fit->separation ? "true" : "false",
                   row.note});
    out += csv_line(fields);
  }
}

}  // namespace

RenderedReport render_report(const AnalysisReport& report) {
  RenderedReport out;
  const auto& o = report.options;
  const std::size_t included = report.total_records - report.excluded;

  std::string& t = out.text;
  t += "reasonsat analysis report\n";
  t += "validity filter: " + std::string(validity_filter_name(o.filter)) +
       (o.filter == ValidityFilter::kParseable ? " (runs with a parseable response)\n"
                                               : " (runs whose SOLUTION is correct)\n");
  t += "backtrack source: " + std::string(backtrack_source_name(o.backtrack)) + "\n";
  t += "n.d. rule: inestimable or |z| < " + fmt("%.2f", o.nd_threshold) + "\n";
  t += "stars: *** p<1e-3, ** p<1e-2, * p<0.05\n";
  t += "records: " + std::to_string(report.total_records) + " read, " +
       std::to_string(report.excluded) + " excluded, N = " + std::to_string(included) + "\n";

  out.usage_csv = csv_line({"section", "reason", "possible_cited", "possible_total", "possible_rate",
                            "needed_cited", "needed_total", "needed_rate"});
  const std::vector<std::string> coef_header = {"term",   "estimate",  "std_error",  "z",
                                                "p_value", "estimable", "stars",
                                                "converged", "separation", "note"};
  {
    std::vector<std::string> h = {"section", "reason", "n"};
    h.insert(h.end(), coef_header.begin(), coef_header.end());
    out.reasons_csv = csv_line(h);
  }
  {
    std::vector<std::string> h = {"section", "category", "n", "present", "baseline"};
    h.insert(h.end(), coef_header.begin(), coef_header.end());
    out.language_csv = csv_line(h);
  }

  nlohmann::ordered_json results;
  results["options"] = {{"validity_filter", validity_filter_name(o.filter)},
                        {"backtrack_source", backtrack_source_name(o.backtrack)},
                        {"nd_threshold", o.nd_threshold},
                        {"per_stratum", o.per_stratum}};
  results["total_records"] = report.total_records;
  results["excluded"] = report.excluded;
  results["sections"] = nlohmann::ordered_json::array();

  for (const auto& s : report.sections) {
    t += "\n== " + s.label + " (N = " + std::to_string(s.n) + ") ==\n\n";
    if (s.n == 0) {
      t += "no data\n";
    }
    t += "Reasons why\n";
    std::vector<std::vector<std::string>> rows = {{"Reason", "Used When Possible?",
                                                   "Used When Needed?", kCompetingSimplification,
                                                   kCompetingBacktrack, kInfluence}};
    for (std::size_t i = 0; i < s.usage.size(); ++i) {
      const auto& u = s.usage[i];
      const auto& r = s.reasons[i];
      rows.push_back({u.reason, percent(u.possible), percent(u.needed),
                      coef_cell(r, kCompetingSimplification, o.nd_threshold),
                      coef_cell(r, kCompetingBacktrack, o.nd_threshold),
                      coef_cell(r, kInfluence, o.nd_threshold)});
      out.usage_csv += csv_line({s.label, u.reason, std::to_string(u.possible.cited),
                                 std::to_string(u.possible.total), opt(u.possible.rate()),
                                 std::to_string(u.needed.cited), std::to_string(u.needed.total),
                                 opt(u.needed.rate())});
      coefficient_csv(out.reasons_csv, {s.label, r.label, std::to_string(r.n)}, r);
    }
    t += table(rows);

    t += "\nFit details\n";
    std::vector<std::vector<std::string>> details = {{"Reason", "N", "Intercept", "Note"}};
    for (const auto& r : s.reasons) {
      details.push_back({r.label, std::to_string(r.n), r.fit ? coef_cell(r, kIntercept, 0.0) : "---",
                         r.note.empty() ? "-" : r.note});
    }
    t += table(details);

    t += "\nLanguage\n";
    std::vector<std::vector<std::string>> lang = {{"Language", "Baseline Frequency", kUnitClause,
                                                   kResolution, kInfluence, kBacktrack}};
    for (const auto& l : s.language) {
      const auto b = l.baseline();
      lang.push_back({l.row.label, b ? fmt("%.1f%%", *b * 100.0) : "no data",
                      coef_cell(l.row, kUnitClause, o.nd_threshold),
                      coef_cell(l.row, kResolution, o.nd_threshold),
                      coef_cell(l.row, kInfluence, o.nd_threshold),
                      coef_cell(l.row, kBacktrack, o.nd_threshold)});
      coefficient_csv(out.language_csv,
                      {s.label, l.row.label, std::to_string(l.row.n), std::to_string(l.present),
                       opt(b)},
                      l.row);
    }
    t += table(lang);
    bool any_note = false;
    for (const auto& l : s.language) {
      if (l.row.note.empty()) continue;
      if (!any_note) t += "\nLanguage fit notes\n";
      any_note = true;
      t += "  " + l.row.label + ": " + l.row.note + "\n";
    }

    nlohmann::ordered_json js;
    js["label"] = s.label;
    js["n"] = s.n;
    js["usage"] = nlohmann::ordered_json::array();
    for (const auto& u : s.usage) {
      const auto cell = [](const UsageCell& c) {
        return nlohmann::ordered_json{{"cited", c.cited},
                                      {"total", c.total},
                                      {"rate", c.rate() ? nlohmann::ordered_json(*c.rate())
                                                        : nlohmann::ordered_json(nullptr)}};
      };
      js["usage"].push_back({{"reason", u.reason}, {"possible", cell(u.possible)}, {"needed", cell(u.needed)}});
    }
    js["reasons"] = nlohmann::ordered_json::array();
    for (const auto& r : s.reasons) js["reasons"].push_back(fit_json(r));
    js["language"] = nlohmann::ordered_json::array();
    for (const auto& l : s.language) {
      auto j = fit_json(l.row);
      j["present"] = l.present;
      j["baseline"] = l.baseline() ? nlohmann::ordered_json(*l.baseline()) : nlohmann::ordered_json(nullptr);
      js["language"].push_back(std::move(j));
    }
    results["sections"].push_back(std::move(js));
  }
  out.results_json = results.dump(2) + "\n";
  return out;
}

void export_report(const AnalysisReport& report, const std::filesystem::path& dir) {
  const RenderedReport r = render_report(report);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "report.txt", r.text);
  write_file_atomic(dir / "usage.csv", r.usage_csv);
  write_file_atomic(dir / "reasons.csv", r.reasons_csv);
  write_file_atomic(dir / "language.csv", r.language_csv);
  write_file_atomic(dir / "results.json", r.results_json);
}

}  // namespace reasonsat
