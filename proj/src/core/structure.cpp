// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/structure.hpp"

#include <algorithm>
#include <cctype>

namespace reasonsat {

std::string_view stratum_name(Stratum s) noexcept {
  switch (s) {
    case Stratum::kUnit:
      return "unit";
    case Stratum::kResolution:
      return "resolution";
    case Stratum::kNeither:
      return "neither";
  }
  return "neither";
}

std::optional<Stratum> parse_stratum(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "unit") return Stratum::kUnit;
  if (lower == "resolution") return Stratum::kResolution;
  if (lower == "neither") return Stratum::kNeither;
  return std::nullopt;
}

std::set<Var> StructureProfile::unit_variables() const {
  std::set<Var> out;
  for (const auto& u : unit_clause_vars) out.insert(u.variable);
  return out;
}

std::set<Var> StructureProfile::resolution_variables() const {
  std::set<Var> out;
  for (const auto& r : resolution_units) out.insert(r.variable);
  return out;
}

std::set<ForcedUnit> find_unit_clauses(const Formula& formula) {
  std::set<ForcedUnit> out;
  for (const Clause& c : formula.clauses()) {
    if (c.size() == 1) out.insert(ForcedUnit{c[0].variable, c[0].positive});
  }
  return out;
}

namespace {

// Resolvent of two binary clauses is a unit iff they clash on exactly one
// variable and their remaining literals coincide.
std::optional<ForcedUnit> binary_resolvent(const Literal& a0, const Literal& a1,
                                           const Literal& b0, const Literal& b1) {
  const Literal a[2] = {a0, a1};
  const Literal b[2] = {b0, b1};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (a[i].variable == b[j].variable && a[i].positive != b[j].positive &&
          a[1 - i] == b[1 - j]) {
        return ForcedUnit{a[1 - i].variable, a[1 - i].positive};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::set<ResolutionUnit> find_resolution_units(const Formula& formula) {
  std::set<ResolutionUnit> out;
  const auto clauses = formula.clauses();
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (clauses[i].size() != 2) continue;
    for (std::size_t j = i + 1; j < clauses.size(); ++j) {
      if (clauses[j].size() != 2) continue;
      const auto unit = binary_resolvent(clauses[i][0], clauses[i][1], clauses[j][0], clauses[j][1]);
      if (unit) out.insert(ResolutionUnit{unit->variable, unit->value, i, j});
    }
  }
  return out;
}

DegreeTable influence_degrees(const Formula& formula) {
  DegreeTable table;
  for (Var v = 1; v <= formula.num_vars(); ++v) table.degrees[v] = 0;
  for (const Clause& c : formula.clauses()) {
    for (const Literal& lit : c.literals()) ++table.degrees[lit.variable];
  }
  if (formula.num_clauses() == 0) return table;
  std::size_t best = 0;
  for (const auto& [v, d] : table.degrees) best = std::max(best, d);
  for (const auto& [v, d] : table.degrees) {
    if (d == best) table.max_degree_vars.insert(v);
  }
  return table;
}

CriticalityReport criticality_check(const Formula& formula) {
  const std::uint64_t base = count_solutions(formula);
  CriticalityReport report;
  report.per_clause.reserve(formula.num_clauses());
  for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
    const bool critical = count_solutions(formula.without_clause(i), base) > base;
    report.per_clause.push_back(critical);
    report.all_clauses_critical = report.all_clauses_critical && critical;
  }
  return report;
}

StructureProfile compute_profile(const Formula& formula) {
  StructureProfile p;
  p.unit_clause_vars = find_unit_clauses(formula);
  p.resolution_units = find_resolution_units(formula);
  auto degrees = influence_degrees(formula);
  p.degrees = std::move(degrees.degrees);
  p.max_degree_vars = std::move(degrees.max_degree_vars);
  const auto solutions = enumerate_solutions(formula);
  p.solution_count = solutions.size();
  if (solutions.size() == 1) p.unique_solution = solutions.front();
  p.all_clauses_critical = criticality_check(formula).all_clauses_critical;
  p.all_vars_occur = std::all_of(p.degrees.begin(), p.degrees.end(),
                                 [](const auto& entry) { return entry.second > 0; });
  return p;
}

Stratum classify_stratum(const StructureProfile& profile) noexcept {
  if (!profile.unit_clause_vars.empty()) return Stratum::kUnit;
  if (!profile.resolution_units.empty()) return Stratum::kResolution;
  return Stratum::kNeither;
}

}  // namespace reasonsat
