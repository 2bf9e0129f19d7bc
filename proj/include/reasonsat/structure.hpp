// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reasonsat/cnf.hpp"

namespace reasonsat {

/// A variable whose value is fixed by a structural shortcut.
struct ForcedUnit {
  Var variable = 1;
  bool value = true;
  auto operator<=>(const ForcedUnit&) const = default;
};

/// Two length-2 clauses that clash on one variable and share the other
/// literal, e.g. (x3 OR NOT x4), (x3 OR x4). Clause indices are 0-based and
/// ordered first < second.
struct ResolutionUnit {
  Var variable = 1;
  bool value = true;
  std::size_t first_clause = 0;
  std::size_t second_clause = 0;
  auto operator<=>(const ResolutionUnit&) const = default;
};

struct DegreeTable {
  std::map<Var, std::size_t> degrees;
  std::set<Var> max_degree_vars;
};

struct CriticalityReport {
  bool all_clauses_critical = true;
  std::vector<bool> per_clause;
};

enum class Stratum { kUnit, kResolution, kNeither };

std::string_view stratum_name(Stratum s) noexcept;
/// Accepts "unit", "resolution", "neither" (case-insensitive).
std::optional<Stratum> parse_stratum(std::string_view text) noexcept;

struct StructureProfile {
  std::set<ForcedUnit> unit_clause_vars;
  std::set<ResolutionUnit> resolution_units;
  std::map<Var, std::size_t> degrees;
  std::set<Var> max_degree_vars;
  std::uint64_t solution_count = 0;
  std::optional<Assignment> unique_solution;
  bool all_clauses_critical = false;
  bool all_vars_occur = false;

  std::set<Var> unit_variables() const;
  std::set<Var> resolution_variables() const;

  bool operator==(const StructureProfile&) const = default;
};

std::set<ForcedUnit> find_unit_clauses(const Formula& formula);
std::set<ResolutionUnit> find_resolution_units(const Formula& formula);
DegreeTable influence_degrees(const Formula& formula);
CriticalityReport criticality_check(const Formula& formula);

/// Full profile; runs the exhaustive oracle, so num_vars must be within the
/// oracle limit.
StructureProfile compute_profile(const Formula& formula);

Stratum classify_stratum(const StructureProfile& profile) noexcept;

}  // namespace reasonsat
