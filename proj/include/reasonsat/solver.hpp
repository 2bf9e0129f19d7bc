// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reasonsat/cnf.hpp"
#include "reasonsat/structure.hpp"

namespace reasonsat {

enum class BranchRule { kRandom, kMaxDegree, kFixedOrder };
enum class PolarityRule { kRandom, kTrueFirst };

struct Heuristic {
  BranchRule branching = BranchRule::kRandom;
  PolarityRule polarity = PolarityRule::kRandom;
  /// Used when branching == kFixedOrder; must be a permutation of 1..n.
  std::vector<Var> fixed_order;
  bool unit_propagation = true;
  bool resolution_preprocessing = false;
  std::uint64_t seed = 0;
};

enum class EventKind { kDecide, kPropagateUnit, kPropagateResolution, kConflict, kBacktrack };

std::string_view event_kind_name(EventKind kind) noexcept;

/// One solver step. Fields that do not apply to a kind are left at zero:
/// `clause` is the source clause for kPropagateUnit and the violated clause
/// for kConflict; `clause_pair` is set for kPropagateResolution. For
/// kBacktrack, `value` is the new (flipped) value and `level` the level the
/// flipped decision lives on. Clause indices are 0-based.
struct TraceEvent {
  EventKind kind = EventKind::kDecide;
  Var variable = 0;
  bool value = false;
  std::size_t level = 0;
  std::size_t clause = 0;
  std::pair<std::size_t, std::size_t> clause_pair{0, 0};

  bool operator==(const TraceEvent&) const = default;
};

struct SolveTrace {
  std::vector<TraceEvent> events;
  std::optional<Assignment> final_assignment;
  bool exhausted = false;
  std::size_t decisions = 0;
  std::size_t conflicts = 0;
  /// Variables flipped at least once, in first-flip order.
  std::vector<Var> backtracked_vars;
  /// Surviving assignments in the order they were made (var, value).
  std::vector<std::pair<Var, bool>> deduction_order;

  bool satisfiable() const noexcept { return final_assignment.has_value(); }
  /// The earliest wrong assumption, or nullopt when the search never flipped.
  std::optional<Var> first_backtracked() const;
};

/// Chronological-backtracking DPLL that logs every step.
SolveTrace dpll_solve(const Formula& formula, const Heuristic& heuristic);

struct VariableFeatures {
  bool is_unit = false;
  bool is_resolution = false;
  bool is_max_degree = false;
  bool was_backtracked = false;
  /// 1-based position in the deduction order, 0 if never assigned.
  std::size_t deduction_position = 0;
};

struct RunFeatures {
  /// Indexed by variable - 1.
  std::vector<VariableFeatures> variables;
  bool any_unit = false;
  bool any_resolution = false;
  bool any_backtrack = false;

  const VariableFeatures& of(Var v) const { return variables.at(v - 1); }
};

RunFeatures extract_run_features(const Formula& formula, const StructureProfile& profile,
                                 const SolveTrace& trace);

}  // namespace reasonsat
