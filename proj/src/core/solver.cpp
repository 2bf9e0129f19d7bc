// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/solver.hpp"

#include <algorithm>

#include "reasonsat/rng.hpp"

namespace reasonsat {

std::string_view event_kind_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kDecide:
      return "DECIDE";
    case EventKind::kPropagateUnit:
      return "PROPAGATE_UNIT";
    case EventKind::kPropagateResolution:
      return "PROPAGATE_RESOLUTION";
    case EventKind::kConflict:
      return "CONFLICT";
    case EventKind::kBacktrack:
      return "BACKTRACK";
  }
  return "DECIDE";
}

std::optional<Var> SolveTrace::first_backtracked() const {
  if (backtracked_vars.empty()) return std::nullopt;
  return backtracked_vars.front();
}

namespace {

constexpr std::int8_t kUnassigned = -1;

enum class ClauseState { kSatisfied, kConflict, kUnit, kOpen };

struct Frame {
  Var var;
  bool value;
  bool flipped;
  std::size_t trail_pos;
  std::size_t level;
};

class Search {
 public:
  Search(const Formula& formula, const Heuristic& heuristic)
      : formula_(formula),
        heuristic_(heuristic),
        rng_(heuristic.seed),
        values_(formula.num_vars() + 1, kUnassigned) {
    if (heuristic_.branching == BranchRule::kFixedOrder) {
      std::vector<Var> sorted = heuristic_.fixed_order;
      std::sort(sorted.begin(), sorted.end());
      bool ok = sorted.size() == formula.num_vars();
      for (std::size_t i = 0; ok && i < sorted.size(); ++i) ok = sorted[i] == i + 1;
      if (!ok) throw ContractViolation("fixed branching order must be a permutation of 1..num_vars");
    }
    if (heuristic_.branching == BranchRule::kMaxDegree) {
      degrees_ = influence_degrees(formula).degrees;
    }
  }

  SolveTrace run() {
    if (auto conflict = level_zero()) {
      log_conflict(*conflict);
      trace_.exhausted = true;
      return finish(false);
    }
    while (true) {
      if (trail_.size() == formula_.num_vars()) return finish(true);
      decide();
      auto conflict = propagate();
      while (conflict) {
        log_conflict(*conflict);
        if (!backtrack()) {
          trace_.exhausted = true;
          return finish(false);
        }
        conflict = propagate();
      }
    }
  }

 private:
  std::size_t level() const noexcept { return frames_.size(); }

  bool literal_true(const Literal& lit) const {
    const auto v = values_[lit.variable];
    return v != kUnassigned && (v == 1) == lit.positive;
  }

  ClauseState state_of(const Clause& c, const Literal** unit) const {
    std::size_t open = 0;
    for (const Literal& lit : c.literals()) {
      const auto v = values_[lit.variable];
      if (v == kUnassigned) {
        ++open;
        *unit = &lit;
      } else if ((v == 1) == lit.positive) {
        return ClauseState::kSatisfied;
      }
    }
    if (open == 0) return ClauseState::kConflict;
    return open == 1 ? ClauseState::kUnit : ClauseState::kOpen;
  }

  void assign(Var v, bool value) {
    values_[v] = value ? 1 : 0;
    trail_.push_back(v);
  }

  void undo_to(std::size_t trail_pos) {
    while (trail_.size() > trail_pos) {
      values_[trail_.back()] = kUnassigned;
      trail_.pop_back();
    }
  }

  // Lowest-index unit clause first, repeated to fixpoint. Without unit
  // propagation this only reports a falsified clause.
  std::optional<std::size_t> propagate() {
    const auto clauses = formula_.clauses();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < clauses.size(); ++i) {
        const Literal* unit = nullptr;
        const ClauseState s = state_of(clauses[i], &unit);
        if (s == ClauseState::kConflict) return i;
        if (s == ClauseState::kUnit && heuristic_.unit_propagation) {
          assign(unit->variable, unit->positive);
          trace_.events.push_back(
              {EventKind::kPropagateUnit, unit->variable, unit->positive, level(), i, {0, 0}});
          changed = true;
          break;
        }
      }
    }
    return std::nullopt;
  }

  // Residual clauses: unsatisfied clauses with their false literals dropped.
  std::optional<ResolutionUnit> residual_resolution() const {
    const auto clauses = formula_.clauses();
    std::vector<std::pair<std::size_t, std::vector<Literal>>> binary;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      std::vector<Literal> open;
      bool satisfied = false;
      for (const Literal& lit : clauses[i].literals()) {
        if (values_[lit.variable] == kUnassigned) {
          open.push_back(lit);
        } else if (literal_true(lit)) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied && open.size() == 2) binary.emplace_back(i, std::move(open));
    }
    for (std::size_t a = 0; a < binary.size(); ++a) {
      for (std::size_t b = a + 1; b < binary.size(); ++b) {
        const auto& x = binary[a].second;
        const auto& y = binary[b].second;
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            if (x[i].variable == y[j].variable && x[i].positive != y[j].positive &&
                x[1 - i] == y[1 - j]) {
              return ResolutionUnit{x[1 - i].variable, x[1 - i].positive, binary[a].first,
                                    binary[b].first};
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  // Level-0 simplification: unit propagation and (optionally) simple
  // resolution on the residual clauses, alternated to a fixpoint.
  std::optional<std::size_t> level_zero() {
    while (true) {
      if (auto conflict = propagate()) return conflict;
      if (!heuristic_.resolution_preprocessing) return std::nullopt;
      const auto unit = residual_resolution();
      if (!unit) return std::nullopt;
      assign(unit->variable, unit->value);
      trace_.events.push_back({EventKind::kPropagateResolution, unit->variable, unit->value, 0, 0,
                               {unit->first_clause, unit->second_clause}});
    }
  }

  Var pick_variable() {
    std::vector<Var> open;
    for (Var v = 1; v <= formula_.num_vars(); ++v) {
      if (values_[v] == kUnassigned) open.push_back(v);
    }
    switch (heuristic_.branching) {
      case BranchRule::kRandom:
        return open[rng_.below(open.size())];
      case BranchRule::kMaxDegree: {
        Var best = open.front();
        for (Var v : open) {
          if (degrees_.at(v) > degrees_.at(best)) best = v;
        }
        return best;
      }
      case BranchRule::kFixedOrder:
        for (Var v : heuristic_.fixed_order) {
          if (values_[v] == kUnassigned) return v;
        }
        break;
    }
    return open.front();
  }

  void decide() {
    const Var v = pick_variable();
    const bool value = heuristic_.polarity == PolarityRule::kTrueFirst ? true : rng_.coin();
    frames_.push_back({v, value, false, trail_.size(), level() + 1});
    assign(v, value);
    ++trace_.decisions;
    trace_.events.push_back({EventKind::kDecide, v, value, level(), 0, {0, 0}});
  }

  void log_conflict(std::size_t clause) {
    ++trace_.conflicts;
    trace_.events.push_back({EventKind::kConflict, 0, false, level(), clause, {0, 0}});
  }

  // Chronological: undo to the most recent unflipped decision and flip it.
  bool backtrack() {
    while (!frames_.empty() && frames_.back().flipped) {
      undo_to(frames_.back().trail_pos);
      frames_.pop_back();
    }
    if (frames_.empty()) return false;
    Frame& f = frames_.back();
    undo_to(f.trail_pos);
    f.flipped = true;
    f.value = !f.value;
    assign(f.var, f.value);
    trace_.events.push_back({EventKind::kBacktrack, f.var, f.value, f.level, 0, {0, 0}});
    auto& flipped = trace_.backtracked_vars;
    if (std::find(flipped.begin(), flipped.end(), f.var) == flipped.end()) flipped.push_back(f.var);
    return true;
  }

  SolveTrace finish(bool sat) {
    if (sat) {
      Assignment a(std::vector<bool>(formula_.num_vars()));
      for (Var v : trail_) {
        a.set(v, values_[v] == 1);
        trace_.deduction_order.emplace_back(v, values_[v] == 1);
      }
      trace_.final_assignment = std::move(a);
    }
    return std::move(trace_);
  }

  const Formula& formula_;
  const Heuristic& heuristic_;
  Rng rng_;
  std::vector<std::int8_t> values_;
  std::vector<Var> trail_;
  std::vector<Frame> frames_;
  std::map<Var, std::size_t> degrees_;
  SolveTrace trace_;
};

}  // namespace

SolveTrace dpll_solve(const Formula& formula, const Heuristic& heuristic) {
  return Search(formula, heuristic).run();
}

RunFeatures extract_run_features(const Formula& formula, const StructureProfile& profile,
                                 const SolveTrace& trace) {
  RunFeatures out;
  out.variables.resize(formula.num_vars());
  for (const auto& u : profile.unit_clause_vars) out.variables.at(u.variable - 1).is_unit = true;
  for (const auto& r : profile.resolution_units) out.variables.at(r.variable - 1).is_resolution = true;
  for (Var v : profile.max_degree_vars) out.variables.at(v - 1).is_max_degree = true;
  for (Var v : trace.backtracked_vars) out.variables.at(v - 1).was_backtracked = true;
  for (std::size_t i = 0; i < trace.deduction_order.size(); ++i) {
    out.variables.at(trace.deduction_order[i].first - 1).deduction_position = i + 1;
  }
  out.any_unit = !profile.unit_clause_vars.empty();
  out.any_resolution = !profile.resolution_units.empty();
  out.any_backtrack = !trace.backtracked_vars.empty();
  return out;
}

}  // namespace reasonsat
