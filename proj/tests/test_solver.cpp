// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "reasonsat/solver.hpp"
#include "support.hpp"

using namespace reasonsat;

namespace {

std::vector<std::pair<Var, bool>> pairs(std::initializer_list<std::pair<Var, bool>> l) { return l; }

// Replays the event log with its own trail and checks it against the
// documented semantics.
void check_well_formed(const Formula& f, const Heuristic& h, const SolveTrace& t) {
  std::vector<int> values(f.num_vars() + 1, -1);
  std::vector<Var> trail;
  struct Frame {
    Var var;
    bool flipped;
    std::size_t trail_pos;
  };
  std::vector<Frame> frames;
  auto undo_to = [&](std::size_t pos) {
    while (trail.size() > pos) {
      values[trail.back()] = -1;
      trail.pop_back();
    }
  };
  auto assign = [&](Var v, bool value) {
    REQUIRE(values[v] == -1);
    values[v] = value;
    trail.push_back(v);
  };
  auto falsified = [&](const Literal& lit) {
    return values[lit.variable] != -1 && static_cast<bool>(values[lit.variable]) != lit.positive;
  };

  std::size_t decisions = 0;
  std::size_t conflicts = 0;
  std::vector<Var> flipped;
  bool seen_decision = false;
  for (const auto& e : t.events) {
    switch (e.kind) {
      case EventKind::kDecide:
        frames.push_back({e.variable, false, trail.size()});
        REQUIRE(e.level == frames.size());
        assign(e.variable, e.value);
        ++decisions;
        seen_decision = true;
        break;
      case EventKind::kPropagateUnit: {
        REQUIRE(h.unit_propagation);
        REQUIRE(e.level == frames.size());
        const Clause& c = f.clause(e.clause);
        REQUIRE(c.polarity_of(e.variable) == e.value);
        for (const auto& lit : c.literals()) {
          if (lit.variable != e.variable) REQUIRE(falsified(lit));
        }
        assign(e.variable, e.value);
        break;
      }
      case EventKind::kPropagateResolution:
        REQUIRE(h.resolution_preprocessing);
        REQUIRE(!seen_decision);
        REQUIRE(e.level == 0);
        REQUIRE(e.clause_pair.first < e.clause_pair.second);
        REQUIRE(f.clause(e.clause_pair.first).polarity_of(e.variable) == e.value);
        REQUIRE(f.clause(e.clause_pair.second).polarity_of(e.variable) == e.value);
        assign(e.variable, e.value);
        break;
      case EventKind::kConflict:
        ++conflicts;
        for (const auto& lit : f.clause(e.clause).literals()) REQUIRE(falsified(lit));
        break;
      case EventKind::kBacktrack: {
        while (!frames.empty() && frames.back().flipped) {
          undo_to(frames.back().trail_pos);
          frames.pop_back();
        }
        REQUIRE(!frames.empty());
        Frame& top = frames.back();
        REQUIRE(top.var == e.variable);
        REQUIRE(e.level == frames.size());
        undo_to(top.trail_pos);
        REQUIRE(values[e.variable] == -1);
        top.flipped = true;
        assign(e.variable, e.value);
        if (std::find(flipped.begin(), flipped.end(), e.variable) == flipped.end()) {
          flipped.push_back(e.variable);
        }
        break;
      }
    }
  }
  REQUIRE(decisions == t.decisions);
  REQUIRE(conflicts == t.conflicts);
  REQUIRE(flipped == t.backtracked_vars);
  if (t.satisfiable()) {
    REQUIRE(evaluate(f, *t.final_assignment));
    REQUIRE(trail.size() == f.num_vars());
    REQUIRE(t.deduction_order.size() == f.num_vars());
    for (std::size_t i = 0; i < trail.size(); ++i) {
      REQUIRE(t.deduction_order[i].first == trail[i]);
      REQUIRE(t.final_assignment->value(trail[i]) == t.deduction_order[i].second);
    }
    REQUIRE(!t.exhausted);
  } else {
    REQUIRE(t.exhausted);
    REQUIRE(t.deduction_order.empty());
  }
}

}  // namespace

TEST_CASE("two-clause fixture solves by propagation alone") {
  const Formula f = rsat_test::load_fixture("eq1.cnf");
  const SolveTrace t = dpll_solve(f, Heuristic{});
  CHECK(t.decisions == 0);
  CHECK(t.final_assignment->to_string() == "TT");
  CHECK(t.deduction_order == pairs({{1, true}, {2, true}}));
  REQUIRE(t.events.size() == 2);
  CHECK(t.events[0] == TraceEvent{EventKind::kPropagateUnit, 1, true, 0, 0, {0, 0}});
  CHECK(t.events[1] == TraceEvent{EventKind::kPropagateUnit, 2, true, 0, 1, {0, 0}});
}

TEST_CASE("six-clause fixture with resolution and unit propagation") {
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  Heuristic h;
  h.resolution_preprocessing = true;
  const SolveTrace t = dpll_solve(f, h);
  CHECK(t.decisions == 0);
  CHECK(t.backtracked_vars.empty());
  CHECK(t.conflicts == 0);
  CHECK(t.deduction_order == pairs({{3, true}, {1, true}, {2, false}, {4, false}}));
  CHECK(t.final_assignment->to_string() == "TFTF");
  REQUIRE(!t.events.empty());
  CHECK(t.events[0] == TraceEvent{EventKind::kPropagateResolution, 3, true, 0, 0, {4, 5}});
  CHECK(t.events[1].kind == EventKind::kPropagateUnit);
  CHECK(t.events[1].clause == 2);
  check_well_formed(f, h, t);
}

TEST_CASE("six-clause fixture, fixed order from x4 with true first, backtracks x4") {
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  Heuristic h;
  h.branching = BranchRule::kFixedOrder;
  h.polarity = PolarityRule::kTrueFirst;
  h.fixed_order = {4, 1, 2, 3};
  const SolveTrace t = dpll_solve(f, h);
  CHECK(t.final_assignment->to_string() == "TFTF");
  CHECK(t.backtracked_vars == std::vector<Var>{4});
  CHECK(t.first_backtracked() == Var{4});
  REQUIRE(t.events.size() >= 2);
  CHECK(t.events[0] == TraceEvent{EventKind::kDecide, 4, true, 1, 0, {0, 0}});
  const auto bt = std::find_if(t.events.begin(), t.events.end(),
                               [](const TraceEvent& e) { return e.kind == EventKind::kBacktrack; });
  REQUIRE(bt != t.events.end());
  CHECK(bt->variable == 4);
  CHECK(bt->value == false);
  CHECK(std::prev(bt)->kind == EventKind::kConflict);
  check_well_formed(f, h, t);
}

TEST_CASE("unsatisfiable fixture exhausts the search") {
  const Formula f = rsat_test::load_fixture("unsat.cnf");
  for (const auto& h : rsat_test::heuristic_matrix(f.num_vars(), 3)) {
    const SolveTrace t = dpll_solve(f, h);
    CHECK(!t.satisfiable());
    CHECK(t.exhausted);
    CHECK(t.conflicts >= 1);
    check_well_formed(f, h, t);
  }
}

TEST_CASE("a run without a flip has no first backtracked variable") {
  CHECK(!dpll_solve(rsat_test::load_fixture("eq1.cnf"), Heuristic{}).first_backtracked());
}

TEST_CASE("property: solver verdict matches the oracle across heuristics") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    const bool sat = count_solutions(f, 1) > 0;
    for (const auto& h : rsat_test::heuristic_matrix(f.num_vars(), rng.next())) {
      const SolveTrace t = dpll_solve(f, h);
      REQUIRE(t.satisfiable() == sat);
    }
  }
}

TEST_CASE("property: traces are well formed") {
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    for (const auto& h : rsat_test::heuristic_matrix(f.num_vars(), rng.next())) {
      check_well_formed(f, h, dpll_solve(f, h));
    }
  }
}

TEST_CASE("property: seeded solves are deterministic") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    for (const auto& h : rsat_test::heuristic_matrix(f.num_vars(), rng.next())) {
      const SolveTrace a = dpll_solve(f, h);
      const SolveTrace b = dpll_solve(f, h);
      REQUIRE(a.events == b.events);
      REQUIRE(a.deduction_order == b.deduction_order);
    }
  }
}

TEST_CASE("run features combine profile and trace") {
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  Heuristic h;
  h.branching = BranchRule::kFixedOrder;
  h.polarity = PolarityRule::kTrueFirst;
  h.fixed_order = {4, 1, 2, 3};
  const auto features = extract_run_features(f, compute_profile(f), dpll_solve(f, h));
  CHECK(features.of(3).is_resolution);
  CHECK(features.of(3).is_max_degree);
  CHECK(features.of(4).was_backtracked);
  CHECK(!features.of(1).was_backtracked);
  CHECK(features.any_backtrack);
  CHECK(features.any_resolution);
  CHECK(!features.any_unit);
  CHECK(event_kind_name(EventKind::kBacktrack) == "BACKTRACK");
}
