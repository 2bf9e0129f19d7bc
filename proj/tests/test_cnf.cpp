// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <set>

#include "reasonsat/cnf.hpp"
#include "support.hpp"

using namespace reasonsat;

namespace {

std::set<std::string> solution_strings(const Formula& f) {
  std::set<std::string> out;
  for (const auto& a : enumerate_solutions(f)) out.insert(a.to_string());
  return out;
}

// Independent check: every assignment, evaluated literal by literal.
std::uint64_t naive_count(const Formula& f) {
  std::uint64_t count = 0;
  for (std::uint64_t bits = 0; bits < (1ULL << f.num_vars()); ++bits) {
    bool all = true;
    for (const auto& c : f.clauses()) {
      bool any = false;
      for (const auto& l : c.literals()) {
        const bool value = (bits >> (l.variable - 1)) & 1ULL;
        if (value == l.positive) any = true;
      }
      all = all && any;
    }
    count += all;
  }
  return count;
}

}  // namespace

TEST_CASE("two-clause fixture has the single solution TT") {
  const Formula f = rsat_test::load_fixture("eq1.cnf");
  CHECK(f.num_vars() == 2);
  CHECK(f.num_clauses() == 2);
  CHECK(solution_strings(f) == std::set<std::string>{"TT"});
  CHECK(render_formula(f) == "(x1) AND (x2 OR NOT x1)");
}

TEST_CASE("six-clause fixture has the single solution TFTF") {
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  CHECK(f.num_vars() == 4);
  CHECK(f.num_clauses() == 6);
  CHECK(solution_strings(f) == std::set<std::string>{"TFTF"});
  CHECK(count_solutions(f) == 1);
}

TEST_CASE("assignments") {
  CHECK(Assignment::from_string("TFTF").to_string() == "TFTF");
  CHECK(Assignment::from_bits(4, 0b0101).to_string() == "TFTF");
  CHECK(Assignment::from_string("TFTF").bits() == 0b0101);
  CHECK_THROWS_AS(Assignment::from_string("TFX"), ContractViolation);
}

TEST_CASE("clause and formula contracts") {
  CHECK_THROWS_AS(Clause({}), ContractViolation);
  CHECK_THROWS_AS(Clause({{1, true}, {1, false}}), ContractViolation);
  CHECK_THROWS_AS(Formula(2, {Clause({{3, true}})}), ContractViolation);
  CHECK_THROWS_AS(Literal::from_dimacs(0), ContractViolation);
  CHECK(Literal::from_dimacs(-3).to_dimacs() == -3);
}

TEST_CASE("oracle refuses oversized formulas") {
  const Formula f(kOracleVarLimit + 1, {Clause({{1, true}})});
  CHECK_THROWS_AS(enumerate_solutions(f), OracleLimitError);
  CHECK_THROWS_AS(count_solutions(f), OracleLimitError);
}

TEST_CASE("count_solutions stops early") {
  const Formula f(3, {Clause({{1, true}})});
  CHECK(count_solutions(f) == 4);
  CHECK(count_solutions(f, 1) == 2);
}

TEST_CASE("DIMACS parse errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_dimacs(text);
    } catch (const DimacsParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("1 0\n") == 1);
  CHECK(line_of("c hi\np cnf 2 1\n1 3 0\n") == 3);
  CHECK(line_of("p cnf 2 1\n1 -1 0\n") == 2);
  CHECK(line_of("p cnf 2 1\n1 2\n") == 2);
  CHECK(line_of("p cnf 2 2\n1 2 0\n") != 0);
  CHECK(line_of("p cnf x 2\n") == 1);
  CHECK(line_of("p cnf 2 1\n1 a 0\n") == 2);
  CHECK(line_of("p cnf 2 1\np cnf 2 1\n1 0\n") == 2);
  CHECK(line_of("") != 0);
}

TEST_CASE("DIMACS accepts clauses spanning lines and comments") {
  const Formula f = parse_dimacs("c a\np cnf 3 2\n1 -2\n 3 0\nc b\n-1 0\n");
  CHECK(f.num_clauses() == 2);
  CHECK(f.clause(0).size() == 3);
  CHECK(write_dimacs(f) == "p cnf 3 2\n1 -2 3 0\n-1 0\n");
}

TEST_CASE("property: DIMACS round trip is the identity") {
  Rng rng(20261016);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    const std::string text = write_dimacs(f);
    const Formula g = parse_dimacs(text);
    REQUIRE(g == f);
    REQUIRE(write_dimacs(g) == text);
  }
}

TEST_CASE("property: oracle matches a naive sweep") {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    const auto sols = enumerate_solutions(f);
    REQUIRE(sols.size() == naive_count(f));
    REQUIRE(count_solutions(f) == sols.size());
    REQUIRE(std::is_sorted(sols.begin(), sols.end(), [](const auto& a, const auto& b) {
      return a.to_string() < b.to_string();
    }));
    for (const auto& s : sols) REQUIRE(evaluate(f, s));
  }
}

TEST_CASE("property: shuffles preserve solutions up to relabeling") {
  Rng rng(4242);
  for (int i = 0; i < 1000; ++i) {
    const Formula f = rsat_test::random_formula(rng);
    const auto sols = enumerate_solutions(f);
    const Assignment anchor = sols.empty() ? Assignment(std::vector<bool>(f.num_vars(), true)) : sols[0];
    const ShuffleKey key = ShuffleKey::random(f, rng.next());
    const ShuffledInstance s = apply_shuffle(f, anchor, key);

    REQUIRE(s.formula.num_clauses() == f.num_clauses());
    REQUIRE(s.formula.total_literals() == f.total_literals());
    const auto shuffled_sols = enumerate_solutions(s.formula);
    REQUIRE(shuffled_sols.size() == sols.size());
    REQUIRE(evaluate(s.formula, s.solution) == evaluate(f, anchor));
    for (Var v = 1; v <= f.num_vars(); ++v) {
      REQUIRE(s.solution.value(shuffled_variable(key, v)) == anchor.value(v));
    }
    // Clause j of the shuffle is original clause clause_order[j], relabeled.
    for (std::size_t j = 0; j < f.num_clauses(); ++j) {
      const Clause& original = f.clause(key.clause_order[j]);
      const Clause& moved = s.formula.clause(j);
      REQUIRE(moved.size() == original.size());
      for (const auto& lit : original.literals()) {
        REQUIRE(moved.polarity_of(shuffled_variable(key, lit.variable)) == lit.positive);
      }
    }
    REQUIRE(apply_shuffle(f, anchor, ShuffleKey::identity(f)).formula == f);
  }
}

TEST_CASE("shuffle keys are deterministic and validated") {
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  CHECK(ShuffleKey::random(f, 9) == ShuffleKey::random(f, 9));
  ShuffleKey bad = ShuffleKey::identity(f);
  bad.variable_permutation[0] = 2;
  CHECK_THROWS_AS(apply_shuffle(f, Assignment::from_string("TFTF"), bad), ContractViolation);
  CHECK_THROWS_AS(apply_shuffle(f, Assignment::from_string("TF"), ShuffleKey::identity(f)),
                  ContractViolation);
}

TEST_CASE("canonical form ignores presentation order only") {
  const Formula f = rsat_test::load_fixture("eq2.cnf");
  ShuffleKey key = ShuffleKey::random(f, 3);
  for (auto& p : key.variable_permutation) p = static_cast<Var>(&p - key.variable_permutation.data() + 1);
  const Formula g = apply_shuffle(f, Assignment::from_string("TFTF"), key).formula;
  CHECK(canonical_form(g) == canonical_form(f));
  CHECK(canonical_form(f) != canonical_form(rsat_test::load_fixture("eq1.cnf")));
}
