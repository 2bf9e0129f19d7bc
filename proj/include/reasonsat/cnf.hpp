// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reasonsat {

using Var = std::uint32_t;

/// Raised when a caller breaks a documented precondition (bad arity,
/// malformed clause, mismatched shuffle key).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the exhaustive oracle is asked to sweep too many variables.
class OracleLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DimacsParseError : public std::runtime_error {
 public:
  DimacsParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Literal {
  Var variable = 1;
  bool positive = true;

  static Literal from_dimacs(int code);
  int to_dimacs() const noexcept {
    return positive ? static_cast<int>(variable) : -static_cast<int>(variable);
  }
  Literal negated() const noexcept { return {variable, !positive}; }

  auto operator<=>(const Literal&) const = default;
};

/// Ordered disjunction of literals over distinct variables.
class Clause {
 public:
  explicit Clause(std::vector<Literal> literals);

  std::span<const Literal> literals() const noexcept { return literals_; }
  std::size_t size() const noexcept { return literals_.size(); }
  const Literal& operator[](std::size_t i) const { return literals_[i]; }

  /// Polarity with which `v` occurs, if it occurs.
  std::optional<bool> polarity_of(Var v) const noexcept;

  /// Bit masks over variables (bit v-1). Only meaningful for v <= 64.
  std::uint64_t positive_mask() const noexcept { return pos_mask_; }
  std::uint64_t negative_mask() const noexcept { return neg_mask_; }

  bool operator==(const Clause& other) const { return literals_ == other.literals_; }

 private:
  std::vector<Literal> literals_;
  std::uint64_t pos_mask_ = 0;
  std::uint64_t neg_mask_ = 0;
};

/// CNF formula. Clause order is part of the value: presentation order is an
/// experimental variable and is never normalized away.
class Formula {
 public:
  /// One variable, no clauses.
  Formula() = default;
  Formula(std::uint32_t num_vars, std::vector<Clause> clauses);

  std::uint32_t num_vars() const noexcept { return num_vars_; }
  std::span<const Clause> clauses() const noexcept { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_.at(i); }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  std::size_t total_literals() const noexcept;

  /// Copy of this formula without clause `index`.
  Formula without_clause(std::size_t index) const;

  bool operator==(const Formula& other) const {
    return num_vars_ == other.num_vars_ && clauses_ == other.clauses_;
  }

 private:
  std::uint32_t num_vars_ = 1;
  std::vector<Clause> clauses_;
};

/// Total truth assignment; renders as a T/F string where character i is
/// variable i+1.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<bool> values) : values_(std::move(values)) {}

  static Assignment from_string(std::string_view text);
  /// Bit v-1 of `bits` holds variable v.
  static Assignment from_bits(std::uint32_t num_vars, std::uint64_t bits);

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(values_.size()); }
  bool value(Var v) const { return values_.at(v - 1); }
  void set(Var v, bool value) { values_.at(v - 1) = value; }
  std::uint64_t bits() const noexcept;
  std::string to_string() const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<bool> values_;
};

inline constexpr std::uint32_t kOracleVarLimit = 24;

bool evaluate(const Formula& formula, const Assignment& assignment);

/// Every satisfying assignment, in lexicographic order of the T/F string.
std::vector<Assignment> enumerate_solutions(const Formula& formula);

/// Same sweep as enumerate_solutions, counting only. Stops early once the
/// count exceeds `stop_after` (0 = never stop).
std::uint64_t count_solutions(const Formula& formula, std::uint64_t stop_after = 0);

Formula parse_dimacs(std::istream& in);
Formula parse_dimacs(std::string_view text);
std::string write_dimacs(const Formula& formula);

/// Presentation shuffle: variable relabeling plus clause and literal order.
struct ShuffleKey {
  /// variable_permutation[v-1] is the new label of variable v.
  std::vector<Var> variable_permutation;
  /// Position i of the shuffled formula holds original clause clause_order[i].
  std::vector<std::size_t> clause_order;
  /// literal_orders[j] lists, in new order, positions of original clause j.
  std::vector<std::vector<std::size_t>> literal_orders;
  std::uint64_t seed = 0;

  static ShuffleKey identity(const Formula& formula);
  static ShuffleKey random(const Formula& formula, std::uint64_t seed);

  bool operator==(const ShuffleKey&) const = default;
};

struct ShuffledInstance {
  Formula formula;
  Assignment solution;
};

ShuffledInstance apply_shuffle(const Formula& formula, const Assignment& solution,
                               const ShuffleKey& key);

/// Relabel only, keeping clause and literal order (used to carry profiles
/// through a shuffle).
Var shuffled_variable(const ShuffleKey& key, Var v);

/// Literals sorted within clauses and clauses sorted; two formulas that differ
/// only in presentation order share a canonical form.
Formula canonical_form(const Formula& formula);

/// Human-readable rendering, e.g. "(x1) AND (x2 OR NOT x1)".
std::string render_formula(const Formula& formula);

}  // namespace reasonsat
