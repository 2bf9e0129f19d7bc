// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <sstream>

#include "reasonsat/rng.hpp"

namespace reasonsat {

DimacsParseError::DimacsParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Literal Literal::from_dimacs(int code) {
  if (code == 0) throw ContractViolation("literal code 0 is the clause terminator");
  return code > 0 ? Literal{static_cast<Var>(code), true}
                  : Literal{static_cast<Var>(-static_cast<long long>(code)), false};
}

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  if (literals_.empty()) throw ContractViolation("clause must not be empty");
  std::vector<Var> seen;
  seen.reserve(literals_.size());
  for (const Literal& lit : literals_) {
    if (lit.variable < 1) throw ContractViolation("variable indices start at 1");
    if (std::find(seen.begin(), seen.end(), lit.variable) != seen.end()) {
      throw ContractViolation("variable " + std::to_string(lit.variable) +
                              " occurs twice in one clause");
    }
    seen.push_back(lit.variable);
    if (lit.variable <= 64) {
      const std::uint64_t bit = std::uint64_t{1} << (lit.variable - 1);
      (lit.positive ? pos_mask_ : neg_mask_) |= bit;
    }
  }
}

std::optional<bool> Clause::polarity_of(Var v) const noexcept {
  for (const Literal& lit : literals_) {
    if (lit.variable == v) return lit.positive;
  }
  return std::nullopt;
}

Formula::Formula(std::uint32_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (num_vars_ < 1) throw ContractViolation("formula needs at least one variable");
  for (const Clause& c : clauses_) {
    for (const Literal& lit : c.literals()) {
      if (lit.variable > num_vars_) {
        throw ContractViolation("variable " + std::to_string(lit.variable) +
                                " exceeds num_vars " + std::to_string(num_vars_));
      }
    }
  }
}

std::size_t Formula::total_literals() const noexcept {
  std::size_t total = 0;
  for (const Clause& c : clauses_) total += c.size();
  return total;
}

Formula Formula::without_clause(std::size_t index) const {
  std::vector<Clause> rest;
  rest.reserve(clauses_.size());
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (i != index) rest.push_back(clauses_[i]);
  }
  return Formula(num_vars_, std::move(rest));
}

Assignment Assignment::from_string(std::string_view text) {
  std::vector<bool> values;
  values.reserve(text.size());
  for (char c : text) {
    if (c == 'T') {
      values.push_back(true);
    } else if (c == 'F') {
      values.push_back(false);
    } else {
      throw ContractViolation("assignment strings use only 'T' and 'F'");
    }
  }
  return Assignment(std::move(values));
}

Assignment Assignment::from_bits(std::uint32_t num_vars, std::uint64_t bits) {
  std::vector<bool> values(num_vars);
  for (std::uint32_t i = 0; i < num_vars; ++i) values[i] = ((bits >> i) & 1U) != 0;
  return Assignment(std::move(values));
}

std::uint64_t Assignment::bits() const noexcept {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < values_.size() && i < 64; ++i) {
    if (values_[i]) out |= std::uint64_t{1} << i;
  }
  return out;
}

std::string Assignment::to_string() const {
  std::string out;
  out.reserve(values_.size());
  for (bool b : values_) out.push_back(b ? 'T' : 'F');
  return out;
}

bool evaluate(const Formula& formula, const Assignment& assignment) {
  if (assignment.size() != formula.num_vars()) {
    throw ContractViolation("assignment covers " + std::to_string(assignment.size()) +
                            " variables, formula has " + std::to_string(formula.num_vars()));
  }
  for (const Clause& c : formula.clauses()) {
    bool satisfied = false;
    for (const Literal& lit : c.literals()) {
      if (assignment.value(lit.variable) == lit.positive) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

namespace {

void require_oracle_size(const Formula& formula) {
  if (formula.num_vars() > kOracleVarLimit) {
    throw OracleLimitError("exhaustive enumeration is limited to " +
                           std::to_string(kOracleVarLimit) + " variables (formula has " +
                           std::to_string(formula.num_vars()) + ")");
  }
}

// Sweeps assignments so that the T/F strings come out in lexicographic order:
// counter bit (n-1-i) drives variable i+1, i.e. x1 is the most significant.
template <typename Visit>
void sweep(const Formula& formula, Visit&& visit) {
  require_oracle_size(formula);
  const std::uint32_t n = formula.num_vars();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;
  masks.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses()) masks.emplace_back(c.positive_mask(), c.negative_mask());
  const std::uint64_t all = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  for (std::uint64_t counter = 0; counter < (std::uint64_t{1} << n); ++counter) {
    std::uint64_t bits = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if ((counter >> (n - 1 - i)) & 1U) bits |= std::uint64_t{1} << i;
    }
    bool ok = true;
    for (const auto& [pos, neg] : masks) {
      if (((bits & pos) | (~bits & all & neg)) == 0) {
        ok = false;
        break;
      }
    }
    if (ok && !visit(bits)) return;
  }
}

}  // namespace

std::vector<Assignment> enumerate_solutions(const Formula& formula) {
  std::vector<Assignment> out;
  sweep(formula, [&](std::uint64_t bits) {
    out.push_back(Assignment::from_bits(formula.num_vars(), bits));
    return true;
  });
  return out;
}

std::uint64_t count_solutions(const Formula& formula, std::uint64_t stop_after) {
  std::uint64_t count = 0;
  sweep(formula, [&](std::uint64_t) {
    ++count;
    return stop_after == 0 || count <= stop_after;
  });
  return count;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\f\v");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

template <typename Int>
std::optional<Int> to_int(std::string_view token) {
  Int value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

Formula parse_dimacs(std::istream& in) {
  std::optional<std::uint32_t> num_vars;
  std::size_t declared_clauses = 0;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == 'c') continue;
    if (body.front() == '%') break;
    if (body.front() == 'p') {
      if (num_vars) throw DimacsParseError(line_no, "duplicate problem line");
      const auto tokens = split_ws(body);
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf") {
        throw DimacsParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      const auto nv = to_int<std::uint32_t>(tokens[2]);
      const auto nc = to_int<std::size_t>(tokens[3]);
      if (!nv || !nc || *nv < 1) {
        throw DimacsParseError(line_no, "malformed header counts");
      }
      num_vars = *nv;
      declared_clauses = *nc;
      continue;
    }
    if (!num_vars) throw DimacsParseError(line_no, "clause data before 'p cnf' header");
    for (std::string_view token : split_ws(body)) {
      const auto code = to_int<long long>(token);
      if (!code) throw DimacsParseError(line_no, "not an integer literal: '" + std::string(token) + "'");
      if (*code == 0) {
        if (pending.empty()) throw DimacsParseError(line_no, "empty clause");
        try {
          clauses.emplace_back(std::move(pending));
        } catch (const ContractViolation& e) {
          throw DimacsParseError(pending_line, e.what());
        }
        pending.clear();
        continue;
      }
      const unsigned long long magnitude =
          static_cast<unsigned long long>(*code < 0 ? -*code : *code);
      if (magnitude > *num_vars) {
        throw DimacsParseError(line_no, "literal " + std::string(token) +
                                            " exceeds declared variable count " +
                                            std::to_string(*num_vars));
      }
      if (pending.empty()) pending_line = line_no;
      pending.push_back(Literal{static_cast<Var>(magnitude), *code > 0});
    }
  }
  if (!num_vars) throw DimacsParseError(line_no == 0 ? 1 : line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw DimacsParseError(pending_line, "unterminated clause (missing 0)");
  if (clauses.size() != declared_clauses) {
    throw DimacsParseError(line_no, "header declares " + std::to_string(declared_clauses) +
                                        " clauses, found " + std::to_string(clauses.size()));
  }
  return Formula(*num_vars, std::move(clauses));
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

std::string write_dimacs(const Formula& formula) {
  std::string out = "p cnf " + std::to_string(formula.num_vars()) + " " +
                    std::to_string(formula.num_clauses()) + "\n";
  for (const Clause& c : formula.clauses()) {
    for (const Literal& lit : c.literals()) {
      out += std::to_string(lit.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

ShuffleKey ShuffleKey::identity(const Formula& formula) {
  ShuffleKey key;
  key.variable_permutation.resize(formula.num_vars());
  std::iota(key.variable_permutation.begin(), key.variable_permutation.end(), Var{1});
  key.clause_order.resize(formula.num_clauses());
  std::iota(key.clause_order.begin(), key.clause_order.end(), std::size_t{0});
  for (const Clause& c : formula.clauses()) {
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    key.literal_orders.push_back(std::move(order));
  }
  return key;
}

ShuffleKey ShuffleKey::random(const Formula& formula, std::uint64_t seed) {
  ShuffleKey key = identity(formula);
  key.seed = seed;
  Rng rng(seed);
  rng.shuffle(std::span<Var>(key.variable_permutation));
  rng.shuffle(std::span<std::size_t>(key.clause_order));
  for (auto& order : key.literal_orders) rng.shuffle(std::span<std::size_t>(order));
  return key;
}

namespace {

bool is_permutation_of_range(std::span<const std::size_t> values, std::size_t base) {
  std::vector<bool> seen(values.size(), false);
  for (std::size_t v : values) {
    if (v < base || v - base >= values.size() || seen[v - base]) return false;
    seen[v - base] = true;
  }
  return true;
}

void check_key(const Formula& formula, const ShuffleKey& key) {
  std::vector<std::size_t> vars(key.variable_permutation.begin(), key.variable_permutation.end());
  if (vars.size() != formula.num_vars() || !is_permutation_of_range(vars, 1)) {
    throw ContractViolation("variable permutation is not a bijection on 1..num_vars");
  }
  if (key.clause_order.size() != formula.num_clauses() ||
      !is_permutation_of_range(key.clause_order, 0)) {
    throw ContractViolation("clause permutation is not a bijection on clause indices");
  }
  if (key.literal_orders.size() != formula.num_clauses()) {
    throw ContractViolation("shuffle key has wrong number of literal orders");
  }
  for (std::size_t j = 0; j < formula.num_clauses(); ++j) {
    if (key.literal_orders[j].size() != formula.clause(j).size() ||
        !is_permutation_of_range(key.literal_orders[j], 0)) {
      throw ContractViolation("literal order of clause " + std::to_string(j + 1) +
                              " is not a permutation");
    }
  }
}

}  // namespace

Var shuffled_variable(const ShuffleKey& key, Var v) { return key.variable_permutation.at(v - 1); }

ShuffledInstance apply_shuffle(const Formula& formula, const Assignment& solution,
                               const ShuffleKey& key) {
  check_key(formula, key);
  if (solution.size() != formula.num_vars()) {
    throw ContractViolation("solution arity does not match formula");
  }
  std::vector<Clause> clauses;
  clauses.reserve(formula.num_clauses());
  for (std::size_t original : key.clause_order) {
    const Clause& source = formula.clause(original);
    std::vector<Literal> lits;
    lits.reserve(source.size());
    for (std::size_t pos : key.literal_orders[original]) {
      const Literal& lit = source[pos];
      lits.push_back(Literal{shuffled_variable(key, lit.variable), lit.positive});
    }
    clauses.emplace_back(std::move(lits));
  }
  Assignment remapped(std::vector<bool>(formula.num_vars()));
  for (Var v = 1; v <= formula.num_vars(); ++v) {
    remapped.set(shuffled_variable(key, v), solution.value(v));
  }
  return {Formula(formula.num_vars(), std::move(clauses)), std::move(remapped)};
}

Formula canonical_form(const Formula& formula) {
  std::vector<std::vector<Literal>> sorted;
  sorted.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses()) {
    std::vector<Literal> lits(c.literals().begin(), c.literals().end());
    std::sort(lits.begin(), lits.end());
    sorted.push_back(std::move(lits));
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<Clause> clauses;
  clauses.reserve(sorted.size());
  for (auto& lits : sorted) clauses.emplace_back(std::move(lits));
  return Formula(formula.num_vars(), std::move(clauses));
}

std::string render_formula(const Formula& formula) {
  std::string out;
  for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
    if (i > 0) out += " AND ";
    out += '(';
    const Clause& c = formula.clause(i);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j > 0) out += " OR ";
      if (!c[j].positive) out += "NOT ";
      out += 'x';
      out += std::to_string(c[j].variable);
    }
    out += ')';
  }
  return out;
}

}  // namespace reasonsat
