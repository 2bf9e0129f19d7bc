// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reasonsat/cnf.hpp"
#include "reasonsat/records.hpp"
#include "reasonsat/rng.hpp"
#include "reasonsat/solver.hpp"

namespace rsat_test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(RSAT_FIXTURES) / name;
}

inline reasonsat::Formula load_fixture(const std::string& name) {
  return reasonsat::parse_dimacs(reasonsat::read_file(fixture(name)));
}

// Uniform random CNF: n in [1, max_vars], 1..max_clauses clauses, each over
// distinct variables.
inline reasonsat::Formula random_formula(reasonsat::Rng& rng, std::uint32_t max_vars = 6,
                                         std::size_t max_clauses = 8) {
  using namespace reasonsat;
  const auto n = static_cast<std::uint32_t>(rng.between(1, max_vars));
  const auto m = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_clauses)));
  std::vector<Clause> clauses;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Var> vars(n);
    for (Var v = 1; v <= n; ++v) vars[v - 1] = v;
    rng.shuffle(std::span<Var>(vars));
    const auto len = static_cast<std::size_t>(rng.between(1, std::min<std::int64_t>(n, 4)));
    std::vector<Literal> lits;
    for (std::size_t k = 0; k < len; ++k) lits.push_back({vars[k], rng.coin()});
    clauses.emplace_back(std::move(lits));
  }
  return Formula(n, std::move(clauses));
}

// Fixed-order heuristics need a permutation of every variable.
inline std::vector<reasonsat::Var> ascending(std::uint32_t n) {
  std::vector<reasonsat::Var> order(n);
  for (reasonsat::Var v = 1; v <= n; ++v) order[v - 1] = v;
  return order;
}

// The four solver configurations the equivalence properties sweep.
inline std::vector<reasonsat::Heuristic> heuristic_matrix(std::uint32_t n, std::uint64_t seed) {
  using namespace reasonsat;
  std::vector<Heuristic> out(4);
  out[0].seed = seed;
  out[1].branching = BranchRule::kMaxDegree;
  out[1].polarity = PolarityRule::kTrueFirst;
  out[1].resolution_preprocessing = true;
  out[2].branching = BranchRule::kFixedOrder;
  out[2].polarity = PolarityRule::kTrueFirst;
  out[2].fixed_order = ascending(n);
  out[2].unit_propagation = false;
  out[3].unit_propagation = false;
  out[3].resolution_preprocessing = true;
  out[3].seed = seed ^ 0x5eedULL;
  return out;
}

}  // namespace rsat_test
