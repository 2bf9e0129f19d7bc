// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "reasonsat/rng.hpp"

namespace reasonsat {

GenerationError::GenerationError(Stratum stratum, std::size_t attempts, const std::string& detail)
    : std::runtime_error("generation failed for stratum '" + std::string(stratum_name(stratum)) +
                         "' after " + std::to_string(attempts) + " attempts: " + detail),
      stratum_(stratum),
      attempts_(attempts) {}

void validate(const GenSpec& spec) {
  if (spec.num_vars < 2) throw ContractViolation("num_vars must be at least 2");
  if (spec.num_vars > kOracleVarLimit) throw ContractViolation("num_vars exceeds the oracle limit");
  if (spec.num_clauses.lo < 1 || spec.num_clauses.lo > spec.num_clauses.hi) {
    throw ContractViolation("clause-count range is empty");
  }
  if (spec.clause_length.lo < 2 || spec.clause_length.lo > spec.clause_length.hi) {
    throw ContractViolation("clause-length range must be non-empty with minimum at least 2");
  }
  if (spec.clause_length.hi > spec.num_vars) {
    throw ContractViolation("clause length cannot exceed num_vars");
  }
  if (spec.stratum == Stratum::kUnit && spec.num_clauses.hi < 2) {
    throw ContractViolation("unit stratum needs room for a unit clause plus others");
  }
  if (spec.max_attempts == 0) throw ContractViolation("max_attempts must be positive");
}

namespace {

Clause random_clause(Rng& rng, std::uint32_t num_vars, std::uint32_t length) {
  std::vector<Var> pool(num_vars);
  std::iota(pool.begin(), pool.end(), Var{1});
  std::vector<Literal> lits;
  lits.reserve(length);
  for (std::uint32_t i = 0; i < length; ++i) {
    const std::size_t j = i + rng.below(num_vars - i);
    std::swap(pool[i], pool[j]);
    lits.push_back(Literal{pool[i], rng.coin()});
  }
  return Clause(std::move(lits));
}

Formula draw_candidate(Rng& rng, const GenSpec& spec) {
  const auto m = static_cast<std::uint32_t>(rng.between(spec.num_clauses.lo, spec.num_clauses.hi));
  std::vector<Clause> clauses;
  clauses.reserve(m);
  std::size_t unit_slot = m;
  if (spec.stratum == Stratum::kUnit) unit_slot = rng.below(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    const std::uint32_t length =
        i == unit_slot
            ? 1
            : static_cast<std::uint32_t>(rng.between(spec.clause_length.lo, spec.clause_length.hi));
    clauses.push_back(random_clause(rng, spec.num_vars, length));
  }
  return Formula(spec.num_vars, std::move(clauses));
}

bool covers_all_vars(const Formula& f) {
  std::uint64_t seen = 0;
  for (const Clause& c : f.clauses()) seen |= c.positive_mask() | c.negative_mask();
  return seen == (std::uint64_t{1} << f.num_vars()) - 1;
}

// Cheap structural filters before the exponential checks.
bool structure_matches(const Formula& f, Stratum stratum) {
  const auto units = find_unit_clauses(f);
  switch (stratum) {
    case Stratum::kUnit: {
      std::size_t unit_clauses = 0;
      for (const Clause& c : f.clauses()) unit_clauses += c.size() == 1 ? 1 : 0;
      return unit_clauses == 1;
    }
    case Stratum::kResolution:
      return units.empty() && !find_resolution_units(f).empty();
    case Stratum::kNeither:
      return units.empty() && find_resolution_units(f).empty();
  }
  return false;
}

}  // namespace

bool meets_constraints(const Formula& formula, const StructureProfile& profile, Stratum stratum) {
  if (profile.solution_count != 1 || !profile.all_clauses_critical || !profile.all_vars_occur) {
    return false;
  }
  if (classify_stratum(profile) != stratum) return false;
  if (stratum == Stratum::kUnit) {
    std::size_t unit_clauses = 0;
    for (const Clause& c : formula.clauses()) unit_clauses += c.size() == 1 ? 1 : 0;
    if (unit_clauses != 1) return false;
  }
  return true;
}

GeneratedInstance generate_instance(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  for (std::size_t attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    Formula candidate = draw_candidate(rng, spec);
    if (!covers_all_vars(candidate) || !structure_matches(candidate, spec.stratum)) continue;
    if (count_solutions(candidate, 1) != 1) continue;
    if (!criticality_check(candidate).all_clauses_critical) continue;
    StructureProfile profile = compute_profile(candidate);
    if (!meets_constraints(candidate, profile, spec.stratum)) continue;
    return {std::move(candidate), std::move(profile), attempt};
  }
  throw GenerationError(spec.stratum, spec.max_attempts, "constraints never satisfied");
}

std::size_t Dataset::run_count() const {
  std::size_t n = 0;
  for (const auto& inst : instances) n += inst.variants.size();
  return n;
}

namespace {

constexpr std::size_t kMaxDuplicateRetries = 10'000;

std::string padded(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, value);
  return buf;
}

struct StratumOutput {
  std::vector<BaseInstance> instances;
  StratumStats stats;
};

StratumOutput generate_stratum(const Battery& battery, const GenSpec& base_spec) {
  StratumOutput out;
  out.stats.stratum = base_spec.stratum;
  const std::string label = "instance/" + std::string(stratum_name(base_spec.stratum));
  std::set<std::string> seen;
  for (std::size_t index = 0; index < battery.per_stratum; ++index) {
    GenSpec spec = base_spec;
    spec.seed = derive_seed(battery.master_seed, label, index);
    for (std::size_t retry = 0;; ++retry) {
      if (retry == kMaxDuplicateRetries) {
        throw GenerationError(spec.stratum, out.stats.attempts,
                              "could not find a distinct instance for index " + std::to_string(index));
      }
      GeneratedInstance g = generate_instance(spec);
      out.stats.attempts += g.attempts;
      const std::string canonical = write_dimacs(canonical_form(g.formula));
      if (!seen.insert(canonical).second) {
        ++out.stats.duplicate_rejections;
        spec.seed = derive_seed(spec.seed, "retry", retry);
        continue;
      }
      BaseInstance inst;
      inst.id = std::string(stratum_name(spec.stratum)) + "-" + padded(index, 4);
      inst.stratum = spec.stratum;
      inst.index = index;
      inst.seed = spec.seed;
      inst.formula = std::move(g.formula);
      inst.profile = std::move(g.profile);
      inst.attempts = g.attempts;
      out.instances.push_back(std::move(inst));
      break;
    }
    BaseInstance& inst = out.instances.back();
    const Assignment& solution = *inst.profile.unique_solution;
    for (std::size_t s = 0; s < battery.shuffles; ++s) {
      ShuffleKey key = ShuffleKey::random(
          inst.formula, derive_seed(battery.master_seed, "shuffle/" + inst.id, s));
      auto shuffled = apply_shuffle(inst.formula, solution, key);
      const auto solutions = enumerate_solutions(shuffled.formula);
      if (solutions.size() != 1 || !(solutions.front() == shuffled.solution)) {
        throw std::logic_error("shuffle of " + inst.id + " changed its solution set");
      }
      inst.variants.push_back(Variant{s, inst.id + "-s" + padded(s, 2), std::move(key),
                                      std::move(shuffled.formula), std::move(shuffled.solution)});
    }
  }
  out.stats.instances = out.instances.size();
  return out;
}

}  // namespace

Dataset generate_battery(const Battery& battery, const std::vector<GenSpec>& strata,
                         std::size_t jobs) {
  if (strata.empty()) throw ContractViolation("battery needs at least one stratum");
  if (battery.per_stratum == 0 || battery.shuffles == 0) {
    throw ContractViolation("battery counts must be positive");
  }
  std::set<Stratum> distinct;
  for (const auto& s : strata) {
    validate(s);
    if (!distinct.insert(s.stratum).second) {
      throw ContractViolation("stratum '" + std::string(stratum_name(s.stratum)) + "' listed twice");
    }
  }

  std::vector<StratumOutput> outputs(strata.size());
  std::vector<std::exception_ptr> errors(strata.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next == strata.size()) return;
        i = next++;
      }
      try {
        outputs[i] = generate_stratum(battery, strata[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, strata.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Dataset data;
  data.master_seed = battery.master_seed;
  for (auto& o : outputs) {
    data.stats.push_back(o.stats);
    for (auto& inst : o.instances) data.instances.push_back(std::move(inst));
  }
  return data;
}

}  // namespace reasonsat
