// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reasonsat/cnf.hpp"
#include "reasonsat/structure.hpp"

namespace reasonsat {

struct IntRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  bool operator==(const IntRange&) const = default;
};

/// Sampler settings for one stratum. Clause lengths are drawn uniformly from
/// clause_length; the UNIT stratum additionally plants exactly one unit clause.
struct GenSpec {
  std::uint32_t num_vars = 4;
  IntRange num_clauses{4, 6};
  IntRange clause_length{2, 4};
  Stratum stratum = Stratum::kNeither;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1'000'000;
};

void validate(const GenSpec& spec);

class GenerationError : public std::runtime_error {
 public:
  GenerationError(Stratum stratum, std::size_t attempts, const std::string& detail);
  Stratum stratum() const noexcept { return stratum_; }
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  Stratum stratum_;
  std::size_t attempts_;
};

struct GeneratedInstance {
  Formula formula;
  StructureProfile profile;
  std::size_t attempts = 0;
};

/// Rejection sampling: draw clause sets until one has a unique solution,
/// only critical clauses, full variable coverage and the requested stratum.
GeneratedInstance generate_instance(const GenSpec& spec);

/// True when the formula meets every generation constraint for `stratum`.
bool meets_constraints(const Formula& formula, const StructureProfile& profile, Stratum stratum);

struct Battery {
  std::size_t per_stratum = 400;
  std::size_t shuffles = 20;
  std::uint64_t master_seed = 0;
};

struct Variant {
  std::size_t shuffle_index = 0;
  std::string run_id;
  ShuffleKey key;
  Formula formula;
  Assignment solution;
};

struct BaseInstance {
  std::string id;
  Stratum stratum = Stratum::kNeither;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Formula formula;
  StructureProfile profile;
  std::size_t attempts = 0;
  std::vector<Variant> variants;
};

struct StratumStats {
  Stratum stratum = Stratum::kNeither;
  std::size_t instances = 0;
  std::size_t attempts = 0;
  std::size_t duplicate_rejections = 0;
  double acceptance_rate() const {
    return attempts == 0 ? 0.0 : static_cast<double>(instances) / static_cast<double>(attempts);
  }
};

struct Dataset {
  std::uint64_t master_seed = 0;
  std::vector<BaseInstance> instances;
  std::vector<StratumStats> stats;
  std::size_t run_count() const;
};

/// Instance ids are "<stratum>-NNNN", run ids "<instance>-sNN"; both are a
/// pure function of the battery and strata. `jobs` bounds worker threads.
Dataset generate_battery(const Battery& battery, const std::vector<GenSpec>& strata,
                         std::size_t jobs = 1);

}  // namespace reasonsat
