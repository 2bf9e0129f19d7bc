// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/reasonsat.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "reasonsat/analysis.hpp"
#include "reasonsat/config.hpp"
#include "reasonsat/experiment.hpp"
#include "reasonsat/lexicon.hpp"
#include "reasonsat/logistic.hpp"
#include "reasonsat/records.hpp"
#include "reasonsat/solver.hpp"
#include "reasonsat/structure.hpp"
#include "reasonsat/subject.hpp"

struct rsat_formula {
  reasonsat::Formula formula;
};

namespace {

using ojson = nlohmann::ordered_json;
namespace rs = reasonsat;

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rsat_status fail(rsat_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps library exceptions to status codes. Order matters: subclasses first.
template <typename F>
rsat_status guard(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const rs::DimacsParseError& e) {
    return fail(RSAT_E_PARSE, e.what());
  } catch (const rs::ConfigError& e) {
    return fail(RSAT_E_CONFIG, e.what());
  } catch (const rs::GenerationError& e) {
    return fail(RSAT_E_GENERATION, e.what());
  } catch (const rs::TransportError& e) {
    return fail(RSAT_E_TRANSPORT, e.what());
  } catch (const rs::RankDeficiencyError& e) {
    return fail(RSAT_E_NUMERIC, e.what());
  } catch (const rs::OracleLimitError& e) {
    return fail(RSAT_E_LIMIT, e.what());
  } catch (const rs::ContractViolation& e) {
    return fail(RSAT_E_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(RSAT_E_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RSAT_E_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RSAT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RSAT_E_INTERNAL, e.what());
  }
}

rsat_status put(char** out, const std::string& s) {
  *out = dup(s);
  return *out ? RSAT_OK : fail(RSAT_E_INTERNAL, "out of memory");
}

#define RSAT_REQUIRE(cond, what) \
  if (!(cond)) return fail(RSAT_E_INVALID_ARGUMENT, what)

ojson parse_json(const std::string& text) { return ojson::parse(text); }

ojson profile_json(const rs::Formula& f) {
  const rs::StructureProfile p = rs::compute_profile(f);
  ojson j = parse_json(rs::profile_to_json_text(p));
  j["stratum"] = rs::stratum_name(rs::classify_stratum(p));
  const auto crit = rs::criticality_check(f);
  j["critical"] = crit.per_clause;
  return j;
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != ' ' && c != '\t') {
        cur += c;
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double number(const ojson& j, double fallback) { return j.is_number() ? j.get<double>() : fallback; }

}  // namespace

extern "C" {

const char* rsat_version(void) { return "0.1.0"; }

const char* rsat_status_name(rsat_status status) {
  switch (status) {
    case RSAT_OK:
      return "ok";
    case RSAT_E_INVALID_ARGUMENT:
      return "invalid argument";
    case RSAT_E_PARSE:
      return "parse error";
    case RSAT_E_CONFIG:
      return "config error";
    case RSAT_E_GENERATION:
      return "generation failure";
    case RSAT_E_TRANSPORT:
      return "transport failure";
    case RSAT_E_IO:
      return "i/o error";
    case RSAT_E_LIMIT:
      return "limit exceeded";
    case RSAT_E_NUMERIC:
      return "numeric error";
    case RSAT_E_REPLAY_GAP:
      return "replay gap";
    case RSAT_E_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* rsat_last_error(void) { return g_last_error.c_str(); }

void rsat_string_free(char* s) { std::free(s); }

rsat_status rsat_formula_parse_dimacs(const char* text, rsat_formula** out) {
  RSAT_REQUIRE(text && out, "text and out must not be null");
  *out = nullptr;
  return guard([&] {
    *out = new rsat_formula{rs::parse_dimacs(std::string_view(text))};
    return RSAT_OK;
  });
}

void rsat_formula_free(rsat_formula* f) { delete f; }

uint32_t rsat_formula_num_vars(const rsat_formula* f) { return f ? f->formula.num_vars() : 0; }

size_t rsat_formula_num_clauses(const rsat_formula* f) { return f ? f->formula.num_clauses() : 0; }

rsat_status rsat_formula_write_dimacs(const rsat_formula* f, char** out) {
  RSAT_REQUIRE(f && out, "formula and out must not be null");
  return guard([&] { return put(out, rs::write_dimacs(f->formula)); });
}

rsat_status rsat_formula_render(const rsat_formula* f, char** out) {
  RSAT_REQUIRE(f && out, "formula and out must not be null");
  return guard([&] { return put(out, rs::render_formula(f->formula)); });
}

rsat_status rsat_solutions(const rsat_formula* f, char** out_json) {
  RSAT_REQUIRE(f && out_json, "formula and out must not be null");
  return guard([&] {
    ojson j = ojson::array();
    for (const auto& a : rs::enumerate_solutions(f->formula)) j.push_back(a.to_string());
    return put(out_json, j.dump());
  });
}

rsat_status rsat_profile(const rsat_formula* f, char** out_json) {
  RSAT_REQUIRE(f && out_json, "formula and out must not be null");
  return guard([&] { return put(out_json, profile_json(f->formula).dump()); });
}

rsat_status rsat_solve(const rsat_formula* f, const char* heuristic_json, char** out_json) {
  RSAT_REQUIRE(f && out_json, "formula and out must not be null");
  return guard([&] {
    rs::Heuristic h;
    if (heuristic_json) h = rs::heuristic_from_json(heuristic_json);
    if (h.branching == rs::BranchRule::kFixedOrder) {
      // A partial order is completed with the remaining variables ascending.
      std::vector<bool> used(f->formula.num_vars() + 1, false);
      for (rs::Var v : h.fixed_order) {
        if (v < 1 || v > f->formula.num_vars() || used[v]) {
          throw rs::ContractViolation("--order entries must be distinct variables in 1.." +
                                      std::to_string(f->formula.num_vars()));
        }
        used[v] = true;
      }
      for (rs::Var v = 1; v <= f->formula.num_vars(); ++v) {
        if (!used[v]) h.fixed_order.push_back(v);
      }
    }
    const rs::SolveTrace trace = rs::dpll_solve(f->formula, h);
    ojson j;
    j["heuristic"] = parse_json(rs::heuristic_to_json(h));
    j["trace"] = parse_json(rs::trace_to_json_text(trace));
    return put(out_json, j.dump());
  });
}

rsat_status rsat_build_prompt(const rsat_formula* f, char** out) {
  RSAT_REQUIRE(f && out, "formula and out must not be null");
  return guard([&] { return put(out, rs::build_prompt(f->formula)); });
}

rsat_status rsat_parse_response(const char* text, uint32_t num_vars, char** out_json) {
  RSAT_REQUIRE(text && out_json, "text and out must not be null");
  return guard([&] {
    const rs::ParsedResponse p = rs::parse_response(text, num_vars);
    ojson j;
    j["ok"] = p.ok();
    if (p.ok()) {
      j["response"] = {{"SOLUTION", p.response->solution},
                       {"REASON", p.response->reason_var},
                       {"EXPLANATION", p.response->explanation},
                       {"ERROR", p.response->error_var}};
    } else {
      j["failure"] = {{"kind", rs::parse_failure_name(p.failure->kind)}, {"message", p.failure->message}};
    }
    return put(out_json, j.dump());
  });
}

rsat_status rsat_tag_text(const char* text, const char* lexicon_json, char** out_json) {
  RSAT_REQUIRE(text && out_json, "text and out must not be null");
  return guard([&] {
    const rs::WordLexicon lexicon =
        lexicon_json ? rs::WordLexicon::from_json(lexicon_json) : rs::WordLexicon::standard();
    ojson j = rs::tag_text(text, lexicon);
    return put(out_json, j.dump());
  });
}

rsat_status rsat_logistic_fit_csv(const char* csv_text, const char* outcome, char** out_json) {
  RSAT_REQUIRE(csv_text && outcome && out_json, "csv, outcome and out must not be null");
  return guard([&]() -> rsat_status {
    const auto rows = split_csv(csv_text);
    if (rows.size() < 2) return fail(RSAT_E_PARSE, "CSV needs a header row and at least one data row");
    const auto& header = rows[0];
    std::size_t y_col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == outcome) y_col = j;
    }
    if (y_col == header.size()) return fail(RSAT_E_PARSE, std::string("no column named '") + outcome + "'");
    std::vector<std::string> names = {"Intercept"};
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j != y_col) names.push_back(header[j]);
    }
    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(names.size()));
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& r = rows[static_cast<std::size_t>(i) + 1];
      if (r.size() != header.size()) {
        return fail(RSAT_E_PARSE, "CSV line " + std::to_string(i + 2) + " has " + std::to_string(r.size()) +
                                      " fields, expected " + std::to_string(header.size()));
      }
      x(i, 0) = 1.0;
      Eigen::Index col = 1;
      for (std::size_t j = 0; j < r.size(); ++j) {
        char* end = nullptr;
        const double v = std::strtod(r[j].c_str(), &end);
        if (r[j].empty() || *end != '\0') {
          return fail(RSAT_E_PARSE, "CSV line " + std::to_string(i + 2) + ": '" + r[j] + "' is not a number");
        }
        if (j == y_col) {
          y[i] = v;
        } else {
          x(i, col++) = v;
        }
      }
    }
    const rs::RegressionResult fit = rs::logistic_fit(x, y, names);
    ojson j;
    j["n"] = fit.n;
    j["converged"] = fit.converged;
    j["separation"] = fit.separation;
    j["iterations"] = fit.iterations;
    j["log_likelihood"] = fit.log_likelihood;
    j["warning"] = fit.warning;
    j["coefficients"] = ojson::array();
    for (const auto& c : fit.coefficients) {
      j["coefficients"].push_back({{"term", c.name},
                                   {"estimate", c.estimate},
                                   {"std_error", c.std_error},
                                   {"z", c.z},
                                   {"p_value", c.p_value},
                                   {"stars", rs::significance_stars(c.p_value)}});
    }
    return put(out_json, j.dump());
  });
}

rsat_status rsat_report(const char* records_path, const char* options_json, const char* out_dir,
                        char** out_text) {
  RSAT_REQUIRE(records_path && out_dir && out_text, "records path, out dir and out must not be null");
  return guard([&]() -> rsat_status {
    rs::AnalysisOptions options;
    if (options_json) {
      const auto j = nlohmann::json::parse(options_json);
      for (const auto& item : j.items()) {
        const auto& k = item.key();
        const auto& v = item.value();
        if (k == "filter") {
          const auto f = rs::parse_validity_filter(v.get<std::string>());
          if (!f) throw rs::ConfigError("filter must be parseable or correct-only");
          options.filter = *f;
        } else if (k == "backtrack_source") {
          const auto s = rs::parse_backtrack_source(v.get<std::string>());
          if (!s) throw rs::ConfigError("backtrack_source must be response or trace");
          options.backtrack = *s;
        } else if (k == "nd_threshold") {
          options.nd_threshold = number(v, options.nd_threshold);
        } else if (k == "per_stratum") {
          options.per_stratum = v.get<bool>();
        } else {
          throw rs::ConfigError("unknown report option '" + k + "'");
        }
      }
    }
    if (!std::filesystem::exists(records_path)) {
      return fail(RSAT_E_IO, std::string("records file ") + records_path + " does not exist");
    }
    std::vector<rs::RunRecord> records;
    try {
      records = rs::read_records(records_path);
    } catch (const std::runtime_error& e) {
      return fail(RSAT_E_PARSE, e.what());
    }
    const rs::AnalysisReport report = rs::analyze(records, options);
    rs::export_report(report, out_dir);
    return put(out_text, rs::render_report(report).text);
  });
}

rsat_status rsat_config_resolve(const char* config_json, const char* overrides_json, char** out_json) {
  RSAT_REQUIRE(out_json, "out must not be null");
  return guard([&] {
    rs::ExperimentConfig c = config_json ? rs::config_from_json(config_json) : rs::default_config();
    if (overrides_json) c = rs::merge_config_json(std::move(c), overrides_json);
    rs::validate(c);
    return put(out_json, rs::config_to_json(c));
  });
}

rsat_status rsat_generate(const char* config_json, char** out_summary_json) {
  RSAT_REQUIRE(config_json && out_summary_json, "config and out must not be null");
  return guard([&] {
    const rs::ExperimentConfig c = rs::config_from_json(config_json);
    const rs::Dataset d = rs::generate_dataset(c);
    return put(out_summary_json, rs::write_dataset(c, d).summary_json);
  });
}

rsat_status rsat_run(const char* config_json, rsat_progress_fn progress, void* user,
                     char** out_summary_json) {
  RSAT_REQUIRE(config_json && out_summary_json, "config and out must not be null");
  return guard([&]() -> rsat_status {
    const rs::ExperimentConfig c = rs::config_from_json(config_json);
    rs::ProgressFn fn;
    if (progress) {
      fn = [&](const rs::ProgressInfo& p) {
        progress(p.done, p.total, p.parse_failures, p.transport_failures, user);
      };
    }
    const rs::RunSummary s = rs::run_experiment(c, fn);
    const rsat_status st = put(out_summary_json, s.summary_json);
    if (st != RSAT_OK) return st;
    if (s.transport_failures > 0) {
      return fail(RSAT_E_TRANSPORT, std::to_string(s.transport_failures) +
                                        " runs ended in transport failure; rerun to retry them");
    }
    if (!s.replay_gaps.empty()) {
      return fail(RSAT_E_REPLAY_GAP, std::to_string(s.replay_gaps.size()) +
                                         " runs missing from the replay file (see replay_gaps.txt)");
    }
    return RSAT_OK;
  });
}

}  // extern "C"
