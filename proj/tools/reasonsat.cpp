// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0
//
// reasonsat command-line front end. Talks to the library only through the
// C interface in reasonsat.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reasonsat/reasonsat.h"

namespace {

using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kGeneration = 3, kTransport = 4, kParse = 5, kReplayGap = 6 };

int exit_code(rsat_status s) {
  switch (s) {
    case RSAT_OK:
      return kOk;
    case RSAT_E_CONFIG:
    case RSAT_E_INVALID_ARGUMENT:
      return kConfig;
    case RSAT_E_GENERATION:
      return kGeneration;
    case RSAT_E_TRANSPORT:
      return kTransport;
    case RSAT_E_PARSE:
      return kParse;
    case RSAT_E_REPLAY_GAP:
      return kReplayGap;
    default:
      return kOther;
  }
}

// Owns a char* handed out by the library.
class Text {
 public:
  Text() = default;
  Text(const Text&) = delete;
  Text& operator=(const Text&) = delete;
  ~Text() { rsat_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }
  json parsed() const { return json::parse(str()); }

 private:
  char* p_ = nullptr;
};

class Formula {
 public:
  Formula() = default;
  Formula(const Formula&) = delete;
  Formula& operator=(const Formula&) = delete;
  ~Formula() { rsat_formula_free(f_); }
  rsat_formula** out() { return &f_; }
  const rsat_formula* get() const { return f_; }

 private:
  rsat_formula* f_ = nullptr;
};

int report_error(const std::string& what, rsat_status s) {
  std::cerr << "reasonsat: " << what << ": " << rsat_last_error() << "\n";
  return exit_code(s);
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int load_formula(const std::string& path, Formula& f) {
  const auto text = slurp(path);
  if (!text) {
    std::cerr << "reasonsat: cannot read " << path << "\n";
    return kOther;
  }
  const rsat_status s = rsat_formula_parse_dimacs(text->c_str(), f.out());
  if (s != RSAT_OK) return report_error(path, s);
  return kOk;
}

std::string literal(int code) { return (code < 0 ? "¬x" : "x") + std::to_string(code < 0 ? -code : code); }

std::string event_line(const json& e) {
  const std::string kind = e["kind"];
  std::string line = "  [L" + std::to_string(e["level"].get<int>()) + "] " + kind;
  const auto var_value = [&] {
    return " x" + std::to_string(e["var"].get<int>()) + "=" + (e["value"].get<bool>() ? "T" : "F");
  };
  if (kind == "DECIDE" || kind == "BACKTRACK") line += var_value();
  if (kind == "PROPAGATE_UNIT") line += var_value() + " (clause " + std::to_string(e["clause"].get<int>()) + ")";
  if (kind == "PROPAGATE_RESOLUTION") {
    line += var_value() + " (clauses " + std::to_string(e["clauses"][0].get<int>()) + "&" +
            std::to_string(e["clauses"][1].get<int>()) + ")";
  }
  if (kind == "CONFLICT") line += " clause " + std::to_string(e["clause"].get<int>());
  return line;
}

void print_profile(const json& p) {
  std::cout << "stratum: " << p["stratum"].get<std::string>() << "\n";
  std::cout << "solutions: " << p["solution_count"].get<std::uint64_t>();
  if (!p["unique_solution"].is_null()) std::cout << " (unique: " << p["unique_solution"].get<std::string>() << ")";
  std::cout << "\n";
  std::cout << "unit clauses:";
  if (p["unit_clause_vars"].empty()) std::cout << " none";
  for (const auto& u : p["unit_clause_vars"]) {
    std::cout << " " << literal(u["value"].get<bool>() ? u["var"].get<int>() : -u["var"].get<int>());
  }
  std::cout << "\nresolution units:";
  if (p["resolution_units"].empty()) std::cout << " none";
  for (const auto& r : p["resolution_units"]) {
    std::cout << " " << literal(r["value"].get<bool>() ? r["var"].get<int>() : -r["var"].get<int>())
              << " (clauses " << r["clauses"][0].get<int>() << "&" << r["clauses"][1].get<int>() << ")";
  }
  std::cout << "\ndegrees:";
  int v = 1;
  for (const auto& d : p["degrees"]) std::cout << " x" << v++ << ":" << d.get<int>();
  std::cout << "\nmax degree:";
  for (const auto& m : p["max_degree_vars"]) std::cout << " x" << m.get<int>();
  std::cout << "\nall clauses critical: " << (p["all_clauses_critical"].get<bool>() ? "yes" : "no");
  std::cout << " [";
  bool first = true;
  for (const auto& c : p["critical"]) {
    std::cout << (first ? "" : " ") << (c.get<bool>() ? "C" : "-");
    first = false;
  }
  std::cout << "]\nall variables occur: " << (p["all_vars_occur"].get<bool>() ? "yes" : "no") << "\n";
}

struct ConfigFlags {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
};

// Reads the config file (if any), applies command-line overrides and returns
// the validated effective configuration text.
int resolve_config(const ConfigFlags& flags, json overrides, std::string& effective) {
  std::optional<std::string> base;
  if (!flags.config_path.empty()) {
    base = slurp(flags.config_path);
    if (!base) {
      std::cerr << "reasonsat: cannot read config " << flags.config_path << "\n";
      return kConfig;
    }
  }
  if (!flags.out.empty()) overrides["output_dir"] = flags.out;
  if (flags.seed) overrides["seed"] = *flags.seed;
  if (flags.jobs) overrides["jobs"] = *flags.jobs;
  const std::string ov = overrides.dump();
  Text out;
  const rsat_status s = rsat_config_resolve(base ? base->c_str() : nullptr, ov.c_str(), out.out());
  if (s != RSAT_OK) return report_error("config", s);
  effective = out.str();
  return kOk;
}

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path, "Experiment config file (JSON)");
  cmd->add_option("-o,--out", flags.out, "Experiment directory (overrides output_dir)");
  cmd->add_option("--seed", flags.seed, "Master seed (overrides seed)");
  cmd->add_option("-j,--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void on_progress(size_t done, size_t total, size_t parse_failures, size_t transport_failures, void*) {
  if (done == total || done % 500 == 0) {
    std::fprintf(stderr, "\rruns %zu/%zu  parse failures %zu  transport failures %zu", done, total,
                 parse_failures, transport_failures);
    if (done == total) std::fprintf(stderr, "\n");
    std::fflush(stderr);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured SAT instances, traced DPLL, reason-why elicitation and analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rsat_version()));
  int code = kOk;

  // gen
  ConfigFlags gen_flags;
  std::vector<std::string> gen_strata;
  std::optional<std::size_t> gen_count, gen_shuffles;
  auto* gen = app.add_subcommand("gen", "Generate a stratified battery and its manifest");
  add_config_flags(gen, gen_flags);
  gen->add_option("--strata", gen_strata, "Strata to generate (unit, resolution, neither)")->delimiter(',');
  gen->add_option("--count", gen_count, "Base instances per stratum")->check(CLI::PositiveNumber);
  gen->add_option("--shuffles", gen_shuffles, "Shuffled variants per instance")->check(CLI::PositiveNumber);
  gen->callback([&] {
    json ov = json::object();
    if (!gen_strata.empty()) ov["strata"] = gen_strata;
    if (gen_count || gen_shuffles) {
      ov["battery"] = json::object();
      if (gen_count) ov["battery"]["per_stratum"] = *gen_count;
      if (gen_shuffles) ov["battery"]["shuffles"] = *gen_shuffles;
    }
    std::string cfg;
    if ((code = resolve_config(gen_flags, ov, cfg)) != kOk) return;
    Text summary;
    const rsat_status s = rsat_generate(cfg.c_str(), summary.out());
    if (s != RSAT_OK) {
      code = report_error("gen", s);
      return;
    }
    const json j = summary.parsed();
    const std::string dir = json::parse(cfg)["output_dir"];
    std::cout << "wrote " << j["instances"].get<std::size_t>() << " base instances, " << j["runs"].get<std::size_t>()
              << " run slots to " << dir << "\n";
    for (const auto& st : j["strata"]) {
      char rate[32];
      std::snprintf(rate, sizeof rate, "%.5f", st["acceptance_rate"].get<double>());
      std::cout << "  " << st["stratum"].get<std::string>() << ": " << st["instances"].get<std::size_t>()
                << " instances, " << st["attempts"].get<std::size_t>() << " draws, acceptance rate " << rate
                << ", duplicates rejected " << st["duplicate_rejections"].get<std::size_t>() << "\n";
    }
  });

  // solve
  std::string solve_file;
  std::vector<int> solve_order;
  std::string solve_branching = "random", solve_polarity = "random";
  bool solve_unit = true, solve_resolution = false, solve_json = false;
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "Solve one DIMACS file and print the trace");
  solve->add_option("file", solve_file, "DIMACS CNF file")->required();
  solve->add_option("--order", solve_order, "Fixed branching order (remaining variables follow ascending)")
      ->delimiter(',');
  solve->add_option("--branching", solve_branching, "random, max-degree or fixed-order")
      ->check(CLI::IsMember({"random", "max-degree", "fixed-order"}));
  solve->add_option("--polarity", solve_polarity, "random or true-first")
      ->check(CLI::IsMember({"random", "true-first"}));
  solve->add_flag("--unit-prop,!--no-unit-prop", solve_unit, "Unit propagation (default on)");
  solve->add_flag("--resolution", solve_resolution, "Apply simple resolution at level 0");
  solve->add_option("--seed", solve_seed, "Seed for random branching and polarity");
  solve->add_flag("--json", solve_json, "Print the raw JSON result");
  solve->callback([&] {
    Formula f;
    if ((code = load_formula(solve_file, f)) != kOk) return;
    json h;
    h["branching"] = solve_order.empty() ? solve_branching : "fixed-order";
    h["polarity"] = solve_polarity;
    h["fixed_order"] = solve_order;
    h["unit_propagation"] = solve_unit;
    h["resolution_preprocessing"] = solve_resolution;
    h["seed"] = solve_seed;
    const std::string hs = h.dump();
    Text result, profile;
    rsat_status s = rsat_solve(f.get(), hs.c_str(), result.out());
    if (s == RSAT_OK) s = rsat_profile(f.get(), profile.out());
    if (s != RSAT_OK) {
      code = report_error("solve", s);
      return;
    }
    const json r = result.parsed();
    if (solve_json) {
      json both = {{"profile", profile.parsed()}, {"solve", r}};
      std::cout << both.dump(2) << "\n";
      return;
    }
    print_profile(profile.parsed());
    const json& t = r["trace"];
    std::cout << "events:\n";
    for (const auto& e : t["events"]) std::cout << event_line(e) << "\n";
    std::cout << "decisions: " << t["decisions"].get<std::size_t>() << ", conflicts: " << t["conflicts"].get<std::size_t>()
              << "\n";
    std::cout << "backtracked:";
    if (t["backtracked_vars"].empty()) std::cout << " none";
    for (const auto& v : t["backtracked_vars"]) std::cout << " x" << v.get<int>();
    std::cout << "\n";
    if (!t["satisfiable"].get<bool>()) {
      std::cout << "UNSAT (explored " << t["conflicts"].get<std::size_t>() << " branches)\n";
      return;
    }
    std::cout << "deduction order:";
    bool first = true;
    for (const auto& d : t["deduction_order"]) {
      std::cout << (first ? " " : " -> ") << literal(d.get<int>());
      first = false;
    }
    std::cout << "\nsolution: " << t["final_assignment"].get<std::string>() << "\n";
  });

  // classify
  std::string classify_file;
  bool classify_json = false;
  auto* classify = app.add_subcommand("classify", "Print the structure profile and stratum of a DIMACS file");
  classify->add_option("file", classify_file, "DIMACS CNF file")->required();
  classify->add_flag("--json", classify_json, "Print the raw JSON profile");
  classify->callback([&] {
    Formula f;
    if ((code = load_formula(classify_file, f)) != kOk) return;
    Text profile, rendered;
    rsat_status s = rsat_profile(f.get(), profile.out());
    if (s == RSAT_OK) s = rsat_formula_render(f.get(), rendered.out());
    if (s != RSAT_OK) {
      code = report_error("classify", s);
      return;
    }
    if (classify_json) {
      std::cout << profile.parsed().dump(2) << "\n";
      return;
    }
    std::cout << "formula: " << rendered.str() << "\n";
    print_profile(profile.parsed());
  });

  // run
  ConfigFlags run_flags;
  std::string run_backend, run_replay;
  std::optional<std::size_t> run_max;
  auto* run = app.add_subcommand("run", "Execute (or resume) the runs of a generated dataset");
  add_config_flags(run, run_flags);
  run->add_option("--backend", run_backend, "synthetic, llm or replay")
      ->check(CLI::IsMember({"synthetic", "llm", "replay"}));
  run->add_option("--replay", run_replay, "Transcript file for the replay backend (implies --backend replay)");
  run->add_option("--max-runs", run_max, "Stop after this many runs");
  run->callback([&] {
    json ov = json::object();
    if (!run_replay.empty()) {
      ov["backend"]["kind"] = "replay";
      ov["backend"]["replay"]["path"] = run_replay;
    }
    if (!run_backend.empty()) ov["backend"]["kind"] = run_backend;
    if (run_max) ov["max_runs"] = *run_max;
    std::string cfg;
    if ((code = resolve_config(run_flags, ov, cfg)) != kOk) return;
    Text summary;
    const rsat_status s = rsat_run(cfg.c_str(), on_progress, nullptr, summary.out());
    if (!summary.str().empty()) {
      const json j = summary.parsed();
      std::cout << "runs: " << j["total"] << " total, " << j["already_complete"] << " already complete, "
                << j["executed"] << " executed, " << j["remaining"] << " remaining\n"
                << "outcomes: " << j["ok"] << " ok, " << j["parse_failures"] << " parse failures, "
                << j["transport_failures"] << " transport failures, " << j["replay_gaps"] << " replay gaps\n";
    }
    if (s != RSAT_OK) code = report_error("run", s);
  });

  // fit
  std::string fit_file, fit_outcome;
  auto* fit = app.add_subcommand("fit", "Logistic regression on a numeric CSV file");
  fit->add_option("file", fit_file, "CSV with a header row")->required();
  fit->add_option("--outcome", fit_outcome, "Name of the 0/1 outcome column")->required();
  fit->callback([&] {
    const auto text = slurp(fit_file);
    if (!text) {
      std::cerr << "reasonsat: cannot read " << fit_file << "\n";
      code = kOther;
      return;
    }
    Text out;
    const rsat_status s = rsat_logistic_fit_csv(text->c_str(), fit_outcome.c_str(), out.out());
    if (s != RSAT_OK) {
      code = report_error("fit", s);
      return;
    }
    const json j = out.parsed();
    std::printf("N = %zu, converged: %s, log-likelihood %.6f\n", j["n"].get<std::size_t>(),
                j["converged"].get<bool>() ? "yes" : "no", j["log_likelihood"].get<double>());
    if (!j["warning"].get<std::string>().empty()) std::printf("warning: %s\n", j["warning"].get<std::string>().c_str());
    std::printf("%-24s %12s %12s %10s %12s\n", "term", "estimate", "std.error", "z", "p");
    for (const auto& c : j["coefficients"]) {
      std::printf("%-24s %12.6f %12.6f %10.3f %12.3g %s\n", c["term"].get<std::string>().c_str(),
                  c["estimate"].get<double>(), c["std_error"].get<double>(), c["z"].get<double>(),
                  c["p_value"].get<double>(), c["stars"].get<std::string>().c_str());
    }
  });

  // tag
  std::vector<std::string> tag_words;
  std::string tag_file, tag_lexicon;
  auto* tag = app.add_subcommand("tag", "Tag text with reason-language categories");
  tag->add_option("text", tag_words, "Text to tag (joined with spaces)");
  tag->add_option("--file", tag_file, "Tag each line of this file instead");
  tag->add_option("--lexicon", tag_lexicon, "Lexicon JSON file (default: built-in categories)");
  tag->callback([&] {
    std::optional<std::string> lexicon;
    if (!tag_lexicon.empty() && !(lexicon = slurp(tag_lexicon))) {
      std::cerr << "reasonsat: cannot read " << tag_lexicon << "\n";
      code = kOther;
      return;
    }
    std::vector<std::string> lines;
    if (!tag_file.empty()) {
      const auto text = slurp(tag_file);
      if (!text) {
        std::cerr << "reasonsat: cannot read " << tag_file << "\n";
        code = kOther;
        return;
      }
      std::istringstream in(*text);
      for (std::string l; std::getline(in, l);) lines.push_back(l);
    } else {
      std::string joined;
      for (const auto& w : tag_words) joined += (joined.empty() ? "" : " ") + w;
      lines.push_back(joined);
    }
    for (const auto& l : lines) {
      Text out;
      const rsat_status s = rsat_tag_text(l.c_str(), lexicon ? lexicon->c_str() : nullptr, out.out());
      if (s != RSAT_OK) {
        code = report_error("tag", s);
        return;
      }
      std::string cats;
      for (const auto& c : out.parsed()) cats += (cats.empty() ? "" : ",") + c.get<std::string>();
      std::cout << (cats.empty() ? "-" : cats) << "\n";
    }
  });

  // report
  std::string rep_records, rep_out, rep_filter, rep_bt;
  std::optional<double> rep_nd;
  bool rep_per_stratum = false, rep_quiet = false;
  ConfigFlags rep_flags;
  auto* report = app.add_subcommand("report", "Usage rates, reason regressions and language tables");
  report->add_option("-c,--config", rep_flags.config_path, "Experiment config (its output_dir and analysis options)");
  report->add_option("--records", rep_records, "Records file (default <output_dir>/records.jsonl)");
  report->add_option("-o,--out", rep_flags.out, "Experiment directory (overrides output_dir)");
  report->add_option("--report-dir", rep_out, "Report directory (default <output_dir>/report)");
  report->add_option("--filter", rep_filter, "parseable or correct-only")
      ->check(CLI::IsMember({"parseable", "correct-only"}));
  report->add_option("--backtrack-source", rep_bt, "response (ERROR field) or trace")
      ->check(CLI::IsMember({"response", "trace"}));
  report->add_option("--nd-threshold", rep_nd, "|z| below which a cell prints as (n.d.)");
  report->add_flag("--per-stratum", rep_per_stratum, "Also fit each stratum separately");
  report->add_flag("-q,--quiet", rep_quiet, "Do not echo the report");
  report->callback([&] {
    std::string cfg_text;
    if ((code = resolve_config(rep_flags, json::object(), cfg_text)) != kOk) return;
    const json cfg = json::parse(cfg_text);
    json options = cfg["analysis"];
    if (!rep_filter.empty()) options["filter"] = rep_filter;
    if (!rep_bt.empty()) options["backtrack_source"] = rep_bt;
    if (rep_nd) options["nd_threshold"] = *rep_nd;
    if (rep_per_stratum) options["per_stratum"] = true;
    const std::string dir = cfg["output_dir"];
    const std::string records = rep_records.empty() ? dir + "/records.jsonl" : rep_records;
    const std::string out_dir = rep_out.empty() ? dir + "/report" : rep_out;
    const std::string opts = options.dump();
    Text text;
    const rsat_status s = rsat_report(records.c_str(), opts.c_str(), out_dir.c_str(), text.out());
    if (s != RSAT_OK) {
      code = report_error("report", s);
      return;
    }
    if (!rep_quiet) std::cout << text.str();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "reasonsat: unexpected library output: " << e.what() << "\n";
    return kOther;
  }
  return code;
}
