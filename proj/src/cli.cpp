// Copyright 2026 The chatmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chatmut/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "chatmut/engine.hpp"

namespace chatmut {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kUnknownOperator:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDestinationNotEmpty:
    case ErrorCode::kOutputUnwritable:
    case ErrorCode::kScriptMalformed:
      return kExitUsage;
    case ErrorCode::kSourceLoadFailed:
    case ErrorCode::kMissingAgentManifest:
    case ErrorCode::kMalformedDocument:
    case ErrorCode::kIoFailure:
    case ErrorCode::kMutantLoadFailed:
      return kExitSourceLoad;
    case ErrorCode::kSuiteFailsOnOriginal:
      return kExitSuiteFailsOnOriginal;
    default:
      return kExitInternal;
  }
}

std::vector<OperatorId> parse_operator_list(const std::vector<std::string>& names) {
  std::vector<OperatorId> ids;
  for (const auto& raw : names) {
    std::stringstream ss(raw);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) continue;
      if (name == "all" || name == "ALL") {
        ids.clear();
        for (const auto& spec : operator_catalog()) ids.push_back(spec.id);
        return ids;
      }
      ids.push_back(parse_operator(name));
    }
  }
  return ids;
}

MutationConfig read_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kConfigInvalid, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

std::string outcome_line(const TestOutcome& o) {
  std::string line = o.script + "\t" + (o.verdict == Verdict::kPass ? "PASS" : "FAIL");
  if (o.verdict == Verdict::kFail) {
    line += "\tturn " + std::to_string(o.failing_turn.value_or(0)) + ": expected " + o.expected +
            ", got \"" + o.actual + "\"";
  }
  return line;
}

Json outcome_json(const TestOutcome& o) {
  Json j = {{"script", o.script}, {"verdict", o.verdict == Verdict::kPass ? "PASS" : "FAIL"}};
  if (o.verdict == Verdict::kFail) {
    j["failing_turn"] = o.failing_turn ? Json(*o.failing_turn) : Json(nullptr);
    j["expected"] = o.expected;
    j["actual"] = o.actual;
  }
  return j;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutation testing for Dialogflow agents", "chatmut"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  bool json = false;
  bool verbose = false;
  unsigned jobs = 1;
  app.add_flag("--json", json, "Emit machine output as JSON");
  app.add_flag("-v,--verbose", verbose, "Extra diagnostics on stderr");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(kToolVersion));

  // generate
  auto* gen = app.add_subcommand("generate", "Generate mutants of an agent");
  std::string config_path, source, out_dir, mode;
  std::vector<std::string> operator_names;
  std::uint64_t seed = 0;
  std::size_t max_mutants = 0;
  bool overwrite = false;
  gen->add_option("--config", config_path, "Campaign config (JSON)");
  auto* g_source = gen->add_option("--source", source, "Agent export directory");
  auto* g_out = gen->add_option("--out", out_dir, "Output directory");
  auto* g_mode = gen->add_option("--mode", mode, "full | modified")->check(CLI::IsMember({"full", "modified"}));
  auto* g_ops = gen->add_option("--operators", operator_names, "Operator names, comma separated, or 'all'");
  auto* g_seed = gen->add_option("--seed", seed, "Random seed");
  auto* g_over = gen->add_flag("--overwrite", overwrite, "Replace a non-empty output directory");
  auto* g_max = gen->add_option("--max-mutants", max_mutants, "Cap per operator");

  // test
  auto* test = app.add_subcommand("test", "Run a convo suite against one agent");
  std::string t_source, t_suite;
  test->add_option("--source", t_source, "Agent export directory")->required();
  test->add_option("--suite", t_suite, "Directory of *.convo.txt files")->required();

  // score
  auto* score = app.add_subcommand("score", "Score mutant campaigns against convo suites");
  std::vector<std::string> s_outs, s_suites;
  int depth = 3;
  score->add_option("--out", s_outs, "Campaign output directory (repeatable)")->required();
  score->add_option("--suite", s_suites, "Suite directory, one per --out or one shared")->required();
  score->add_option("--depth", depth, "Equivalence probe depth")->check(CLI::Range(1, kMaxProbeDepth));

  // probe
  auto* probe = app.add_subcommand("probe", "Probe one mutant for equivalence");
  std::string p_out, p_id, p_source, p_mutant;
  int p_depth = 3;
  auto* p_out_opt = probe->add_option("--out", p_out, "Campaign output directory");
  auto* p_id_opt = probe->add_option("--id", p_id, "Mutant id from report.json");
  auto* p_source_opt = probe->add_option("--source", p_source, "Original agent directory");
  auto* p_mutant_opt = probe->add_option("--mutant", p_mutant, "Mutant agent directory (full copy)");
  p_out_opt->needs(p_id_opt);
  p_id_opt->needs(p_out_opt);
  p_source_opt->needs(p_mutant_opt);
  p_mutant_opt->needs(p_source_opt);
  p_out_opt->excludes(p_source_opt);
  probe->add_option("--depth", p_depth, "Exploration depth")->check(CLI::Range(1, kMaxProbeDepth));

  // validate
  auto* val = app.add_subcommand("validate", "Report structural problems of an agent");
  std::string v_source;
  val->add_option("--source", v_source, "Agent export directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      MutationConfig config = config_path.empty() ? MutationConfig{} : read_config_file(config_path);
      if (g_source->count()) config.source_root = source;
      if (g_out->count()) config.output_root = out_dir;
      if (g_mode->count()) config.output_mode = parse_output_mode(mode);
      if (g_ops->count()) config.operators = parse_operator_list(operator_names);
      if (g_seed->count()) config.seed = seed;
      if (g_over->count()) config.overwrite = overwrite;
      if (g_max->count()) config.max_mutants = max_mutants;
      if (jobs_opt->count()) config.jobs = jobs;
      if (config.source_root.empty() || config.output_root.empty()) {
        err << "generate needs --source and --out (or a config providing them)\n";
        return kExitUsage;
      }
      const auto report = run_campaign(config);
      std::size_t failed = 0;
      for (const auto& row : report.rows) {
        if (!row.error) continue;
        ++failed;
        err << row.descriptor.mutant_id << ": " << *row.error << "\n";
      }
      if (verbose) err << report.rows.size() << " mutants, " << failed << " failed\n";
      if (json) {
        out << serialize_document(to_json(report));
      } else {
        out << (config.output_root / kReportFile).generic_string() << "\n";
      }
      return kExitOk;
    }

    if (test->parsed()) {
      ChatbotModel model;
      try {
        model = load_agent(t_source);
      } catch (const Error& e) {
        throw Error(ErrorCode::kSourceLoadFailed, e.what());
      }
      const auto outcomes = run_suite(model, load_suite(t_suite));
      bool all_pass = true;
      Json rows = Json::array();
      for (const auto& o : outcomes) {
        all_pass = all_pass && o.verdict == Verdict::kPass;
        if (json) {
          rows.push_back(outcome_json(o));
        } else {
          out << outcome_line(o) << "\n";
        }
      }
      if (json) out << serialize_document(rows);
      return all_pass ? kExitOk : kExitSuiteFailsOnOriginal;
    }

    if (score->parsed()) {
      if (s_suites.size() != 1 && s_suites.size() != s_outs.size()) {
        err << "give one --suite, or one per --out\n";
        return kExitUsage;
      }
      std::vector<ScoreTable> tables;
      ScoreOptions options;
      options.probe_depth = depth;
      options.jobs = jobs;
      for (std::size_t i = 0; i < s_outs.size(); ++i) {
        const auto report = read_report(s_outs[i]);
        const auto suite = load_suite(s_suites.size() == 1 ? s_suites[0] : s_suites[i]);
        tables.push_back(score_campaign(report, s_outs[i], suite, options));
        if (verbose) {
          for (const auto& m : tables.back().mutants) {
            err << m.mutant_id << "\t" << to_string(m.verdict) << (m.likely_equivalent ? "\tequivalent" : "")
                << "\n";
          }
        }
      }
      if (json) {
        Json arr = Json::array();
        for (const auto& t : tables) arr.push_back(to_json(t));
        out << serialize_document(arr);
      } else {
        out << format_score_matrix(tables);
      }
      return kExitOk;
    }

    if (probe->parsed()) {
      ChatbotModel original, mutant;
      if (!p_out.empty()) {
        const auto report = read_report(p_out);
        const MutantRow* row = nullptr;
        for (const auto& r : report.rows) {
          if (r.descriptor.mutant_id == p_id) row = &r;
        }
        if (row == nullptr) throw Error(ErrorCode::kInvalidArgument, "no mutant " + p_id + " in report");
        if (row->error) throw Error(ErrorCode::kMutantLoadFailed, p_id + " was not generated: " + *row->error);
        try {
          original = load_agent(report.source_root);
        } catch (const Error& e) {
          throw Error(ErrorCode::kSourceLoadFailed, e.what());
        }
        mutant = load_mutant(report, p_out, *row);
      } else if (!p_source.empty()) {
        try {
          original = load_agent(p_source);
        } catch (const Error& e) {
          throw Error(ErrorCode::kSourceLoadFailed, e.what());
        }
        mutant = load_agent(p_mutant);
      } else {
        err << "probe needs --out with --id, or --source with --mutant\n";
        return kExitUsage;
      }
      const auto result = equivalence_probe(original, mutant, p_depth);
      if (json) {
        Json j = {{"verdict", std::string(to_string(result.verdict))},
                  {"alphabet_size", result.alphabet_size},
                  {"alphabet_overflow", result.alphabet_overflow},
                  {"states_explored", result.states_explored},
                  {"witness", result.witness ? Json(format_convo(*result.witness)) : Json(nullptr)}};
        out << serialize_document(j);
      } else {
        out << to_string(result.verdict) << "\n";
        if (result.witness) out << format_convo(*result.witness);
      }
      if (result.alphabet_overflow) err << "alphabet capped at " << kProbeAlphabetCap << " utterances\n";
      return kExitOk;
    }

    if (val->parsed()) {
      ChatbotModel model;
      try {
        model = load_agent(v_source);
      } catch (const Error& e) {
        throw Error(ErrorCode::kSourceLoadFailed, e.what());
      }
      const auto violations = validate(model);
      if (verbose) {
        for (const auto& d : model.source->diagnostics) err << d.file << ": " << d.message << "\n";
      }
      if (json) {
        Json arr = Json::array();
        for (const auto& v : violations) {
          arr.push_back({{"kind", std::string(to_string(v.kind))}, {"location", v.loc.str()}, {"message", v.message}});
        }
        out << serialize_document(arr);
      } else {
        for (const auto& v : violations) out << to_string(v.kind) << "\t" << v.loc.str() << "\t" << v.message << "\n";
        out << violations.size() << " violation(s)\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace chatmut
