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

#include "chatmut/engine.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "chatmut/digest.hpp"
#include "parallel.hpp"

namespace chatmut {

namespace fs = std::filesystem;

std::vector<OperatorId> MutationConfig::selected_operators() const {
  if (operators) return *operators;
  std::vector<OperatorId> all;
  for (const auto& spec : operator_catalog()) all.push_back(spec.id);
  return all;
}

std::string_view to_string(OutputMode mode) {
  return mode == OutputMode::kFull ? "full" : "modified";
}

OutputMode parse_output_mode(std::string_view text) {
  if (text == "full") return OutputMode::kFull;
  if (text == "modified" || text == "modified-only") return OutputMode::kModifiedOnly;
  throw Error(ErrorCode::kConfigInvalid, "output mode must be 'full' or 'modified', got '" +
                                             std::string(text) + "'");
}

MutationConfig config_from_json(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigInvalid, "config must be a JSON object");
  MutationConfig config;
  auto path_of = [&](const char* key) -> fs::path {
    if (!j.contains(key)) return {};
    if (!j[key].is_string()) throw Error(ErrorCode::kConfigInvalid, std::string(key) + " must be a string");
    fs::path p = j[key].get<std::string>();
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  try {
    config.source_root = path_of("source_root");
    config.output_root = path_of("output_root");
    if (j.contains("output_mode")) {
      config.output_mode = parse_output_mode(j.at("output_mode").get<std::string>());
    }
    if (j.contains("operators")) {
      const auto& ops = j.at("operators");
      if (ops.is_string()) {
        if (ops.get<std::string>() != "all" && ops.get<std::string>() != "ALL") {
          throw Error(ErrorCode::kConfigInvalid, "operators must be \"all\" or a list");
        }
      } else {
        std::vector<OperatorId> ids;
        for (const auto& name : ops) {
          auto id = find_operator(name.get<std::string>());
          if (!id) throw Error(ErrorCode::kConfigInvalid, "unknown operator " + name.get<std::string>());
          ids.push_back(*id);
        }
        config.operators = std::move(ids);
      }
    }
    config.seed = j.value("seed", std::uint64_t{0});
    config.overwrite = j.value("overwrite", false);
    if (j.contains("max_mutants") && !j.at("max_mutants").is_null()) {
      config.max_mutants = j.at("max_mutants").get<std::size_t>();
    }
    config.jobs = j.value("jobs", 1u);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }
  return config;
}

Json to_json(const MutationConfig& config) {
  Json j = {
      {"source_root", config.source_root.generic_string()},
      {"output_root", config.output_root.generic_string()},
      {"output_mode", std::string(to_string(config.output_mode))},
      {"seed", config.seed},
      {"overwrite", config.overwrite},
      {"jobs", config.jobs},
  };
  if (config.operators) {
    Json ops = Json::array();
    for (auto id : *config.operators) ops.push_back(std::string(to_string(id)));
    j["operators"] = ops;
  } else {
    j["operators"] = "all";
  }
  j["max_mutants"] = config.max_mutants ? Json(*config.max_mutants) : Json(nullptr);
  return j;
}

std::string source_digest(const SourceMap& source) {
  std::string listing;
  for (const auto& [rel, file] : source.files) {
    listing += rel;
    listing += '\0';
    listing += sha256_hex(source.content(rel));
    listing += '\n';
  }
  return sha256_hex(listing);
}

Json to_json(const MutationReport& report) {
  Json rows = Json::array();
  Json per_operator = Json::object();
  Json per_category = Json::object();
  for (const auto& spec : operator_catalog()) {
    per_category[std::string(to_string(spec.category))] = 0;
  }
  for (auto id : report.operators) per_operator[std::string(to_string(id))] = 0;
  std::size_t failed = 0;

  for (const auto& row : report.rows) {
    Json r = to_json(row.descriptor);
    r["directory"] = row.directory;
    Json written = Json::array();
    for (const auto& f : row.files_written) written.push_back({{"path", f.path}, {"digest", f.digest}});
    r["files_written"] = written;
    r["files_removed"] = row.files_removed;
    if (row.error) {
      r["error"] = *row.error;
      ++failed;
    }
    rows.push_back(std::move(r));
    per_operator[std::string(to_string(row.descriptor.op))] =
        per_operator[std::string(to_string(row.descriptor.op))].get<std::size_t>() + 1;
    const auto cat = std::string(to_string(operator_spec(row.descriptor.op).category));
    per_category[cat] = per_category[cat].get<std::size_t>() + 1;
  }

  return Json{
      {"tool_version", report.tool_version},
      {"seed", report.seed},
      {"source_root", report.source_root},
      {"source_digest", report.source_digest},
      {"output_mode", std::string(to_string(report.output_mode))},
      {"mutants", rows},
      {"summary",
       {{"operators", per_operator},
        {"categories", per_category},
        {"total", report.rows.size()},
        {"failed", failed}}},
  };
}

MutationReport report_from_json(const Json& j) {
  try {
    MutationReport report;
    report.tool_version = j.at("tool_version").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.source_root = j.at("source_root").get<std::string>();
    report.source_digest = j.at("source_digest").get<std::string>();
    report.output_mode = parse_output_mode(j.at("output_mode").get<std::string>());
    for (const auto& [name, count] : j.at("summary").at("operators").items()) {
      report.operators.push_back(parse_operator(name));
    }
    std::sort(report.operators.begin(), report.operators.end());
    for (const auto& r : j.at("mutants")) {
      MutantRow row;
      row.descriptor = descriptor_from_json(r);
      row.directory = r.at("directory").get<std::string>();
      for (const auto& f : r.at("files_written")) {
        row.files_written.push_back({f.at("path").get<std::string>(), f.at("digest").get<std::string>()});
      }
      row.files_removed = r.at("files_removed").get<std::vector<std::string>>();
      if (r.contains("error")) row.error = r.at("error").get<std::string>();
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed report: ") + e.what());
  }
}

MutationReport read_report(const fs::path& output_root) {
  const auto path = output_root / kReportFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  try {
    return report_from_json(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, path.string() + ": " + e.what());
  }
}

namespace {

std::string normalized_path(const fs::path& p) {
  auto abs = fs::absolute(p).lexically_normal();
  if (abs.filename().empty()) abs = abs.parent_path();
  return abs.generic_string();
}

bool is_within(const std::string& inner, const std::string& outer) {
  return inner == outer || (inner.size() > outer.size() && inner.compare(0, outer.size(), outer) == 0 &&
                            inner[outer.size()] == '/');
}

void check_config(const MutationConfig& config) {
  if (config.source_root.empty()) throw Error(ErrorCode::kConfigInvalid, "source_root is required");
  if (config.output_root.empty()) throw Error(ErrorCode::kConfigInvalid, "output_root is required");
  const auto src = normalized_path(config.source_root);
  const auto out = normalized_path(config.output_root);
  if (is_within(src, out) || is_within(out, src)) {
    throw Error(ErrorCode::kConfigInvalid, "source_root and output_root must not overlap");
  }
}

void prepare_output(const MutationConfig& config) {
  std::error_code ec;
  if (fs::exists(config.output_root, ec) && !fs::is_empty(config.output_root, ec)) {
    if (!config.overwrite) {
      throw Error(ErrorCode::kOutputUnwritable,
                  config.output_root.string() + " is not empty (set overwrite to replace it)");
    }
    fs::remove_all(config.output_root, ec);
    if (ec) throw Error(ErrorCode::kOutputUnwritable, config.output_root.string() + ": " + ec.message());
  }
  fs::create_directories(config.output_root, ec);
  if (ec) throw Error(ErrorCode::kOutputUnwritable, config.output_root.string() + ": " + ec.message());
}

}  // namespace

MutationReport run_campaign(const MutationConfig& config) {
  check_config(config);
  ChatbotModel model;
  try {
    model = load_agent(config.source_root);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSourceLoadFailed, e.what());
  }
  prepare_output(config);

  MutationReport report;
  report.seed = config.seed;
  report.source_root = normalized_path(config.source_root);
  report.source_digest = source_digest(*model.source);
  report.output_mode = config.output_mode;
  report.operators = config.selected_operators();

  for (auto op : report.operators) {
    auto descriptors = enumerate_targets(model, op, config.seed);
    if (config.max_mutants && descriptors.size() > *config.max_mutants) {
      descriptors.resize(*config.max_mutants);
    }
    for (auto& d : descriptors) {
      MutantRow row;
      row.directory = d.mutant_id;
      row.descriptor = std::move(d);
      report.rows.push_back(std::move(row));
    }
  }

  internal::parallel_for(report.rows.size(), config.jobs, [&](std::size_t i) {
    auto& row = report.rows[i];
    try {
      auto mutant = apply(model, row.descriptor);
      auto manifest = save_agent(mutant.model, config.output_root / row.directory,
                                 config.output_mode, mutant.dirty);
      row.files_written = std::move(manifest.files);
      row.files_removed = std::move(manifest.removed);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  try {
    std::ofstream out(config.output_root / kReportFile, std::ios::binary | std::ios::trunc);
    out << serialize_document(to_json(report));
    if (!out) throw Error(ErrorCode::kOutputUnwritable, "cannot write report.json");
  } catch (const std::ios_base::failure& e) {
    throw Error(ErrorCode::kOutputUnwritable, e.what());
  }
  return report;
}

// ---------------------------------------------------------------------------

std::string_view to_string(MutantVerdict verdict) {
  switch (verdict) {
    case MutantVerdict::kKilled: return "KILLED";
    case MutantVerdict::kSurvived: return "SURVIVED";
    case MutantVerdict::kInvalid: return "INVALID";
  }
  return "INVALID";
}

std::optional<int> CategoryScore::percent() const {
  const auto excluded = equivalent + invalid;
  if (generated <= excluded) return std::nullopt;
  const auto denom = generated - excluded;
  return static_cast<int>((200 * killed + denom) / (2 * denom));
}

std::string CategoryScore::cell() const {
  if (generated == 0) return "-";
  std::string out = std::to_string(killed) + "/" + std::to_string(equivalent) + "/" +
                    std::to_string(generated);
  auto p = percent();
  out += p ? " (" + std::to_string(*p) + "%)" : " (-)";
  return out;
}

ChatbotModel load_mutant(const MutationReport& report, const fs::path& output_root,
                         const MutantRow& row) {
  const auto dir = output_root / row.directory;
  if (report.output_mode == OutputMode::kFull) return load_agent(dir);
  return load_overlay(report.source_root, dir);
}

ScoreTable score_campaign(const MutationReport& report, const fs::path& output_root,
                          const ConvoSuite& suite, const ScoreOptions& options) {
  ChatbotModel original;
  try {
    original = load_agent(report.source_root);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSourceLoadFailed, e.what());
  }

  std::string failing;
  for (const auto& outcome : run_suite(original, suite)) {
    if (outcome.verdict == Verdict::kPass) continue;
    if (!failing.empty()) failing += ", ";
    failing += outcome.script;
  }
  if (!failing.empty()) {
    throw Error(ErrorCode::kSuiteFailsOnOriginal, "failing on the original agent: " + failing);
  }

  ScoreTable table;
  table.agent = original.name;
  table.mutants.resize(report.rows.size());
  internal::parallel_for(report.rows.size(), options.jobs, [&](std::size_t i) {
    const auto& row = report.rows[i];
    auto& score = table.mutants[i];
    score.mutant_id = row.descriptor.mutant_id;
    score.op = row.descriptor.op;
    if (row.error) {
      score.verdict = MutantVerdict::kInvalid;
      score.error = *row.error;
      return;
    }
    try {
      auto mutant = load_mutant(report, output_root, row);
      for (const auto& outcome : run_suite(mutant, suite)) {
        if (outcome.verdict == Verdict::kFail) score.failing_tests.push_back(outcome.script);
      }
      if (!score.failing_tests.empty()) {
        score.verdict = MutantVerdict::kKilled;
        return;
      }
      score.verdict = MutantVerdict::kSurvived;
      auto probe = equivalence_probe(original, mutant, options.probe_depth);
      score.likely_equivalent = probe.verdict == ProbeVerdict::kLikelyEquivalent;
      score.witness = std::move(probe.witness);
    } catch (const std::exception& e) {
      score.verdict = MutantVerdict::kInvalid;
      score.error = e.what();
      score.failing_tests.clear();
    }
  });

  for (const auto& m : table.mutants) {
    auto& cat = table.categories[static_cast<std::size_t>(operator_spec(m.op).category)];
    for (auto* c : {&cat, &table.total}) {
      ++c->generated;
      if (m.verdict == MutantVerdict::kKilled) ++c->killed;
      if (m.verdict == MutantVerdict::kInvalid) ++c->invalid;
      if (m.verdict == MutantVerdict::kSurvived && m.likely_equivalent) ++c->equivalent;
    }
  }
  return table;
}

namespace {

Json category_json(const CategoryScore& c) {
  auto p = c.percent();
  return Json{{"killed", c.killed},
              {"equivalent", c.equivalent},
              {"generated", c.generated},
              {"invalid", c.invalid},
              {"percent_killed", p ? Json(*p) : Json(nullptr)}};
}

}  // namespace

Json to_json(const ScoreTable& table) {
  Json categories = Json::object();
  for (std::size_t c = 0; c < kOperatorCategoryCount; ++c) {
    categories[std::string(category_label(static_cast<OperatorCategory>(c)))] =
        category_json(table.categories[c]);
  }
  Json mutants = Json::array();
  for (const auto& m : table.mutants) {
    Json row = {{"mutant_id", m.mutant_id},
                {"operator", std::string(to_string(m.op))},
                {"verdict", std::string(to_string(m.verdict))},
                {"likely_equivalent", m.likely_equivalent},
                {"failing_tests", m.failing_tests}};
    if (!m.error.empty()) row["error"] = m.error;
    mutants.push_back(std::move(row));
  }
  return Json{{"agent", table.agent},
              {"categories", categories},
              {"total", category_json(table.total)},
              {"mutants", mutants}};
}

std::string format_score_matrix(const std::vector<ScoreTable>& tables) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Chatbots"};
  for (std::size_t c = 0; c < kOperatorCategoryCount; ++c) {
    header.emplace_back(category_label(static_cast<OperatorCategory>(c)));
  }
  header.emplace_back("Total");
  grid.push_back(header);
  for (const auto& t : tables) {
    std::vector<std::string> row{t.agent};
    for (const auto& c : t.categories) row.push_back(c.cell());
    row.push_back(t.total.cell());
    grid.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  out << "# Killed/# Equivalent/# Generated (% Killed)\n";
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << std::left << std::setw(static_cast<int>(width[i])) << row[i];
      out << (i + 1 < row.size() ? "  " : "\n");
    }
  }
  return out.str();
}

}  // namespace chatmut
