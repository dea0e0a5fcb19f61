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

#ifndef CHATMUT_ENGINE_HPP_
#define CHATMUT_ENGINE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chatmut/convo.hpp"
#include "chatmut/dialogflow_io.hpp"
#include "chatmut/equivalence.hpp"
#include "chatmut/operators.hpp"

namespace chatmut {

inline constexpr std::string_view kToolVersion = "chatmut 0.1.0";
inline constexpr std::string_view kReportFile = "report.json";

struct MutationConfig {
  std::filesystem::path source_root;
  std::filesystem::path output_root;
  OutputMode output_mode = OutputMode::kFull;
  std::optional<std::vector<OperatorId>> operators;  // empty optional selects all
  std::uint64_t seed = 0;
  bool overwrite = false;
  std::optional<std::size_t> max_mutants;  // per operator
  unsigned jobs = 1;

  std::vector<OperatorId> selected_operators() const;
};

/// Reads the JSON config schema. Relative paths resolve against `base_dir`.
/// Throws kConfigInvalid (unknown operator names included).
MutationConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json to_json(const MutationConfig& config);

std::string_view to_string(OutputMode mode);
OutputMode parse_output_mode(std::string_view text);

struct MutantRow {
  MutationDescriptor descriptor;
  std::string directory;  // relative to the output root
  std::vector<WrittenFile> files_written;
  std::vector<std::string> files_removed;
  std::optional<std::string> error;
};

struct MutationReport {
  std::string tool_version{kToolVersion};
  std::uint64_t seed = 0;
  std::string source_root;
  std::string source_digest;
  OutputMode output_mode = OutputMode::kFull;
  std::vector<OperatorId> operators;
  std::vector<MutantRow> rows;  // (operator, ordinal) order
};

Json to_json(const MutationReport& report);
MutationReport report_from_json(const Json& j);
MutationReport read_report(const std::filesystem::path& output_root);

/// Digest over every file path and content digest of the agent.
std::string source_digest(const SourceMap& source);

/// Enumerates, applies and writes every mutant, then writes report.json.
/// Failures on single mutants are recorded in their row. Throws
/// kConfigInvalid, kSourceLoadFailed or kOutputUnwritable.
MutationReport run_campaign(const MutationConfig& config);

// ---------------------------------------------------------------------------
// Scoring

enum class MutantVerdict { kKilled, kSurvived, kInvalid };

std::string_view to_string(MutantVerdict verdict);

struct MutantScore {
  std::string mutant_id;
  OperatorId op;
  MutantVerdict verdict = MutantVerdict::kSurvived;
  bool likely_equivalent = false;  // probed survivors only
  std::vector<std::string> failing_tests;
  std::optional<ConvoScript> witness;
  std::string error;
};

struct CategoryScore {
  std::size_t killed = 0;
  std::size_t equivalent = 0;
  std::size_t generated = 0;
  std::size_t invalid = 0;

  /// killed / (generated - equivalent - invalid), rounded half up; empty when
  /// the denominator is zero.
  std::optional<int> percent() const;
  std::string cell() const;  // "k/e/g (p%)" or "-"
};

struct ScoreTable {
  std::string agent;
  std::array<CategoryScore, kOperatorCategoryCount> categories{};
  CategoryScore total;
  std::vector<MutantScore> mutants;
};

struct ScoreOptions {
  int probe_depth = 3;
  unsigned jobs = 1;
};

/// Runs the suite on every mutant. Survivors are probed for equivalence.
/// Throws kSuiteFailsOnOriginal listing the failing scripts.
ScoreTable score_campaign(const MutationReport& report, const std::filesystem::path& output_root,
                          const ConvoSuite& suite, const ScoreOptions& options = {});

Json to_json(const ScoreTable& table);
/// Aligned text matrix, one row per agent.
std::string format_score_matrix(const std::vector<ScoreTable>& tables);

/// Loads one mutant of a report, honoring its output mode.
ChatbotModel load_mutant(const MutationReport& report, const std::filesystem::path& output_root,
                         const MutantRow& row);

}  // namespace chatmut

#endif  // CHATMUT_ENGINE_HPP_
