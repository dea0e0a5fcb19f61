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

#ifndef CHATMUT_CONVO_HPP_
#define CHATMUT_CONVO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chatmut/metamodel.hpp"
#include "chatmut/simulator.hpp"

namespace chatmut {

// Botium-style conversation scripts:
//
//   <script name>
//   <optional description lines>
//
//   #lang de            (optional)
//
//   #me
//   book room 101
//
//   #bot
//   When?
//
// A "#bot" block with several lines accepts any of them; "#bot contains"
// accepts a response containing any of the lines.

struct BotExpectation {
  enum class Kind { kExact, kAnyOf, kContains };
  Kind kind = Kind::kExact;
  std::vector<std::string> texts;

  bool matches(std::string_view actual) const;
  std::string describe() const;
  friend bool operator==(const BotExpectation&, const BotExpectation&) = default;
};

struct ConvoTurn {
  enum class Speaker { kMe, kBot };
  Speaker speaker = Speaker::kMe;
  std::string utterance;       // kMe
  BotExpectation expectation;  // kBot
  friend bool operator==(const ConvoTurn&, const ConvoTurn&) = default;
};

struct ConvoScript {
  std::string name;
  std::optional<std::string> language;
  std::vector<ConvoTurn> turns;
  friend bool operator==(const ConvoScript&, const ConvoScript&) = default;
};

using ConvoSuite = std::vector<ConvoScript>;

inline constexpr std::string_view kConvoSuffix = ".convo.txt";

/// Throws kScriptMalformed.
ConvoScript parse_convo(std::string_view text);
std::string format_convo(const ConvoScript& script);

ConvoScript load_convo(const std::filesystem::path& file);
/// Every *.convo.txt in `dir`, ordered by filename.
ConvoSuite load_suite(const std::filesystem::path& dir);

enum class Verdict { kPass, kFail };

struct TestOutcome {
  std::string script;
  Verdict verdict = Verdict::kPass;
  std::optional<std::size_t> failing_turn;
  std::string expected;
  std::string actual;
};

/// Fresh conversation per script. Each "#me" replaces the pending bot
/// responses; each "#bot" checks the next unchecked one.
TestOutcome run_convo(const ChatbotModel& model, const ConvoScript& script);
TestOutcome run_convo(const Simulator& sim, const ConvoScript& script);
std::vector<TestOutcome> run_suite(const ChatbotModel& model, const ConvoSuite& suite);

}  // namespace chatmut

#endif  // CHATMUT_CONVO_HPP_
