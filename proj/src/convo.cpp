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

#include "chatmut/convo.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "chatmut/errors.hpp"
#include "chatmut/simulator.hpp"

namespace chatmut {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

constexpr std::string_view kNoResponse = "<no response>";

}  // namespace

bool BotExpectation::matches(std::string_view actual) const {
  const auto got = trim(actual);
  return std::any_of(texts.begin(), texts.end(), [&](const std::string& want) {
    return kind == Kind::kContains ? got.find(want) != std::string::npos : got == trim(want);
  });
}

std::string BotExpectation::describe() const {
  std::string out = kind == Kind::kContains ? "contains " : "";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (i) out += " | ";
    out += texts[i];
  }
  return out;
}

ConvoScript parse_convo(std::string_view text) {
  std::vector<std::vector<std::string>> blocks;
  std::istringstream in{std::string(text)};
  std::vector<std::string> current;
  std::string name;
  bool have_name = false;
  for (std::string line; std::getline(in, line);) {
    auto t = trim(line);
    if (!have_name) {
      if (t.empty()) continue;
      name = t;
      have_name = true;
      continue;
    }
    if (t.empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(t);
    }
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  if (!have_name) throw Error(ErrorCode::kScriptMalformed, "empty script");

  ConvoScript script;
  script.name = name;
  for (const auto& block : blocks) {
    const auto& head = block.front();
    if (head.empty() || head.front() != '#') {
      if (!script.turns.empty()) {
        throw Error(ErrorCode::kScriptMalformed, name + ": text outside a #me/#bot block");
      }
      continue;  // description
    }
    std::istringstream hs(head);
    std::string tag;
    std::string option;
    hs >> tag >> option;
    if (tag == "#lang") {
      if (option.empty()) throw Error(ErrorCode::kScriptMalformed, name + ": #lang needs a code");
      script.language = option;
    } else if (tag == "#me") {
      if (block.size() < 2) throw Error(ErrorCode::kScriptMalformed, name + ": empty #me block");
      ConvoTurn turn;
      turn.speaker = ConvoTurn::Speaker::kMe;
      for (std::size_t i = 1; i < block.size(); ++i) {
        if (i > 1) turn.utterance += ' ';
        turn.utterance += block[i];
      }
      script.turns.push_back(std::move(turn));
    } else if (tag == "#bot") {
      if (block.size() < 2) throw Error(ErrorCode::kScriptMalformed, name + ": empty #bot block");
      ConvoTurn turn;
      turn.speaker = ConvoTurn::Speaker::kBot;
      turn.expectation.texts.assign(block.begin() + 1, block.end());
      if (option == "contains") {
        turn.expectation.kind = BotExpectation::Kind::kContains;
      } else if (!option.empty()) {
        throw Error(ErrorCode::kScriptMalformed, name + ": unknown #bot option '" + option + "'");
      } else if (turn.expectation.texts.size() > 1) {
        turn.expectation.kind = BotExpectation::Kind::kAnyOf;
      }
      script.turns.push_back(std::move(turn));
    } else {
      throw Error(ErrorCode::kScriptMalformed, name + ": unknown block '" + tag + "'");
    }
  }
  if (script.turns.empty()) throw Error(ErrorCode::kScriptMalformed, name + ": no turns");
  if (script.turns.front().speaker != ConvoTurn::Speaker::kMe) {
    throw Error(ErrorCode::kScriptMalformed, name + ": first turn must be #me");
  }
  return script;
}

std::string format_convo(const ConvoScript& script) {
  std::string out = script.name + "\n";
  if (script.language) out += "\n#lang " + *script.language + "\n";
  for (const auto& turn : script.turns) {
    if (turn.speaker == ConvoTurn::Speaker::kMe) {
      out += "\n#me\n" + turn.utterance + "\n";
      continue;
    }
    out += turn.expectation.kind == BotExpectation::Kind::kContains ? "\n#bot contains\n" : "\n#bot\n";
    for (const auto& t : turn.expectation.texts) out += t + "\n";
  }
  return out;
}

ConvoScript load_convo(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_convo(buf.str());
}

ConvoSuite load_suite(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoFailure, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > kConvoSuffix.size() &&
        name.compare(name.size() - kConvoSuffix.size(), kConvoSuffix.size(), kConvoSuffix) == 0) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  ConvoSuite suite;
  for (const auto& f : files) suite.push_back(load_convo(f));
  return suite;
}

TestOutcome run_convo(const ChatbotModel& model, const ConvoScript& script) {
  return run_convo(Simulator(model), script);
}

TestOutcome run_convo(const Simulator& sim, const ConvoScript& script) {
  TestOutcome outcome;
  outcome.script = script.name;
  const std::string language = script.language.value_or("");
  ConversationState state;
  std::deque<std::string> pending;

  for (std::size_t i = 0; i < script.turns.size(); ++i) {
    const auto& turn = script.turns[i];
    if (turn.speaker == ConvoTurn::Speaker::kMe) {
      auto result = sim.step(state, turn.utterance, language);
      state = std::move(result.state);
      pending.assign(result.responses.begin(), result.responses.end());
      continue;
    }
    std::string actual = pending.empty() ? std::string(kNoResponse) : pending.front();
    const bool ok = !pending.empty() && turn.expectation.matches(actual);
    if (!pending.empty()) pending.pop_front();
    if (!ok) {
      outcome.verdict = Verdict::kFail;
      outcome.failing_turn = i;
      outcome.expected = turn.expectation.describe();
      outcome.actual = std::move(actual);
      return outcome;
    }
  }
  return outcome;
}

std::vector<TestOutcome> run_suite(const ChatbotModel& model, const ConvoSuite& suite) {
  std::vector<TestOutcome> out;
  out.reserve(suite.size());
  const Simulator sim(model);
  for (const auto& script : suite) out.push_back(run_convo(sim, script));
  return out;
}

}  // namespace chatmut
