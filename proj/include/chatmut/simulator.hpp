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

#ifndef CHATMUT_SIMULATOR_HPP_
#define CHATMUT_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chatmut/metamodel.hpp"

namespace chatmut {

// Rule-based stand-in for the Dialogflow runtime. Matching is exact on
// normalized text; entity-typed phrase parts act as wildcards.

struct PendingSlot {
  std::size_t intent = 0;     // index into ChatbotModel::intents
  std::size_t parameter = 0;  // index into Intent::parameters

  friend auto operator<=>(const PendingSlot&, const PendingSlot&) = default;
};

struct ConversationState {
  std::map<std::string, std::int64_t> active_contexts;  // lower-cased name -> turns left
  std::optional<PendingSlot> pending_slot;
  std::map<std::string, std::string> collected_params;
  std::uint64_t turn_counter = 0;

  /// Everything that influences future behaviour; turn_counter excluded.
  std::string dialogue_key() const;
};

struct MatchResult {
  std::optional<std::string> matched_intent;
  std::optional<std::size_t> intent_index;
  std::map<std::string, std::string> extracted_params;  // alias -> value
  bool used_fallback = false;
  std::vector<std::string> response_texts;
  std::vector<std::pair<std::string, std::int64_t>> activated_contexts;
};

/// Case-folds, trims and collapses runs of whitespace.
std::string normalize_utterance(std::string_view text);

/// An empty `language` selects the agent's default language.
MatchResult match_intent(const ChatbotModel& model, const ConversationState& state,
                         std::string_view utterance, std::string_view language = {});

struct StepResult {
  ConversationState state;
  std::vector<std::string> responses;
};

StepResult step(const ChatbotModel& model, const ConversationState& state,
                std::string_view utterance, std::string_view language = {});

/// An agent prepared for repeated matching: phrases are tokenized and entity
/// lookups indexed once. Holds a reference, so `model` must outlive it.
class Simulator {
 public:
  explicit Simulator(const ChatbotModel& model);
  const ChatbotModel& model() const;
  MatchResult match(const ConversationState& state, std::string_view utterance,
                    std::string_view language = {}) const;
  StepResult step(const ConversationState& state, std::string_view utterance,
                  std::string_view language = {}) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Replaces "$name" with collected values; unknown references stay verbatim.
std::string substitute_params(std::string_view text,
                              const std::map<std::string, std::string>& params);

inline constexpr std::string_view kWebhookPlaceholder = "[webhook]";

}  // namespace chatmut

#endif  // CHATMUT_SIMULATOR_HPP_
