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

#ifndef CHATMUT_OPERATORS_HPP_
#define CHATMUT_OPERATORS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chatmut/dialogflow_io.hpp"
#include "chatmut/metamodel.hpp"

namespace chatmut {

enum class OperatorId {
  // Chatbot
  kChangeChatbotLanguage,
  kRemoveChatbotIntent,
  kRemoveChatbotEntity,
  kRemoveChatbotFlow,
  // Flow
  kChangeFlowInContextName,
  kRemoveFlowInContextName,
  kChangeFlowOutContextName,
  kRemoveFlowOutContextName,
  kChangeFlowOutContextLifespan,
  kRemoveFlowOutContextParameter,
  // Intent
  kChangeIntentName,
  kToggleIntentFallback,
  kRemoveIntentFallback,
  kChangeIntentPriority,
  kRemoveIntentParameter,
  // Parameter
  kChangeParameterName,
  kRemoveParameterName,
  kToggleParameterIsRequired,
  kRemoveParameterPrompt,
  // Input
  kChangeSEntityName,
  kRemoveSEntityName,
  kChangeSInputValue,
  kChangeSInputSynonym,
  kChangeTActionValue,
};

inline constexpr std::size_t kOperatorCount = 24;

enum class OperatorCategory { kChatbot, kFlow, kIntent, kParameter, kInput };

inline constexpr std::size_t kOperatorCategoryCount = 5;

enum class TransformKind {
  kRemove,
  kReplaceWithExisting,
  kReplaceWithRandomInt,
  kReplaceWithRandomString,
  kToggle,
};

struct IntRange {
  std::int64_t lo;
  std::int64_t hi;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct OperatorSpec {
  OperatorId id;
  std::string_view name;
  OperatorCategory category;
  ElementCategory target_category;
  TransformKind transform;
  std::optional<IntRange> range;  // kReplaceWithRandomInt only
  std::string_view applicability;
};

/// The 24 operators, grouped Chatbot, Flow, Intent, Parameter, Input.
const std::vector<OperatorSpec>& operator_catalog();
const OperatorSpec& operator_spec(OperatorId id);

std::string_view to_string(OperatorId id);
std::string_view to_string(OperatorCategory category);
std::string_view to_string(TransformKind transform);
/// Column label used by score tables ("Flows", "Intents", ...).
std::string_view category_label(OperatorCategory category);

std::optional<OperatorId> find_operator(std::string_view name);
/// Throws kUnknownOperator.
OperatorId parse_operator(std::string_view name);

// ---------------------------------------------------------------------------
// Randomness

/// Seeded draws for random-valued operators. Bounded draws use rejection
/// sampling on std::mt19937_64 so sequences are identical on every platform.
class RandomPolicy {
 public:
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz";
  static constexpr std::size_t kStringLength = 12;

  explicit RandomPolicy(std::uint64_t seed) : engine_(seed) {}

  /// Per-descriptor seed derived from (campaign seed, operator, ordinal).
  static std::uint64_t subseed(std::uint64_t campaign_seed, OperatorId op, std::size_t ordinal);

  std::uint64_t below(std::uint64_t bound);
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  std::string random_string();

  /// Redraws until the value differs from `original`.
  std::int64_t uniform_excluding(std::int64_t lo, std::int64_t hi, std::int64_t original);
  std::string random_string_excluding(std::string_view original);

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Descriptors

struct MutationDescriptor {
  std::string mutant_id;  // "<operator>__<file-stem>__<ordinal>"
  OperatorId op;
  Location target;
  std::vector<std::string> companions;  // extra files deleted with a whole-file removal
  Json original_value;
  std::optional<Json> mutated_value;  // empty for Remove transforms
  std::uint64_t seed = 0;

  friend bool operator==(const MutationDescriptor&, const MutationDescriptor&) = default;
};

Json to_json(const MutationDescriptor& d);
MutationDescriptor descriptor_from_json(const Json& j);

/// One descriptor per applicable instance, in element-index order.
std::vector<MutationDescriptor> enumerate_targets(const ChatbotModel& model, OperatorId op,
                                                  std::uint64_t campaign_seed = 0);

struct Mutant {
  ChatbotModel model;
  std::set<std::string> dirty;
};

/// Produces the mutated copy. Throws kStaleDescriptor when the target no
/// longer holds the recorded original value.
Mutant apply(const ChatbotModel& model, const MutationDescriptor& d);

}  // namespace chatmut

#endif  // CHATMUT_OPERATORS_HPP_
