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

#ifndef CHATMUT_METAMODEL_HPP_
#define CHATMUT_METAMODEL_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chatmut/location.hpp"

namespace chatmut {

// Platform-agnostic chatbot structure. Intents, entities, actions and the
// context data that induces conversational flows. Every element remembers the
// Location it was read from so operators can address it in the source files.

struct SourceMap;  // defined by the platform adapter

inline constexpr std::int64_t kDefaultIntentPriority = 500000;
inline constexpr std::int64_t kMaxIntentPriority = 1000000;
inline constexpr std::int64_t kDefaultContextLifespan = 5;

struct LocatedString {
  std::string value;
  Location loc;

  friend bool operator==(const LocatedString&, const LocatedString&) = default;
};

struct ContextParameter {
  std::string key;
  std::string value;
  Location loc;

  friend bool operator==(const ContextParameter&, const ContextParameter&) = default;
};

struct OutputContext {
  std::string name;
  std::optional<std::int64_t> lifespan;  // absent means the agent default
  std::vector<ContextParameter> parameters;
  Location loc;

  friend bool operator==(const OutputContext&, const OutputContext&) = default;
};

struct Prompt {
  std::string language;
  std::string text;
  Location loc;

  friend bool operator==(const Prompt&, const Prompt&) = default;
};

struct Parameter {
  std::string name;
  std::string data_type;   // "@city", "@sys.date"
  std::string value_expr;  // "$city"
  std::optional<bool> is_required;
  std::optional<bool> is_list;
  std::vector<Prompt> prompts;
  Location loc;

  bool required() const { return is_required.value_or(false); }
  std::vector<const Prompt*> prompts_for(std::string_view language) const;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct PhrasePart {
  std::string text;
  std::optional<std::string> alias;
  std::optional<std::string> entity_ref;  // "@city", "@sys.date"

  friend bool operator==(const PhrasePart&, const PhrasePart&) = default;
};

struct TrainingPhrase {
  std::vector<PhrasePart> parts;
  std::string language;
  Location loc;

  std::string text() const;

  friend bool operator==(const TrainingPhrase&, const TrainingPhrase&) = default;
};

enum class ActionKind { kText, kImage, kHttpRequest, kHttpResponse, kEmpty };

std::string_view to_string(ActionKind kind);

struct Action {
  ActionKind kind = ActionKind::kEmpty;
  std::string language;
  std::vector<LocatedString> text_variants;  // Text only
  std::string raw_payload;                   // compact JSON, non-Text kinds
  Location loc;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Intent {
  std::string name;
  std::int64_t priority = kDefaultIntentPriority;
  std::optional<bool> is_fallback;
  std::vector<LocatedString> input_contexts;
  std::vector<OutputContext> output_contexts;
  std::vector<Parameter> parameters;
  std::vector<TrainingPhrase> training_phrases;  // grouped by language, supported order
  std::vector<Action> responses;                 // document order, tagged by language
  Location loc;                                  // definition file, pointer ""
  std::vector<std::string> companion_files;      // per-language training phrase files

  bool fallback() const { return is_fallback.value_or(false); }
  const Parameter* find_parameter(std::string_view name) const;

  friend bool operator==(const Intent&, const Intent&) = default;
};

enum class EntityKind { kSimple, kComplex, kRegex };

std::string_view to_string(EntityKind kind);

struct EntityEntry {
  std::string value;
  std::vector<LocatedString> synonyms;
  std::string language;
  Location loc;

  friend bool operator==(const EntityEntry&, const EntityEntry&) = default;
};

struct EntityDef {
  std::string name;
  EntityKind kind = EntityKind::kSimple;
  std::vector<EntityEntry> entries;  // Simple only; Complex/Regex stay opaque
  std::string raw_payload;
  Location loc;
  std::vector<std::string> companion_files;

  friend bool operator==(const EntityDef&, const EntityDef&) = default;
};

struct ChatbotModel {
  std::string name;
  std::string default_language;
  std::vector<LocatedString> supported_languages;  // default first
  std::vector<Intent> intents;
  std::vector<EntityDef> entities;
  std::int64_t default_context_lifespan = kDefaultContextLifespan;
  std::shared_ptr<const SourceMap> source;

  const Intent* find_intent(std::string_view name) const;
  const EntityDef* find_entity(std::string_view name) const;
  bool supports_language(std::string_view language) const;

  // Structural equality; the source map is not compared.
  friend bool operator==(const ChatbotModel& a, const ChatbotModel& b);
};

/// ASCII case-insensitive comparison used for language codes and context names.
bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kNoSupportedLanguages,
  kDefaultLanguageNotSupported,
  kDuplicateIntentName,
  kDuplicateEntityName,
  kEmptyIntentName,
  kEmptyEntityName,
  kPriorityOutOfRange,
  kDuplicateParameterName,
  kEmptyParameterName,
  kPromptsWithoutRequired,
  kDanglingAlias,
  kAliasWithoutEntity,
  kEmptyTrainingPhrase,
  kEmptyContextName,
  kNegativeLifespan,
  kEmptySimpleEntity,
  kEntryWithoutSynonyms,
  kTextActionWithoutVariants,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  Location loc;
  std::string message;
};

/// Checks every structural invariant. Total: mutants are expected to break
/// some of them, so problems are returned rather than thrown.
std::vector<Violation> validate(const ChatbotModel& model);

// ---------------------------------------------------------------------------
// Element index

enum class ElementCategory {
  kIntent,
  kEntity,
  kFlow,
  kParameter,
  kPrompt,
  kInputContext,
  kOutputContext,
  kContextParameter,
  kEntityEntry,
  kSynonym,
  kTextVariant,
  kLanguage,
};

inline constexpr std::size_t kElementCategoryCount = 12;

std::string_view to_string(ElementCategory category);

struct Element {
  ElementCategory category;
  Location loc;
  std::string label;
  int owner = -1;     // intent or entity index
  int index = -1;     // position inside the owner (parameter, context, entry, ...)
  int sub = -1;       // second-level position (prompt, synonym, variant, flow consumer)
};

class ElementIndex {
 public:
  const std::vector<Element>& of(ElementCategory category) const {
    return lists_[static_cast<std::size_t>(category)];
  }
  std::vector<Element>& mutable_of(ElementCategory category) {
    return lists_[static_cast<std::size_t>(category)];
  }
  std::size_t total() const;

 private:
  std::array<std::vector<Element>, kElementCategoryCount> lists_;
};

/// Every addressable element per category, in file order then document order.
ElementIndex element_index(const ChatbotModel& model);

/// True when an output context is consumed by at least one input context.
/// Lifespan zero clears a context and never produces a flow.
bool produces_flow(const ChatbotModel& model, const OutputContext& ctx);

}  // namespace chatmut

#endif  // CHATMUT_METAMODEL_HPP_
