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

#include "chatmut/metamodel.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace chatmut {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kText: return "Text";
    case ActionKind::kImage: return "Image";
    case ActionKind::kHttpRequest: return "HTTPRequest";
    case ActionKind::kHttpResponse: return "HTTPResponse";
    case ActionKind::kEmpty: return "Empty";
  }
  return "Empty";
}

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kSimple: return "Simple";
    case EntityKind::kComplex: return "Complex";
    case EntityKind::kRegex: return "Regex";
  }
  return "Simple";
}

std::vector<const Prompt*> Parameter::prompts_for(std::string_view language) const {
  std::vector<const Prompt*> out;
  for (const auto& p : prompts) {
    if (iequals(p.language, language)) out.push_back(&p);
  }
  return out;
}

std::string TrainingPhrase::text() const {
  std::string out;
  for (const auto& part : parts) out += part.text;
  return out;
}

const Parameter* Intent::find_parameter(std::string_view param_name) const {
  for (const auto& p : parameters) {
    if (p.name == param_name) return &p;
  }
  return nullptr;
}

const Intent* ChatbotModel::find_intent(std::string_view intent_name) const {
  for (const auto& i : intents) {
    if (i.name == intent_name) return &i;
  }
  return nullptr;
}

const EntityDef* ChatbotModel::find_entity(std::string_view entity_name) const {
  for (const auto& e : entities) {
    if (e.name == entity_name) return &e;
  }
  return nullptr;
}

bool ChatbotModel::supports_language(std::string_view language) const {
  return std::any_of(supported_languages.begin(), supported_languages.end(),
                     [&](const LocatedString& l) { return iequals(l.value, language); });
}

bool operator==(const ChatbotModel& a, const ChatbotModel& b) {
  return a.name == b.name && a.default_language == b.default_language &&
         a.supported_languages == b.supported_languages && a.intents == b.intents &&
         a.entities == b.entities &&
         a.default_context_lifespan == b.default_context_lifespan;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNoSupportedLanguages: return "NoSupportedLanguages";
    case ViolationKind::kDefaultLanguageNotSupported: return "DefaultLanguageNotSupported";
    case ViolationKind::kDuplicateIntentName: return "DuplicateIntentName";
    case ViolationKind::kDuplicateEntityName: return "DuplicateEntityName";
    case ViolationKind::kEmptyIntentName: return "EmptyIntentName";
    case ViolationKind::kEmptyEntityName: return "EmptyEntityName";
    case ViolationKind::kPriorityOutOfRange: return "PriorityOutOfRange";
    case ViolationKind::kDuplicateParameterName: return "DuplicateParameterName";
    case ViolationKind::kEmptyParameterName: return "EmptyParameterName";
    case ViolationKind::kPromptsWithoutRequired: return "PromptsWithoutRequired";
    case ViolationKind::kDanglingAlias: return "DanglingAlias";
    case ViolationKind::kAliasWithoutEntity: return "AliasWithoutEntity";
    case ViolationKind::kEmptyTrainingPhrase: return "EmptyTrainingPhrase";
    case ViolationKind::kEmptyContextName: return "EmptyContextName";
    case ViolationKind::kNegativeLifespan: return "NegativeLifespan";
    case ViolationKind::kEmptySimpleEntity: return "EmptySimpleEntity";
    case ViolationKind::kEntryWithoutSynonyms: return "EntryWithoutSynonyms";
    case ViolationKind::kTextActionWithoutVariants: return "TextActionWithoutVariants";
  }
  return "Unknown";
}

namespace {

void check_intent(const Intent& intent, std::vector<Violation>& out) {
  auto add = [&](ViolationKind kind, Location loc, std::string message) {
    out.push_back(Violation{kind, std::move(loc), std::move(message)});
  };

  if (intent.name.empty()) {
    add(ViolationKind::kEmptyIntentName, intent.loc.child("name"), "intent has no name");
  }
  if (intent.priority < 0 || intent.priority > kMaxIntentPriority) {
    add(ViolationKind::kPriorityOutOfRange, intent.loc.child("priority"),
        "priority " + std::to_string(intent.priority) + " outside [0, 1000000]");
  }

  std::set<std::string> seen;
  for (const auto& p : intent.parameters) {
    if (p.name.empty()) {
      add(ViolationKind::kEmptyParameterName, p.loc,
          "parameter of intent '" + intent.name + "' has no name");
    } else if (!seen.insert(p.name).second) {
      add(ViolationKind::kDuplicateParameterName, p.loc.child("name"),
          "parameter '" + p.name + "' declared twice in intent '" + intent.name + "'");
    }
    if (!p.prompts.empty() && !p.required()) {
      add(ViolationKind::kPromptsWithoutRequired, p.loc.child("prompts"),
          "parameter '" + p.name + "' has prompts but is not required");
    }
  }

  for (const auto& phrase : intent.training_phrases) {
    if (phrase.parts.empty()) {
      add(ViolationKind::kEmptyTrainingPhrase, phrase.loc, "training phrase has no parts");
      continue;
    }
    for (std::size_t i = 0; i < phrase.parts.size(); ++i) {
      const auto& part = phrase.parts[i];
      if (!part.alias) continue;
      auto part_loc = phrase.loc.child("data").child(i);
      if (!part.entity_ref) {
        add(ViolationKind::kAliasWithoutEntity, part_loc,
            "alias '" + *part.alias + "' has no entity type");
      }
      if (intent.find_parameter(*part.alias) == nullptr) {
        add(ViolationKind::kDanglingAlias, part_loc.child("alias"),
            "alias '" + *part.alias + "' does not name a parameter of '" + intent.name + "'");
      }
    }
  }

  for (const auto& ctx : intent.output_contexts) {
    if (ctx.name.empty()) {
      add(ViolationKind::kEmptyContextName, ctx.loc, "output context has no name");
    }
    if (ctx.lifespan && *ctx.lifespan < 0) {
      add(ViolationKind::kNegativeLifespan, ctx.loc.child("lifespan"), "negative lifespan");
    }
  }
  for (const auto& ctx : intent.input_contexts) {
    if (ctx.value.empty()) {
      add(ViolationKind::kEmptyContextName, ctx.loc, "input context has no name");
    }
  }

  for (const auto& action : intent.responses) {
    if (action.kind == ActionKind::kText && action.text_variants.empty()) {
      add(ViolationKind::kTextActionWithoutVariants, action.loc, "text action without variants");
    }
  }
}

}  // namespace

std::vector<Violation> validate(const ChatbotModel& model) {
  std::vector<Violation> out;
  const Location agent{"agent.json", ""};

  if (model.supported_languages.empty()) {
    out.push_back({ViolationKind::kNoSupportedLanguages, agent.child("supportedLanguages"),
                   "agent declares no languages"});
  } else if (!model.supports_language(model.default_language)) {
    out.push_back({ViolationKind::kDefaultLanguageNotSupported, agent.child("language"),
                   "default language '" + model.default_language + "' is not supported"});
  }

  std::set<std::string> intent_names;
  for (const auto& intent : model.intents) {
    if (!intent.name.empty() && !intent_names.insert(intent.name).second) {
      out.push_back({ViolationKind::kDuplicateIntentName, intent.loc.child("name"),
                     "intent name '" + intent.name + "' is not unique"});
    }
    check_intent(intent, out);
  }

  std::set<std::string> entity_names;
  for (const auto& entity : model.entities) {
    if (entity.name.empty()) {
      out.push_back({ViolationKind::kEmptyEntityName, entity.loc, "entity has no name"});
    } else if (!entity_names.insert(entity.name).second) {
      out.push_back({ViolationKind::kDuplicateEntityName, entity.loc.child("name"),
                     "entity name '" + entity.name + "' is not unique"});
    }
    if (entity.kind != EntityKind::kSimple) continue;
    if (entity.entries.empty()) {
      out.push_back({ViolationKind::kEmptySimpleEntity, entity.loc,
                     "simple entity '" + entity.name + "' has no entries"});
    }
    for (const auto& entry : entity.entries) {
      if (entry.synonyms.empty()) {
        out.push_back({ViolationKind::kEntryWithoutSynonyms, entry.loc,
                       "entry '" + entry.value + "' has no synonyms"});
      }
    }
  }
  return out;
}

std::string_view to_string(ElementCategory category) {
  switch (category) {
    case ElementCategory::kIntent: return "intent";
    case ElementCategory::kEntity: return "entity";
    case ElementCategory::kFlow: return "flow";
    case ElementCategory::kParameter: return "parameter";
    case ElementCategory::kPrompt: return "prompt";
    case ElementCategory::kInputContext: return "input_context";
    case ElementCategory::kOutputContext: return "output_context";
    case ElementCategory::kContextParameter: return "context_parameter";
    case ElementCategory::kEntityEntry: return "entity_entry";
    case ElementCategory::kSynonym: return "synonym";
    case ElementCategory::kTextVariant: return "text_variant";
    case ElementCategory::kLanguage: return "language";
  }
  return "unknown";
}

std::size_t ElementIndex::total() const {
  std::size_t n = 0;
  for (const auto& list : lists_) n += list.size();
  return n;
}

bool produces_flow(const ChatbotModel& model, const OutputContext& ctx) {
  if (ctx.name.empty()) return false;
  if (ctx.lifespan.value_or(model.default_context_lifespan) <= 0) return false;
  for (const auto& consumer : model.intents) {
    for (const auto& in : consumer.input_contexts) {
      if (iequals(in.value, ctx.name)) return true;
    }
  }
  return false;
}

ElementIndex element_index(const ChatbotModel& model) {
  ElementIndex index;
  auto push = [&](ElementCategory c, Element e) {
    e.category = c;
    index.mutable_of(c).push_back(std::move(e));
  };

  for (std::size_t l = 0; l < model.supported_languages.size(); ++l) {
    const auto& lang = model.supported_languages[l];
    push(ElementCategory::kLanguage, {ElementCategory::kLanguage, lang.loc, lang.value, -1,
                                      static_cast<int>(l)});
  }

  for (std::size_t i = 0; i < model.intents.size(); ++i) {
    const auto& intent = model.intents[i];
    const int owner = static_cast<int>(i);
    push(ElementCategory::kIntent, {ElementCategory::kIntent, intent.loc, intent.name, owner});

    for (std::size_t c = 0; c < intent.input_contexts.size(); ++c) {
      const auto& ctx = intent.input_contexts[c];
      push(ElementCategory::kInputContext,
           {ElementCategory::kInputContext, ctx.loc, ctx.value, owner, static_cast<int>(c)});
    }

    for (std::size_t c = 0; c < intent.output_contexts.size(); ++c) {
      const auto& ctx = intent.output_contexts[c];
      const int ci = static_cast<int>(c);
      push(ElementCategory::kOutputContext,
           {ElementCategory::kOutputContext, ctx.loc, ctx.name, owner, ci});
      for (std::size_t k = 0; k < ctx.parameters.size(); ++k) {
        push(ElementCategory::kContextParameter,
             {ElementCategory::kContextParameter, ctx.parameters[k].loc, ctx.parameters[k].key,
              owner, ci, static_cast<int>(k)});
      }
      if (ctx.name.empty() || ctx.lifespan.value_or(model.default_context_lifespan) <= 0) {
        continue;
      }
      for (std::size_t j = 0; j < model.intents.size(); ++j) {
        for (const auto& in : model.intents[j].input_contexts) {
          if (!iequals(in.value, ctx.name)) continue;
          push(ElementCategory::kFlow,
               {ElementCategory::kFlow, ctx.loc,
                intent.name + " -> " + ctx.name + " -> " + model.intents[j].name, owner, ci,
                static_cast<int>(j)});
          break;
        }
      }
    }

    for (std::size_t p = 0; p < intent.parameters.size(); ++p) {
      const auto& param = intent.parameters[p];
      const int pi = static_cast<int>(p);
      push(ElementCategory::kParameter,
           {ElementCategory::kParameter, param.loc, param.name, owner, pi});
      for (std::size_t q = 0; q < param.prompts.size(); ++q) {
        push(ElementCategory::kPrompt, {ElementCategory::kPrompt, param.prompts[q].loc,
                                        param.prompts[q].text, owner, pi, static_cast<int>(q)});
      }
    }

    for (std::size_t a = 0; a < intent.responses.size(); ++a) {
      const auto& action = intent.responses[a];
      if (action.kind != ActionKind::kText) continue;
      for (std::size_t v = 0; v < action.text_variants.size(); ++v) {
        push(ElementCategory::kTextVariant,
             {ElementCategory::kTextVariant, action.text_variants[v].loc,
              action.text_variants[v].value, owner, static_cast<int>(a), static_cast<int>(v)});
      }
    }
  }

  for (std::size_t e = 0; e < model.entities.size(); ++e) {
    const auto& entity = model.entities[e];
    const int owner = static_cast<int>(e);
    push(ElementCategory::kEntity, {ElementCategory::kEntity, entity.loc, entity.name, owner});
    if (entity.kind != EntityKind::kSimple) continue;
    for (std::size_t n = 0; n < entity.entries.size(); ++n) {
      const auto& entry = entity.entries[n];
      const int ni = static_cast<int>(n);
      push(ElementCategory::kEntityEntry,
           {ElementCategory::kEntityEntry, entry.loc, entry.value, owner, ni});
      for (std::size_t s = 0; s < entry.synonyms.size(); ++s) {
        push(ElementCategory::kSynonym, {ElementCategory::kSynonym, entry.synonyms[s].loc,
                                         entry.synonyms[s].value, owner, ni, static_cast<int>(s)});
      }
    }
  }
  return index;
}

}  // namespace chatmut
