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

#include "chatmut/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace chatmut {

namespace {

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> out;
  std::istringstream in{std::string(normalized)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool is_system_type(std::string_view type) { return type.rfind("@sys.", 0) == 0; }

std::string_view entity_name(std::string_view type) {
  if (!type.empty() && type.front() == '@') type.remove_prefix(1);
  return type;
}

struct PatternItem {
  std::string literal;  // token, when not a slot
  bool slot = false;
  bool system = false;                                               // @sys.* accepts any span
  const std::unordered_map<std::string, std::string>* entries = nullptr;  // span -> canonical value
  std::string alias;
};

using Pattern = std::vector<PatternItem>;
using Bindings = std::map<std::string, std::string>;

// Shortest-span-first backtracking; the first complete match wins.
bool match_items(const Pattern& items, std::size_t item, const std::vector<std::string>& tokens,
                 std::size_t pos, Bindings& bound) {
  if (item == items.size()) return pos == tokens.size();
  const auto& it = items[item];
  if (!it.slot) {
    return pos < tokens.size() && tokens[pos] == it.literal &&
           match_items(items, item + 1, tokens, pos + 1, bound);
  }
  if (!it.system && it.entries == nullptr) return false;
  std::string span;
  for (std::size_t end = pos + 1; end <= tokens.size(); ++end) {
    if (end > pos + 1) span += ' ';
    span += tokens[end - 1];
    std::string value;
    if (it.system) {
      value = span;
    } else {
      auto found = it.entries->find(span);
      if (found == it.entries->end()) continue;
      value = found->second;
    }
    Bindings saved = bound;
    if (!it.alias.empty()) bound[it.alias] = value;
    if (match_items(items, item + 1, tokens, end, bound)) return true;
    bound = std::move(saved);
  }
  return false;
}

bool contexts_satisfied(const Intent& intent, const ConversationState& state) {
  return std::all_of(intent.input_contexts.begin(), intent.input_contexts.end(),
                     [&](const LocatedString& c) {
                       return state.active_contexts.count(to_lower(c.value)) > 0;
                     });
}

// Higher priority first, then lexicographic name, then file order.
bool outranks(const ChatbotModel& model, std::size_t a, std::size_t b) {
  const auto& ia = model.intents[a];
  const auto& ib = model.intents[b];
  if (ia.priority != ib.priority) return ia.priority > ib.priority;
  if (ia.name != ib.name) return ia.name < ib.name;
  return a < b;
}

std::string resolve_language(const ChatbotModel& model, std::string_view language) {
  return language.empty() ? model.default_language : std::string(language);
}

Bindings bind_parameters(const Intent& intent, const Bindings& extracted) {
  Bindings params;
  for (const auto& p : intent.parameters) {
    if (p.name.empty()) continue;
    auto it = extracted.find(p.name);
    if (it != extracted.end()) {
      params[p.name] = it->second;
    } else if (!p.value_expr.empty() && p.value_expr.front() != '$') {
      params[p.name] = p.value_expr;
    }
  }
  return params;
}

std::vector<std::string> intent_responses(const Intent& intent, std::string_view language,
                                          const Bindings& params) {
  std::vector<std::string> out;
  for (const auto& action : intent.responses) {
    if (action.kind == ActionKind::kHttpRequest) {
      out.emplace_back(kWebhookPlaceholder);
      continue;
    }
    if (action.kind != ActionKind::kText || !iequals(action.language, language)) continue;
    if (action.text_variants.empty()) continue;
    out.push_back(substitute_params(action.text_variants.front().value, params));
  }
  return out;
}

std::optional<std::size_t> first_unfilled(const Intent& intent, const Bindings& params) {
  for (std::size_t p = 0; p < intent.parameters.size(); ++p) {
    const auto& param = intent.parameters[p];
    if (param.required() && !params.count(param.name)) return p;
  }
  return std::nullopt;
}

using EntryTable = std::unordered_map<std::string, std::string>;

}  // namespace

struct Simulator::Impl {
  const ChatbotModel* model = nullptr;
  std::unordered_map<std::string, EntryTable> entities;  // simple entities only
  std::vector<std::vector<Pattern>> phrases;              // per intent

  const EntryTable* table_for(std::string_view type) const {
    auto it = entities.find(std::string(entity_name(type)));
    return it == entities.end() ? nullptr : &it->second;
  }

  std::optional<std::string> fill_slot(const Parameter& param, std::string_view utterance) const {
    auto norm = normalize_utterance(utterance);
    if (norm.empty()) return std::nullopt;
    if (param.data_type.empty() || is_system_type(param.data_type)) return norm;
    const auto* table = table_for(param.data_type);
    if (table == nullptr) return std::nullopt;
    auto it = table->find(norm);
    if (it == table->end()) return std::nullopt;
    return it->second;
  }
};

Simulator::Simulator(const ChatbotModel& model) {
  auto impl = std::make_shared<Impl>();
  impl->model = &model;
  for (const auto& entity : model.entities) {
    if (entity.kind != EntityKind::kSimple) continue;
    // First declaration wins, entry by entry, value before synonyms.
    auto& table = impl->entities.emplace(entity.name, EntryTable{}).first->second;
    for (const auto& entry : entity.entries) {
      table.emplace(normalize_utterance(entry.value), entry.value);
      for (const auto& syn : entry.synonyms) table.emplace(normalize_utterance(syn.value), entry.value);
    }
  }
  impl->phrases.resize(model.intents.size());
  for (std::size_t i = 0; i < model.intents.size(); ++i) {
    for (const auto& phrase : model.intents[i].training_phrases) {
      if (!model.supports_language(phrase.language)) continue;
      Pattern items;
      for (const auto& part : phrase.parts) {
        if (part.entity_ref && !part.entity_ref->empty()) {
          PatternItem slot;
          slot.slot = true;
          slot.system = is_system_type(*part.entity_ref);
          if (!slot.system) slot.entries = impl->table_for(*part.entity_ref);
          slot.alias = part.alias.value_or("");
          items.push_back(std::move(slot));
          continue;
        }
        for (auto& tok : tokenize(normalize_utterance(part.text))) {
          PatternItem lit;
          lit.literal = std::move(tok);
          items.push_back(std::move(lit));
        }
      }
      if (!items.empty()) impl->phrases[i].push_back(std::move(items));
    }
  }
  impl_ = std::move(impl);
}

const ChatbotModel& Simulator::model() const { return *impl_->model; }

std::string ConversationState::dialogue_key() const {
  std::string key;
  for (const auto& [name, left] : active_contexts) key += name + "=" + std::to_string(left) + ";";
  key += "|";
  if (pending_slot) {
    key += std::to_string(pending_slot->intent) + "." + std::to_string(pending_slot->parameter);
  }
  key += "|";
  for (const auto& [k, v] : collected_params) key += k + "=" + v + ";";
  return key;
}

std::string normalize_utterance(std::string_view text) {
  std::string out;
  bool space = false;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

std::string substitute_params(std::string_view text, const Bindings& params) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != '$') {
      out += text[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                               text[j] == '_' || text[j] == '-')) {
      ++j;
    }
    auto it = params.find(std::string(text.substr(i + 1, j - i - 1)));
    if (j > i + 1 && it != params.end()) {
      out += it->second;
    } else {
      out.append(text.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

MatchResult Simulator::match(const ConversationState& state, std::string_view utterance,
                             std::string_view language) const {
  const auto& model = *impl_->model;
  const auto lang = resolve_language(model, language);
  const auto tokens = tokenize(normalize_utterance(utterance));

  std::optional<std::size_t> best;
  Bindings best_bound;
  for (std::size_t i = 0; i < model.intents.size(); ++i) {
    const auto& intent = model.intents[i];
    if (intent.fallback() || !contexts_satisfied(intent, state)) continue;
    for (const auto& items : impl_->phrases[i]) {
      Bindings bound;
      if (!match_items(items, 0, tokens, 0, bound)) continue;
      if (!best || outranks(model, i, *best)) {
        best = i;
        best_bound = std::move(bound);
      }
      break;
    }
  }

  MatchResult result;
  if (!best) {
    for (std::size_t i = 0; i < model.intents.size(); ++i) {
      const auto& intent = model.intents[i];
      if (!intent.fallback() || !contexts_satisfied(intent, state)) continue;
      if (!best || outranks(model, i, *best)) best = i;
    }
    if (!best) return result;
    result.used_fallback = true;
  }

  const auto& intent = model.intents[*best];
  result.intent_index = *best;
  result.matched_intent = intent.name;
  result.extracted_params = best_bound;
  result.response_texts = intent_responses(intent, lang, bind_parameters(intent, best_bound));
  for (const auto& ctx : intent.output_contexts) {
    if (ctx.name.empty()) continue;
    result.activated_contexts.emplace_back(ctx.name,
                                           ctx.lifespan.value_or(model.default_context_lifespan));
  }
  return result;
}

StepResult Simulator::step(const ConversationState& state, std::string_view utterance,
                           std::string_view language) const {
  const auto& model = *impl_->model;
  const auto lang = resolve_language(model, language);
  StepResult out{state, {}};
  ConversationState& next = out.state;
  next.turn_counter = state.turn_counter + 1;
  std::set<std::string> refreshed;

  auto prompt_for = [&](const Intent& intent, std::size_t p) {
    const auto& param = intent.parameters[p];
    auto prompts = param.prompts_for(lang);
    if (!prompts.empty()) {
      out.responses.push_back(substitute_params(prompts.front()->text, next.collected_params));
    }
  };

  auto complete = [&](const Intent& intent) {
    out.responses = intent_responses(intent, lang, next.collected_params);
    for (const auto& ctx : intent.output_contexts) {
      if (ctx.name.empty()) continue;
      auto key = to_lower(ctx.name);
      auto lifespan = ctx.lifespan.value_or(model.default_context_lifespan);
      refreshed.insert(key);
      if (lifespan <= 0) {
        next.active_contexts.erase(key);
      } else {
        next.active_contexts[key] = lifespan;
      }
    }
  };

  // Continue with the next unfilled required parameter, or finish.
  auto advance = [&](std::size_t intent_index) {
    const auto& intent = model.intents[intent_index];
    if (auto p = first_unfilled(intent, next.collected_params)) {
      next.pending_slot = PendingSlot{intent_index, *p};
      prompt_for(intent, *p);
    } else {
      next.pending_slot.reset();
      complete(intent);
    }
  };

  if (state.pending_slot) {
    const auto& intent = model.intents[state.pending_slot->intent];
    const auto& param = intent.parameters[state.pending_slot->parameter];
    if (auto value = impl_->fill_slot(param, utterance)) {
      next.collected_params[param.name] = *value;
      advance(state.pending_slot->intent);
    } else {
      prompt_for(intent, state.pending_slot->parameter);
    }
  } else {
    auto match = this->match(state, utterance, lang);
    next.collected_params.clear();
    if (match.intent_index) {
      const auto& intent = model.intents[*match.intent_index];
      next.collected_params = bind_parameters(intent, match.extracted_params);
      if (match.used_fallback) {
        complete(intent);
      } else {
        advance(*match.intent_index);
      }
    }
  }

  for (const auto& [name, left] : state.active_contexts) {
    if (refreshed.count(name)) continue;
    auto it = next.active_contexts.find(name);
    if (it == next.active_contexts.end()) continue;
    if (--it->second <= 0) next.active_contexts.erase(it);
  }
  return out;
}

MatchResult match_intent(const ChatbotModel& model, const ConversationState& state,
                         std::string_view utterance, std::string_view language) {
  return Simulator(model).match(state, utterance, language);
}

StepResult step(const ChatbotModel& model, const ConversationState& state,
                std::string_view utterance, std::string_view language) {
  return Simulator(model).step(state, utterance, language);
}

}  // namespace chatmut
