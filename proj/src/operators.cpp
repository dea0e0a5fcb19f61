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

#include "chatmut/operators.hpp"

#include <algorithm>
#include <limits>

namespace chatmut {

namespace {

using EC = ElementCategory;
using OC = OperatorCategory;
using TK = TransformKind;

const std::vector<OperatorSpec> kCatalog = {
    {OperatorId::kChangeChatbotLanguage, "changeChatbotLanguage", OC::kChatbot, EC::kLanguage,
     TK::kReplaceWithExisting, std::nullopt, "at least two supported languages"},
    {OperatorId::kRemoveChatbotIntent, "removeChatbotIntent", OC::kChatbot, EC::kIntent,
     TK::kRemove, std::nullopt, "any intent"},
    {OperatorId::kRemoveChatbotEntity, "removeChatbotEntity", OC::kChatbot, EC::kEntity,
     TK::kRemove, std::nullopt, "any entity"},
    {OperatorId::kRemoveChatbotFlow, "removeChatbotFlow", OC::kChatbot, EC::kFlow, TK::kRemove,
     std::nullopt, "output context consumed by some input context"},

    {OperatorId::kChangeFlowInContextName, "changeFlowInContextName", OC::kFlow,
     EC::kInputContext, TK::kReplaceWithExisting, std::nullopt,
     "another context name exists in the agent"},
    {OperatorId::kRemoveFlowInContextName, "removeFlowInContextName", OC::kFlow,
     EC::kInputContext, TK::kRemove, std::nullopt, "any input context"},
    {OperatorId::kChangeFlowOutContextName, "changeFlowOutContextName", OC::kFlow,
     EC::kOutputContext, TK::kReplaceWithExisting, std::nullopt,
     "another context name exists in the agent"},
    {OperatorId::kRemoveFlowOutContextName, "removeFlowOutContextName", OC::kFlow,
     EC::kOutputContext, TK::kRemove, std::nullopt, "output context with a name"},
    {OperatorId::kChangeFlowOutContextLifespan, "changeFlowOutContextLifespan", OC::kFlow,
     EC::kOutputContext, TK::kReplaceWithRandomInt, IntRange{1, 3},
     "output context with a lifespan"},
    {OperatorId::kRemoveFlowOutContextParameter, "removeFlowOutContextParameter", OC::kFlow,
     EC::kContextParameter, TK::kRemove, std::nullopt, "any output context parameter"},

    {OperatorId::kChangeIntentName, "changeIntentName", OC::kIntent, EC::kIntent,
     TK::kReplaceWithExisting, std::nullopt, "at least two intent names"},
    {OperatorId::kToggleIntentFallback, "toggleIntentFallback", OC::kIntent, EC::kIntent,
     TK::kToggle, std::nullopt, "intent declaring a fallback flag"},
    {OperatorId::kRemoveIntentFallback, "removeIntentFallback", OC::kIntent, EC::kIntent,
     TK::kRemove, std::nullopt, "intent declaring a fallback flag"},
    {OperatorId::kChangeIntentPriority, "changeIntentPriority", OC::kIntent, EC::kIntent,
     TK::kReplaceWithRandomInt, IntRange{0, kMaxIntentPriority}, "intent declaring a priority"},
    {OperatorId::kRemoveIntentParameter, "removeIntentParameter", OC::kIntent, EC::kParameter,
     TK::kRemove, std::nullopt, "any intent parameter"},

    {OperatorId::kChangeParameterName, "changeParameterName", OC::kParameter, EC::kParameter,
     TK::kReplaceWithExisting, std::nullopt, "another parameter name in the same intent"},
    {OperatorId::kRemoveParameterName, "removeParameterName", OC::kParameter, EC::kParameter,
     TK::kRemove, std::nullopt, "parameter with a name"},
    {OperatorId::kToggleParameterIsRequired, "toggleParameterIsRequired", OC::kParameter,
     EC::kParameter, TK::kToggle, std::nullopt, "parameter declaring a required flag"},
    {OperatorId::kRemoveParameterPrompt, "removeParameterPrompt", OC::kParameter, EC::kPrompt,
     TK::kRemove, std::nullopt, "any parameter prompt"},

    {OperatorId::kChangeSEntityName, "changeSEntityName", OC::kInput, EC::kEntity,
     TK::kReplaceWithExisting, std::nullopt, "at least two simple entities"},
    {OperatorId::kRemoveSEntityName, "removeSEntityName", OC::kInput, EC::kEntity, TK::kRemove,
     std::nullopt, "simple entity with a name"},
    {OperatorId::kChangeSInputValue, "changeSInputValue", OC::kInput, EC::kEntityEntry,
     TK::kReplaceWithRandomString, std::nullopt, "any simple entity entry"},
    {OperatorId::kChangeSInputSynonym, "changeSInputSynonym", OC::kInput, EC::kSynonym,
     TK::kReplaceWithRandomString, std::nullopt, "any simple entity synonym"},
    {OperatorId::kChangeTActionValue, "changeTActionValue", OC::kInput, EC::kTextVariant,
     TK::kReplaceWithRandomString, std::nullopt, "any text response variant"},
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

const std::vector<OperatorSpec>& operator_catalog() { return kCatalog; }

const OperatorSpec& operator_spec(OperatorId id) {
  return kCatalog[static_cast<std::size_t>(id)];
}

std::string_view to_string(OperatorId id) { return operator_spec(id).name; }

std::string_view to_string(OperatorCategory category) {
  switch (category) {
    case OC::kChatbot: return "Chatbot";
    case OC::kFlow: return "Flow";
    case OC::kIntent: return "Intent";
    case OC::kParameter: return "Parameter";
    case OC::kInput: return "Input";
  }
  return "Chatbot";
}

std::string_view category_label(OperatorCategory category) {
  switch (category) {
    case OC::kChatbot: return "Chatbot";
    case OC::kFlow: return "Flows";
    case OC::kIntent: return "Intents";
    case OC::kParameter: return "Parameters";
    case OC::kInput: return "Inputs";
  }
  return "Chatbot";
}

std::string_view to_string(TransformKind transform) {
  switch (transform) {
    case TK::kRemove: return "Remove";
    case TK::kReplaceWithExisting: return "ReplaceWithExisting";
    case TK::kReplaceWithRandomInt: return "ReplaceWithRandomInt";
    case TK::kReplaceWithRandomString: return "ReplaceWithRandomString";
    case TK::kToggle: return "Toggle";
  }
  return "Remove";
}

std::optional<OperatorId> find_operator(std::string_view name) {
  for (const auto& spec : kCatalog) {
    if (spec.name == name) return spec.id;
  }
  return std::nullopt;
}

OperatorId parse_operator(std::string_view name) {
  if (auto id = find_operator(name)) return *id;
  throw Error(ErrorCode::kUnknownOperator, std::string(name));
}

// ---------------------------------------------------------------------------

std::uint64_t RandomPolicy::subseed(std::uint64_t campaign_seed, OperatorId op,
                                    std::size_t ordinal) {
  return splitmix64(splitmix64(campaign_seed ^ fnv1a64(to_string(op))) + ordinal);
}

std::uint64_t RandomPolicy::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty draw range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::int64_t RandomPolicy::uniform(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

std::int64_t RandomPolicy::uniform_excluding(std::int64_t lo, std::int64_t hi,
                                             std::int64_t original) {
  if (lo == hi && lo == original) {
    throw Error(ErrorCode::kSelfReplacement, "range holds only the original value");
  }
  for (;;) {
    auto v = uniform(lo, hi);
    if (v != original) return v;
  }
}

std::string RandomPolicy::random_string() {
  std::string out(kStringLength, 'a');
  for (auto& c : out) c = kAlphabet[below(kAlphabet.size())];
  return out;
}

std::string RandomPolicy::random_string_excluding(std::string_view original) {
  for (;;) {
    auto s = random_string();
    if (s != original) return s;
  }
}

// ---------------------------------------------------------------------------

Json to_json(const MutationDescriptor& d) {
  Json j = {
      {"mutant_id", d.mutant_id},
      {"operator", std::string(to_string(d.op))},
      {"category", std::string(to_string(operator_spec(d.op).category))},
      {"target", {{"file", d.target.file}, {"pointer", d.target.pointer}}},
      {"companions", d.companions},
      {"original_value", d.original_value},
      {"seed", d.seed},
  };
  if (d.mutated_value) j["mutated_value"] = *d.mutated_value;
  return j;
}

MutationDescriptor descriptor_from_json(const Json& j) {
  try {
    MutationDescriptor d;
    d.mutant_id = j.at("mutant_id").get<std::string>();
    d.op = parse_operator(j.at("operator").get<std::string>());
    d.target.file = j.at("target").at("file").get<std::string>();
    d.target.pointer = j.at("target").at("pointer").get<std::string>();
    d.companions = j.value("companions", std::vector<std::string>{});
    d.original_value = j.at("original_value");
    if (j.contains("mutated_value")) d.mutated_value = j.at("mutated_value");
    d.seed = j.value("seed", std::uint64_t{0});
    return d;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad descriptor: ") + e.what());
  }
}

namespace {

// A target found by an operator's finder, before its value is drawn.
struct Candidate {
  Location target;
  std::vector<std::string> companions;
  std::vector<Json> pool;  // replacement candidates for kReplaceWithExisting
};

std::optional<Json> value_at(const ChatbotModel& model, const Location& loc) {
  if (!resolves(model, loc)) return std::nullopt;
  return resolve(model, loc).value;
}

// Distinct values in first-seen order, excluding `current`.
std::vector<Json> pool_without(const std::vector<std::string>& values, const std::string& current,
                               bool case_insensitive) {
  std::vector<Json> out;
  std::vector<std::string> seen;
  auto same = [&](const std::string& a, const std::string& b) {
    return case_insensitive ? iequals(a, b) : a == b;
  };
  for (const auto& v : values) {
    if (v.empty() || same(v, current)) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const auto& s) { return same(s, v); })) continue;
    seen.push_back(v);
    out.emplace_back(v);
  }
  return out;
}

std::vector<std::string> all_context_names(const ChatbotModel& model) {
  std::vector<std::string> names;
  for (const auto& intent : model.intents) {
    for (const auto& c : intent.input_contexts) names.push_back(c.value);
    for (const auto& c : intent.output_contexts) names.push_back(c.name);
  }
  return names;
}

bool holds(const std::optional<Json>& v, bool (Json::*pred)() const noexcept) {
  return v && ((*v).*pred)();
}

std::vector<Candidate> find_candidates(const ChatbotModel& model, OperatorId op) {
  const auto index = element_index(model);
  std::vector<Candidate> out;
  auto field = [&](const Location& loc, bool (Json::*pred)() const noexcept) {
    if (holds(value_at(model, loc), pred)) out.push_back({loc, {}, {}});
  };

  switch (op) {
    case OperatorId::kChangeChatbotLanguage: {
      const Location loc{"agent.json", "/language"};
      auto current = value_at(model, loc);
      if (!holds(current, &Json::is_string)) break;
      std::vector<std::string> langs;
      for (const auto& l : model.supported_languages) langs.push_back(l.value);
      auto pool = pool_without(langs, current->get<std::string>(), true);
      if (!pool.empty()) out.push_back({loc, {}, std::move(pool)});
      break;
    }
    case OperatorId::kRemoveChatbotIntent:
      for (const auto& intent : model.intents) {
        out.push_back({intent.loc, intent.companion_files, {}});
      }
      break;
    case OperatorId::kRemoveChatbotEntity:
      for (const auto& entity : model.entities) {
        out.push_back({entity.loc, entity.companion_files, {}});
      }
      break;
    case OperatorId::kRemoveChatbotFlow:
      for (const auto& e : index.of(EC::kOutputContext)) {
        const auto& ctx = model.intents[e.owner].output_contexts[e.index];
        if (produces_flow(model, ctx)) out.push_back({e.loc, {}, {}});
      }
      break;

    case OperatorId::kChangeFlowInContextName: {
      const auto names = all_context_names(model);
      for (const auto& e : index.of(EC::kInputContext)) {
        auto pool = pool_without(names, e.label, true);
        if (!pool.empty()) out.push_back({e.loc, {}, std::move(pool)});
      }
      break;
    }
    case OperatorId::kRemoveFlowInContextName:
      for (const auto& e : index.of(EC::kInputContext)) out.push_back({e.loc, {}, {}});
      break;
    case OperatorId::kChangeFlowOutContextName: {
      const auto names = all_context_names(model);
      for (const auto& e : index.of(EC::kOutputContext)) {
        auto loc = e.loc.child("name");
        auto current = value_at(model, loc);
        if (!holds(current, &Json::is_string)) continue;
        auto pool = pool_without(names, current->get<std::string>(), true);
        if (!pool.empty()) out.push_back({loc, {}, std::move(pool)});
      }
      break;
    }
    case OperatorId::kRemoveFlowOutContextName:
      for (const auto& e : index.of(EC::kOutputContext)) {
        field(e.loc.child("name"), &Json::is_string);
      }
      break;
    case OperatorId::kChangeFlowOutContextLifespan:
      for (const auto& e : index.of(EC::kOutputContext)) {
        field(e.loc.child("lifespan"), &Json::is_number_integer);
      }
      break;
    case OperatorId::kRemoveFlowOutContextParameter:
      for (const auto& e : index.of(EC::kContextParameter)) out.push_back({e.loc, {}, {}});
      break;

    case OperatorId::kChangeIntentName: {
      std::vector<std::string> names;
      for (const auto& intent : model.intents) names.push_back(intent.name);
      for (const auto& intent : model.intents) {
        auto loc = intent.loc.child("name");
        auto current = value_at(model, loc);
        if (!holds(current, &Json::is_string)) continue;
        auto pool = pool_without(names, current->get<std::string>(), false);
        if (!pool.empty()) out.push_back({loc, {}, std::move(pool)});
      }
      break;
    }
    case OperatorId::kToggleIntentFallback:
    case OperatorId::kRemoveIntentFallback:
      for (const auto& intent : model.intents) {
        field(intent.loc.child("fallbackIntent"), &Json::is_boolean);
      }
      break;
    case OperatorId::kChangeIntentPriority:
      for (const auto& intent : model.intents) {
        field(intent.loc.child("priority"), &Json::is_number_integer);
      }
      break;
    case OperatorId::kRemoveIntentParameter:
      for (const auto& e : index.of(EC::kParameter)) out.push_back({e.loc, {}, {}});
      break;

    case OperatorId::kChangeParameterName:
      for (const auto& e : index.of(EC::kParameter)) {
        auto loc = e.loc.child("name");
        auto current = value_at(model, loc);
        if (!holds(current, &Json::is_string)) continue;
        std::vector<std::string> names;
        for (const auto& p : model.intents[e.owner].parameters) names.push_back(p.name);
        auto pool = pool_without(names, current->get<std::string>(), false);
        if (!pool.empty()) out.push_back({loc, {}, std::move(pool)});
      }
      break;
    case OperatorId::kRemoveParameterName:
      for (const auto& e : index.of(EC::kParameter)) field(e.loc.child("name"), &Json::is_string);
      break;
    case OperatorId::kToggleParameterIsRequired:
      for (const auto& e : index.of(EC::kParameter)) {
        field(e.loc.child("required"), &Json::is_boolean);
      }
      break;
    case OperatorId::kRemoveParameterPrompt:
      for (const auto& e : index.of(EC::kPrompt)) out.push_back({e.loc, {}, {}});
      break;

    case OperatorId::kChangeSEntityName: {
      std::vector<std::string> names;
      for (const auto& entity : model.entities) {
        if (entity.kind == EntityKind::kSimple) names.push_back(entity.name);
      }
      for (const auto& entity : model.entities) {
        if (entity.kind != EntityKind::kSimple) continue;
        auto loc = entity.loc.child("name");
        auto current = value_at(model, loc);
        if (!holds(current, &Json::is_string)) continue;
        auto pool = pool_without(names, current->get<std::string>(), false);
        if (!pool.empty()) out.push_back({loc, {}, std::move(pool)});
      }
      break;
    }
    case OperatorId::kRemoveSEntityName:
      for (const auto& entity : model.entities) {
        if (entity.kind == EntityKind::kSimple) field(entity.loc.child("name"), &Json::is_string);
      }
      break;
    case OperatorId::kChangeSInputValue:
      for (const auto& e : index.of(EC::kEntityEntry)) {
        field(e.loc.child("value"), &Json::is_string);
      }
      break;
    case OperatorId::kChangeSInputSynonym:
      for (const auto& e : index.of(EC::kSynonym)) field(e.loc, &Json::is_string);
      break;
    case OperatorId::kChangeTActionValue:
      for (const auto& e : index.of(EC::kTextVariant)) field(e.loc, &Json::is_string);
      break;
  }
  return out;
}

std::string stem_of(const std::string& file) {
  auto name = file.substr(file.rfind('/') == std::string::npos ? 0 : file.rfind('/') + 1);
  if (name.size() > 5 && name.compare(name.size() - 5, 5, ".json") == 0) {
    name.resize(name.size() - 5);
  }
  return name;
}

}  // namespace

std::vector<MutationDescriptor> enumerate_targets(const ChatbotModel& model, OperatorId op,
                                                  std::uint64_t campaign_seed) {
  if (static_cast<std::size_t>(op) >= kOperatorCount) {
    throw Error(ErrorCode::kUnknownOperator, std::to_string(static_cast<int>(op)));
  }
  const auto& spec = operator_spec(op);
  auto candidates = find_candidates(model, op);

  std::vector<MutationDescriptor> out;
  out.reserve(candidates.size());
  for (std::size_t ordinal = 0; ordinal < candidates.size(); ++ordinal) {
    auto& c = candidates[ordinal];
    MutationDescriptor d;
    d.op = op;
    d.mutant_id = std::string(spec.name) + "__" + stem_of(c.target.file) + "__" +
                  std::to_string(ordinal);
    d.target = c.target;
    d.companions = std::move(c.companions);
    d.original_value = resolve(model, c.target).value;

    const auto subseed = RandomPolicy::subseed(campaign_seed, op, ordinal);
    switch (spec.transform) {
      case TK::kRemove:
        break;
      case TK::kToggle:
        d.mutated_value = Json(!d.original_value.get<bool>());
        break;
      case TK::kReplaceWithExisting:
        if (c.pool.size() == 1) {
          d.mutated_value = c.pool.front();
        } else {
          RandomPolicy rng(subseed);
          d.mutated_value = c.pool[rng.below(c.pool.size())];
          d.seed = subseed;
        }
        break;
      case TK::kReplaceWithRandomInt: {
        RandomPolicy rng(subseed);
        d.mutated_value = Json(rng.uniform_excluding(spec.range->lo, spec.range->hi,
                                                     d.original_value.get<std::int64_t>()));
        d.seed = subseed;
        break;
      }
      case TK::kReplaceWithRandomString: {
        RandomPolicy rng(subseed);
        d.mutated_value = Json(rng.random_string_excluding(d.original_value.get<std::string>()));
        d.seed = subseed;
        break;
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

Mutant apply(const ChatbotModel& model, const MutationDescriptor& d) {
  if (!resolves(model, d.target) || resolve(model, d.target).value != d.original_value) {
    throw Error(ErrorCode::kStaleDescriptor, d.mutant_id + " at " + d.target.str());
  }
  if (d.mutated_value && *d.mutated_value == d.original_value) {
    throw Error(ErrorCode::kSelfReplacement, d.mutant_id);
  }

  std::vector<DocumentEdit> edits;
  if (!d.mutated_value) {
    if (d.target.pointer.empty()) {
      edits.push_back({DocumentEdit::Kind::kRemoveFile, d.target, {}});
      for (const auto& file : d.companions) {
        edits.push_back({DocumentEdit::Kind::kRemoveFile, Location{file, ""}, {}});
      }
    } else {
      edits.push_back({DocumentEdit::Kind::kRemove, d.target, {}});
    }
  } else {
    edits.push_back({DocumentEdit::Kind::kReplace, d.target, *d.mutated_value});
  }

  try {
    auto result = apply_edits(model, edits);
    return Mutant{std::move(result.model), std::move(result.dirty)};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPathNotFound) {
      throw Error(ErrorCode::kStaleDescriptor, d.mutant_id + ": " + e.what());
    }
    throw;
  }
}

}  // namespace chatmut
