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

#ifndef CHATMUT_TESTS_ORACLES_HPP_
#define CHATMUT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chatmut/dialogflow_io.hpp"
#include "chatmut/equivalence.hpp"
#include "chatmut/metamodel.hpp"
#include "chatmut/operators.hpp"
#include "chatmut/simulator.hpp"
#include "chatmut/structural_diff.hpp"
#include "test_support.hpp"

namespace chatmut::testing {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Operator catalog as listed in the design.

struct CatalogRow {
  const char* name;
  OperatorCategory category;
  TransformKind transform;
  std::optional<IntRange> range;
};

inline const std::vector<CatalogRow>& catalog_table() {
  using TK = TransformKind;
  using OC = OperatorCategory;
  static const std::vector<CatalogRow> rows{
    {"changeChatbotLanguage", OC::kChatbot, TK::kReplaceWithExisting, {}},
    {"removeChatbotIntent", OC::kChatbot, TK::kRemove, {}},
    {"removeChatbotEntity", OC::kChatbot, TK::kRemove, {}},
    {"removeChatbotFlow", OC::kChatbot, TK::kRemove, {}},
    {"changeFlowInContextName", OC::kFlow, TK::kReplaceWithExisting, {}},
    {"removeFlowInContextName", OC::kFlow, TK::kRemove, {}},
    {"changeFlowOutContextName", OC::kFlow, TK::kReplaceWithExisting, {}},
    {"removeFlowOutContextName", OC::kFlow, TK::kRemove, {}},
    {"changeFlowOutContextLifespan", OC::kFlow, TK::kReplaceWithRandomInt, IntRange{1, 3}},
    {"removeFlowOutContextParameter", OC::kFlow, TK::kRemove, {}},
    {"changeIntentName", OC::kIntent, TK::kReplaceWithExisting, {}},
    {"toggleIntentFallback", OC::kIntent, TK::kToggle, {}},
    {"removeIntentFallback", OC::kIntent, TK::kRemove, {}},
    {"changeIntentPriority", OC::kIntent, TK::kReplaceWithRandomInt, IntRange{0, 1000000}},
    {"removeIntentParameter", OC::kIntent, TK::kRemove, {}},
    {"changeParameterName", OC::kParameter, TK::kReplaceWithExisting, {}},
    {"removeParameterName", OC::kParameter, TK::kRemove, {}},
    {"toggleParameterIsRequired", OC::kParameter, TK::kToggle, {}},
    {"removeParameterPrompt", OC::kParameter, TK::kRemove, {}},
    {"changeSEntityName", OC::kInput, TK::kReplaceWithExisting, {}},
    {"removeSEntityName", OC::kInput, TK::kRemove, {}},
    {"changeSInputValue", OC::kInput, TK::kReplaceWithRandomString, {}},
    {"changeSInputSynonym", OC::kInput, TK::kReplaceWithRandomString, {}},
    {"changeTActionValue", OC::kInput, TK::kReplaceWithRandomString, {}},
  };
  return rows;
}

// ---------------------------------------------------------------------------
// Independent counting oracle: walks the raw export JSON, never the model.

struct Manifest {
  std::size_t intents = 0, entities = 0, simple_entities = 0, languages = 0, context_names = 0,
              flows = 0, input_contexts = 0, output_contexts = 0, output_context_lifespans = 0,
              context_parameters = 0, fallback_flags = 0, priorities = 0, required_flags = 0,
              prompts = 0, entries = 0, synonyms = 0, text_variants = 0;
  std::vector<std::size_t> parameters_per_intent;
};

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::vector<fs::path> sorted_json(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Manifest walk_export(const fs::path& root) {
  Manifest m;
  const auto agent = read_json(root / "agent.json");
  std::set<std::string> langs{agent.value("language", "")};
  for (const auto& l : agent.value("supportedLanguages", Json::array())) langs.insert(l.get<std::string>());
  m.languages = langs.size();

  std::set<std::string> in_names, names;
  std::vector<std::pair<std::string, std::optional<std::int64_t>>> outs;
  for (const auto& p : sorted_json(root / "intents")) {
    if (p.filename().string().find("_usersays_") != std::string::npos) continue;
    const auto doc = read_json(p);
    ++m.intents;
    if (doc.contains("fallbackIntent") && doc["fallbackIntent"].is_boolean()) ++m.fallback_flags;
    if (doc.contains("priority") && doc["priority"].is_number_integer()) ++m.priorities;
    for (const auto& c : doc.value("contexts", Json::array())) {
      ++m.input_contexts;
      in_names.insert(to_lower(c.get<std::string>()));
      names.insert(to_lower(c.get<std::string>()));
    }
    std::size_t params = 0;
    for (const auto& r : doc.value("responses", Json::array())) {
      for (const auto& c : r.value("affectedContexts", Json::array())) {
        ++m.output_contexts;
        std::optional<std::int64_t> ls;
        if (c.contains("lifespan") && c["lifespan"].is_number_integer()) {
          ++m.output_context_lifespans;
          ls = c["lifespan"].get<std::int64_t>();
        }
        m.context_parameters += c.value("parameters", Json::object()).size();
        names.insert(to_lower(c["name"].get<std::string>()));
        outs.emplace_back(to_lower(c["name"].get<std::string>()), ls);
      }
      for (const auto& prm : r.value("parameters", Json::array())) {
        ++params;
        if (prm.contains("required") && prm["required"].is_boolean()) ++m.required_flags;
        m.prompts += prm.value("prompts", Json::array()).size();
      }
      for (const auto& msg : r.value("messages", Json::array())) {
        const auto type = msg.value("type", Json(0));
        if (type != 0 && type != "0") continue;
        const auto& speech = msg["speech"];
        m.text_variants += speech.is_string() ? 1 : speech.size();
      }
    }
    m.parameters_per_intent.push_back(params);
  }
  for (const auto& [name, ls] : outs) {
    if (ls.value_or(5) > 0 && in_names.count(name)) ++m.flows;
  }
  m.context_names = names.size();

  for (const auto& p : sorted_json(root / "entities")) {
    if (p.filename().string().find("_entries_") != std::string::npos) continue;
    const auto doc = read_json(p);
    ++m.entities;
    if (doc.value("isRegexp", false) || doc.value("isEnum", false)) continue;
    ++m.simple_entities;
    const auto stem = p.stem().string();
    for (const auto& q : sorted_json(root / "entities")) {
      if (q.filename().string().rfind(stem + "_entries_", 0) != 0) continue;
      for (const auto& entry : read_json(q)) {
        ++m.entries;
        m.synonyms += entry.value("synonyms", Json::array()).size();
      }
    }
  }
  return m;
}

inline Manifest manifest_from_json(const Json& j) {
  Manifest m;
#define CHATMUT_FIELD(f) m.f = j.at(#f).get<std::size_t>()
  CHATMUT_FIELD(intents);
  CHATMUT_FIELD(entities);
  CHATMUT_FIELD(simple_entities);
  CHATMUT_FIELD(languages);
  CHATMUT_FIELD(context_names);
  CHATMUT_FIELD(flows);
  CHATMUT_FIELD(input_contexts);
  CHATMUT_FIELD(output_contexts);
  CHATMUT_FIELD(output_context_lifespans);
  CHATMUT_FIELD(context_parameters);
  CHATMUT_FIELD(fallback_flags);
  CHATMUT_FIELD(priorities);
  CHATMUT_FIELD(required_flags);
  CHATMUT_FIELD(prompts);
  CHATMUT_FIELD(entries);
  CHATMUT_FIELD(synonyms);
  CHATMUT_FIELD(text_variants);
#undef CHATMUT_FIELD
  m.parameters_per_intent = j.at("parameters_per_intent").get<std::vector<std::size_t>>();
  return m;
}

// Closed form per operator.
inline std::map<std::string, std::size_t> expected_counts(const Manifest& m) {
  std::size_t params = 0, pair_targets = 0;
  for (auto p : m.parameters_per_intent) {
    params += p;
    if (p >= 2) pair_targets += p;
  }
  const bool other_context = m.context_names >= 2;
  return {
      {"changeChatbotLanguage", m.languages >= 2 ? 1 : 0},
      {"removeChatbotIntent", m.intents},
      {"removeChatbotEntity", m.entities},
      {"removeChatbotFlow", m.flows},
      {"changeFlowInContextName", other_context ? m.input_contexts : 0},
      {"removeFlowInContextName", m.input_contexts},
      {"changeFlowOutContextName", other_context ? m.output_contexts : 0},
      {"removeFlowOutContextName", m.output_contexts},
      {"changeFlowOutContextLifespan", m.output_context_lifespans},
      {"removeFlowOutContextParameter", m.context_parameters},
      {"changeIntentName", m.intents >= 2 ? m.intents : 0},
      {"toggleIntentFallback", m.fallback_flags},
      {"removeIntentFallback", m.fallback_flags},
      {"changeIntentPriority", m.priorities},
      {"removeIntentParameter", params},
      {"changeParameterName", pair_targets},
      {"removeParameterName", params},
      {"toggleParameterIsRequired", m.required_flags},
      {"removeParameterPrompt", m.prompts},
      {"changeSEntityName", m.simple_entities >= 2 ? m.simple_entities : 0},
      {"removeSEntityName", m.simple_entities},
      {"changeSInputValue", m.entries},
      {"changeSInputSynonym", m.synonyms},
      {"changeTActionValue", m.text_variants},
  };
}

inline std::map<std::string, std::size_t> actual_counts(const ChatbotModel& model) {
  std::map<std::string, std::size_t> out;
  for (const auto& spec : operator_catalog()) {
    out[std::string(spec.name)] = enumerate_targets(model, spec.id, 1).size();
  }
  return out;
}

inline std::vector<DiffEntry> declared_changes(const MutationDescriptor& d) {
  std::vector<DiffEntry> out;
  if (!d.mutated_value) {
    out.push_back({DiffOp::kRemove, d.target});
    for (const auto& c : d.companions) out.push_back({DiffOp::kRemove, Location{c, ""}});
  } else {
    out.push_back({DiffOp::kReplace, d.target});
  }
  std::sort(out.begin(), out.end(), [](const DiffEntry& a, const DiffEntry& b) { return a.loc < b.loc; });
  return out;
}


// Kill percentage with equivalents and invalid mutants taken out of the
// denominator, computed in floating point as a cross-check.
inline std::optional<int> expected_percent(std::size_t killed, std::size_t equivalent,
                                           std::size_t generated, std::size_t invalid) {
  const double denom = double(generated) - double(equivalent) - double(invalid);
  if (denom <= 0) return std::nullopt;
  return static_cast<int>(std::floor(100.0 * double(killed) / denom + 0.5));
}

// True when some other intent can win against `intent` for at least one
// utterance while every context of the agent is active. Checked by pinning
// the intent's priority to both ends of the range and watching the winner.
inline bool has_competitor(const ChatbotModel& model, std::size_t intent) {
  ConversationState all;
  for (const auto& i : model.intents) {
    for (const auto& c : i.input_contexts) all.active_contexts[to_lower(c.value)] = 5;
  }
  auto low = model;
  auto high = model;
  low.intents[intent].priority = 0;
  high.intents[intent].priority = kMaxIntentPriority;
  const Simulator sim_low(low);
  const Simulator sim_high(high);
  auto utterances = probe_alphabet({&model}, 100000).utterances;
  utterances.push_back("qqzx vvwk");  // reaches the fallback intents
  for (const auto& u : utterances) {
    if (sim_low.match(all, u).intent_index != sim_high.match(all, u).intent_index) return true;
  }
  return false;
}

// Index of the intent whose definition file is `file`.
inline std::optional<std::size_t> intent_by_file(const ChatbotModel& model, const std::string& file) {
  for (std::size_t i = 0; i < model.intents.size(); ++i) {
    if (model.intents[i].loc.file == file) return i;
  }
  return std::nullopt;
}

}  // namespace chatmut::testing

#endif  // CHATMUT_TESTS_ORACLES_HPP_
