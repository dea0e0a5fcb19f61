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

#include "chatmut/equivalence.hpp"

#include <set>
#include <unordered_set>

#include "chatmut/errors.hpp"
#include "chatmut/simulator.hpp"

namespace chatmut {

std::string_view to_string(ProbeVerdict verdict) {
  return verdict == ProbeVerdict::kDistinguished ? "DISTINGUISHED" : "LIKELY_EQUIVALENT";
}

namespace {

std::vector<std::string> part_choices(const ChatbotModel& model, const PhrasePart& part) {
  if (part.entity_ref && !part.entity_ref->empty()) {
    std::string_view name = *part.entity_ref;
    if (name.front() == '@') name.remove_prefix(1);
    const auto* entity = model.find_entity(name);
    if (entity != nullptr && entity->kind == EntityKind::kSimple && !entity->entries.empty()) {
      std::vector<std::string> values;
      std::set<std::string> seen;
      auto take = [&](const std::string& v) {
        if (seen.insert(normalize_utterance(v)).second) values.push_back(v);
      };
      for (const auto& entry : entity->entries) take(entry.value);
      // Synonyms after values so the cap drops them first.
      for (const auto& entry : entity->entries) {
        for (const auto& syn : entry.synonyms) take(syn.value);
      }
      return values;
    }
  }
  return {part.text};
}

// Whether a script expecting `want` fails on `got`.
bool observably_differs(const std::vector<std::string>& want, const std::vector<std::string>& got) {
  for (std::size_t k = 0; k < want.size(); ++k) {
    if (k >= got.size()) return true;
    BotExpectation e{BotExpectation::Kind::kExact, {want[k]}};
    if (!e.matches(got[k])) return true;
  }
  return false;
}

struct Node {
  std::size_t language;
  ConversationState original;
  ConversationState mutant;
  std::vector<std::size_t> path;
};

ConvoScript make_witness(const Simulator& original, const std::string& language,
                         const std::vector<std::string>& utterances) {
  ConvoScript script;
  script.name = "witness";
  if (!language.empty()) script.language = language;
  ConversationState state;
  for (const auto& u : utterances) {
    script.turns.push_back({ConvoTurn::Speaker::kMe, u, {}});
    auto r = original.step(state, u, language);
    state = std::move(r.state);
    for (const auto& text : r.responses) {
      ConvoTurn bot;
      bot.speaker = ConvoTurn::Speaker::kBot;
      bot.expectation = BotExpectation{BotExpectation::Kind::kExact, {text}};
      script.turns.push_back(std::move(bot));
    }
  }
  return script;
}

}  // namespace

Alphabet probe_alphabet(const std::vector<const ChatbotModel*>& models, std::size_t cap) {
  Alphabet alphabet;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& u) {
    if (u.empty() || seen.count(u)) return true;
    if (alphabet.utterances.size() >= cap) {
      alphabet.overflow = true;
      return false;
    }
    seen.insert(u);
    alphabet.utterances.push_back(u);
    return true;
  };

  for (const auto* model : models) {
    for (const auto& intent : model->intents) {
      for (const auto& phrase : intent.training_phrases) {
        std::vector<std::vector<std::string>> choices;
        for (const auto& part : phrase.parts) choices.push_back(part_choices(*model, part));
        if (choices.empty()) continue;
        // Odometer over the cartesian product.
        std::vector<std::size_t> at(choices.size(), 0);
        for (;;) {
          std::string text;
          for (std::size_t i = 0; i < choices.size(); ++i) text += choices[i][at[i]];
          if (!add(normalize_utterance(text))) return alphabet;
          bool done = true;
          for (std::size_t i = choices.size(); i-- > 0;) {
            if (++at[i] < choices[i].size()) {
              done = false;
              break;
            }
            at[i] = 0;
          }
          if (done) break;
        }
      }
    }
  }
  return alphabet;
}

ProbeResult equivalence_probe(const ChatbotModel& original, const ChatbotModel& mutant, int depth,
                              std::size_t cap) {
  if (depth < 1 || depth > kMaxProbeDepth) {
    throw Error(ErrorCode::kInvalidArgument,
                "probe depth must be within [1, " + std::to_string(kMaxProbeDepth) + "]");
  }
  ProbeResult result;
  const auto alphabet = probe_alphabet({&original, &mutant}, cap);
  result.alphabet_overflow = alphabet.overflow;
  result.alphabet_size = alphabet.utterances.size();

  std::vector<std::string> languages;
  for (const auto& l : original.supported_languages) languages.push_back(l.value);
  if (languages.empty()) languages.push_back(original.default_language);

  const Simulator sim_original(original);
  const Simulator sim_mutant(mutant);
  std::vector<Node> frontier;
  std::unordered_set<std::string> visited;
  for (std::size_t l = 0; l < languages.size(); ++l) {
    frontier.push_back({l, {}, {}, {}});
    visited.insert(std::to_string(l) + "#" + ConversationState{}.dialogue_key() + "#" +
                   ConversationState{}.dialogue_key());
  }

  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    std::vector<Node> next;
    for (const auto& node : frontier) {
      // Index 0 runs each model in its own default language, like a script
      // without "#lang".
      const std::string lang = node.language == 0 ? std::string() : languages[node.language];
      for (std::size_t u = 0; u < alphabet.utterances.size(); ++u) {
        const auto& utterance = alphabet.utterances[u];
        auto ro = sim_original.step(node.original, utterance, lang);
        auto rm = sim_mutant.step(node.mutant, utterance, lang);
        ++result.states_explored;
        if (observably_differs(ro.responses, rm.responses)) {
          std::vector<std::string> seq;
          for (auto i : node.path) seq.push_back(alphabet.utterances[i]);
          seq.push_back(utterance);
          result.verdict = ProbeVerdict::kDistinguished;
          result.witness = make_witness(sim_original, lang, seq);
          return result;
        }
        auto key = std::to_string(node.language) + "#" + ro.state.dialogue_key() + "#" +
                   rm.state.dialogue_key();
        if (!visited.insert(key).second) continue;
        Node child{node.language, std::move(ro.state), std::move(rm.state), node.path};
        child.path.push_back(u);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return result;
}

}  // namespace chatmut
