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

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace chatmut {
namespace {

using EC = ElementCategory;

std::vector<std::pair<ViolationKind, std::string>> kinds_of(const std::vector<Violation>& vs) {
  std::vector<std::pair<ViolationKind, std::string>> out;
  for (const auto& v : vs) out.emplace_back(v.kind, v.loc.str());
  return out;
}

TEST(Validate, CorpusAgentsAreClean) {
  for (const auto& name : testing::corpus_agents()) {
    auto model = load_agent(testing::agent_dir(name));
    EXPECT_TRUE(validate(model).empty()) << name;
  }
}

TEST(Validate, ReportsEachBrokenInvariantAtItsLocation) {
  testing::ScratchAgent agent("validate_broken",
                              R"({"language": "en", "supportedLanguages": ["de"]})");
  agent.put("intents/A.json", R"({
    "name": "Same", "priority": 2000000, "contexts": [""],
    "responses": [{
      "affectedContexts": [{"name": "", "lifespan": -1}],
      "parameters": [{"name": "x", "prompts": ["?"]}, {"name": "x", "required": true}, {"name": ""}],
      "messages": [{"type": 0, "lang": "en", "speech": []}]
    }]
  })");
  agent.put("intents/A_usersays_en.json", R"([
    {"data": []},
    {"data": [{"text": "go "}, {"text": "home", "alias": "where"}]}
  ])");
  agent.put("intents/B.json", R"({"name": "Same"})");
  agent.put("entities/e.json", R"({"name": "e"})");
  agent.put("entities/e_entries_en.json", R"([{"value": "v", "synonyms": []}])");
  agent.put("entities/f.json", R"({"name": "e"})");

  using VK = ViolationKind;
  const std::vector<std::pair<VK, std::string>> want{
      {VK::kPriorityOutOfRange, "intents/A.json#/priority"},
      {VK::kPromptsWithoutRequired, "intents/A.json#/responses/0/parameters/0/prompts"},
      {VK::kDuplicateParameterName, "intents/A.json#/responses/0/parameters/1/name"},
      {VK::kEmptyParameterName, "intents/A.json#/responses/0/parameters/2"},
      {VK::kEmptyTrainingPhrase, "intents/A_usersays_en.json#/0"},
      {VK::kAliasWithoutEntity, "intents/A_usersays_en.json#/1/data/1"},
      {VK::kDanglingAlias, "intents/A_usersays_en.json#/1/data/1/alias"},
      {VK::kEmptyContextName, "intents/A.json#/responses/0/affectedContexts/0"},
      {VK::kNegativeLifespan, "intents/A.json#/responses/0/affectedContexts/0/lifespan"},
      {VK::kEmptyContextName, "intents/A.json#/contexts/0"},
      {VK::kDuplicateIntentName, "intents/B.json#/name"},
      {VK::kEntryWithoutSynonyms, "entities/e_entries_en.json#/0"},
      {VK::kDuplicateEntityName, "entities/f.json#/name"},
      {VK::kEmptySimpleEntity, "entities/f.json#"},
  };
  EXPECT_EQ(kinds_of(validate(agent.load())), want);
}

TEST(Validate, TextActionWithoutVariants) {
  // An empty speech list loads as an Empty action, so build the model by hand.
  auto model = load_agent(testing::agent_dir("hotel_desk"));
  model.intents[0].responses[0].text_variants.clear();
  auto vs = validate(model);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kTextActionWithoutVariants);
  EXPECT_EQ(vs[0].loc, model.intents[0].responses[0].loc);
}

TEST(Validate, LanguageProblems) {
  testing::ScratchAgent agent("validate_lang", R"({"displayName": "x"})");
  auto vs = validate(agent.load());
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kNoSupportedLanguages);
}

TEST(Model, HotelDeskShape) {
  auto m = load_agent(testing::agent_dir("hotel_desk"));
  EXPECT_EQ(m.name, "HotelDesk");
  EXPECT_EQ(m.default_language, "en");
  ASSERT_EQ(m.supported_languages.size(), 2u);
  EXPECT_EQ(m.supported_languages[1].value, "de");
  EXPECT_TRUE(m.supports_language("DE"));

  std::vector<std::string> intents;
  for (const auto& i : m.intents) intents.push_back(i.name);
  EXPECT_EQ(intents, (std::vector<std::string>{"BookRoom", "Default Fallback Intent", "Greet"}));

  const auto* book = m.find_intent("BookRoom");
  ASSERT_NE(book, nullptr);
  ASSERT_EQ(book->input_contexts.size(), 1u);
  EXPECT_EQ(book->input_contexts[0].value, "greeted");
  ASSERT_EQ(book->parameters.size(), 2u);
  EXPECT_TRUE(book->parameters[0].required());
  EXPECT_FALSE(book->parameters[1].required());
  EXPECT_EQ(book->parameters[0].prompts_for("de").front()->text, "Wann?");
  EXPECT_EQ(book->training_phrases.size(), 5u);
  EXPECT_EQ(book->training_phrases[0].text(), "book room 101");
  EXPECT_TRUE(m.find_intent("Default Fallback Intent")->fallback());

  const auto* room = m.find_entity("room");
  ASSERT_NE(room, nullptr);
  EXPECT_EQ(room->kind, EntityKind::kSimple);
  EXPECT_EQ(room->entries.size(), 5u);
  EXPECT_EQ(m.find_entity("bookingref")->kind, EntityKind::kRegex);
}

TEST(ElementIndex, CountsMatchHandCount) {
  auto idx = element_index(load_agent(testing::agent_dir("hotel_desk")));
  EXPECT_EQ(idx.of(EC::kIntent).size(), 3u);
  EXPECT_EQ(idx.of(EC::kEntity).size(), 2u);
  EXPECT_EQ(idx.of(EC::kFlow).size(), 1u);
  EXPECT_EQ(idx.of(EC::kParameter).size(), 2u);
  EXPECT_EQ(idx.of(EC::kPrompt).size(), 2u);
  EXPECT_EQ(idx.of(EC::kInputContext).size(), 1u);
  EXPECT_EQ(idx.of(EC::kOutputContext).size(), 2u);
  EXPECT_EQ(idx.of(EC::kContextParameter).size(), 1u);
  EXPECT_EQ(idx.of(EC::kEntityEntry).size(), 5u);
  EXPECT_EQ(idx.of(EC::kSynonym).size(), 9u);
  EXPECT_EQ(idx.of(EC::kTextVariant).size(), 8u);
  EXPECT_EQ(idx.of(EC::kLanguage).size(), 2u);
  EXPECT_EQ(idx.total(), 38u);
  EXPECT_EQ(idx.of(EC::kFlow)[0].label, "Greet -> greeted -> BookRoom");
}

TEST(ProducesFlow, ConsumedAndLiveContextsOnly) {
  auto m = load_agent(testing::agent_dir("hotel_desk"));
  const auto& greet = *m.find_intent("Greet");
  const auto& book = *m.find_intent("BookRoom");
  EXPECT_TRUE(produces_flow(m, greet.output_contexts[0]));
  EXPECT_FALSE(produces_flow(m, book.output_contexts[0]));
  OutputContext cleared{"GREETED", 0, {}, {}};
  EXPECT_FALSE(produces_flow(m, cleared));
  OutputContext upper{"GREETED", std::nullopt, {}, {}};
  EXPECT_TRUE(produces_flow(m, upper));
}

TEST(Strings, CaseHelpers) {
  EXPECT_TRUE(iequals("Greeted", "gREETED"));
  EXPECT_FALSE(iequals("greeted", "greet"));
  EXPECT_EQ(to_lower("MiXeD 1"), "mixed 1");
}

}  // namespace
}  // namespace chatmut
