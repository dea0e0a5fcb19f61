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

#include <gtest/gtest.h>

#include <random>

#include "chatmut/operators.hpp"
#include "chatmut/simulator.hpp"
#include "test_support.hpp"

namespace chatmut {
namespace {

std::vector<std::string> me_turns(const ConvoScript& s) {
  std::vector<std::string> out;
  for (const auto& t : s.turns) {
    if (t.speaker == ConvoTurn::Speaker::kMe) out.push_back(t.utterance);
  }
  return out;
}

MutationDescriptor find_descriptor(const ChatbotModel& m, OperatorId op, const std::string& file) {
  for (const auto& d : enumerate_targets(m, op, 1)) {
    if (d.target.file == file) return d;
  }
  throw std::runtime_error("no descriptor for " + file);
}

TEST(Probe, IdentityIsLikelyEquivalent) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  auto r = equivalence_probe(hotel, hotel, 3);
  EXPECT_EQ(r.verdict, ProbeVerdict::kLikelyEquivalent);
  EXPECT_FALSE(r.witness);
  EXPECT_FALSE(r.alphabet_overflow);
  EXPECT_GT(r.states_explored, 0u);
}

TEST(Probe, UncontestedPriorityChangeIsLikelyEquivalent) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  for (const auto& d : enumerate_targets(hotel, OperatorId::kChangeIntentPriority, 1)) {
    auto mutant = apply(hotel, d);
    EXPECT_EQ(equivalence_probe(hotel, mutant.model, 3).verdict, ProbeVerdict::kLikelyEquivalent)
        << d.mutant_id;
  }
}

// Brute force: first alphabet utterance whose single-turn responses differ.
std::optional<std::string> first_single_turn_difference(const ChatbotModel& a, const ChatbotModel& b) {
  for (const auto& u : probe_alphabet({&a, &b}).utterances) {
    if (step(a, {}, u).responses != step(b, {}, u).responses) return u;
  }
  return std::nullopt;
}

TEST(Probe, RemovingGreetIsDistinguishedByHello) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  auto mutant = apply(hotel, find_descriptor(hotel, OperatorId::kRemoveChatbotIntent, "intents/Greet.json"));
  EXPECT_EQ(first_single_turn_difference(hotel, mutant.model), "hello");

  auto r = equivalence_probe(hotel, mutant.model, 3);
  ASSERT_EQ(r.verdict, ProbeVerdict::kDistinguished);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(me_turns(*r.witness), std::vector<std::string>{"hello"});
  EXPECT_EQ(run_convo(hotel, *r.witness).verdict, Verdict::kPass);
  EXPECT_EQ(run_convo(mutant.model, *r.witness).verdict, Verdict::kFail);
}

TEST(Probe, NeedsTwoTurnsForContextMutants) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  auto mutant = apply(hotel, find_descriptor(hotel, OperatorId::kChangeFlowInContextName, "intents/BookRoom.json"));
  EXPECT_FALSE(first_single_turn_difference(hotel, mutant.model));
  EXPECT_EQ(equivalence_probe(hotel, mutant.model, 1).verdict, ProbeVerdict::kLikelyEquivalent);
  auto r = equivalence_probe(hotel, mutant.model, 2);
  ASSERT_EQ(r.verdict, ProbeVerdict::kDistinguished);
  EXPECT_EQ(me_turns(*r.witness).size(), 2u);
}

TEST(Probe, ExploresOtherLanguages) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  std::optional<MutationDescriptor> de;
  for (const auto& d : enumerate_targets(hotel, OperatorId::kChangeTActionValue, 1)) {
    if (d.original_value == "Hallo!") de = d;
  }
  ASSERT_TRUE(de);
  auto mutant = apply(hotel, *de);
  auto r = equivalence_probe(hotel, mutant.model, 1);
  ASSERT_EQ(r.verdict, ProbeVerdict::kDistinguished);
  EXPECT_EQ(r.witness->language, "de");
  EXPECT_EQ(run_convo(mutant.model, *r.witness).verdict, Verdict::kFail);
}

TEST(Probe, DepthBounds) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  for (int depth : {0, 5, -1}) {
    try {
      equivalence_probe(hotel, hotel, depth);
      FAIL() << depth;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    }
  }
  EXPECT_NO_THROW(equivalence_probe(hotel, hotel, kMaxProbeDepth));
}

TEST(Alphabet, ExpandsEntitiesAndCaps) {
  auto hotel = load_agent(testing::agent_dir("hotel_desk"));
  auto a = probe_alphabet({&hotel});
  const std::set<std::string> got(a.utterances.begin(), a.utterances.end());
  EXPECT_EQ(got.size(), a.utterances.size());
  for (const char* u : {"book room 101", "book room 102", "book room suite", "book room one oh one",
                        "book room the suite", "i want the 101", "hello", "guten tag",
                        "zimmer hunderteins buchen", "ein zimmer buchen"}) {
    EXPECT_TRUE(got.count(u)) << u;
  }
  EXPECT_FALSE(a.overflow);
  auto capped = probe_alphabet({&hotel}, 4);
  EXPECT_TRUE(capped.overflow);
  EXPECT_EQ(capped.utterances.size(), 4u);
  auto r = equivalence_probe(hotel, hotel, 1, 4);
  EXPECT_TRUE(r.alphabet_overflow);
  EXPECT_EQ(r.alphabet_size, 4u);
}

// Witness soundness and consistency with scripts over the alphabet, for every
// corpus mutant.
TEST(Property, WitnessSoundAndEquivalentMutantsSurviveAlphabetScripts) {
  std::mt19937_64 rng(2026);
  std::size_t distinguished = 0, equivalent = 0;
  for (const auto& name : testing::corpus_agents()) {
    const auto model = load_agent(testing::agent_dir(name));
    const auto alphabet = probe_alphabet({&model}).utterances;
    for (const auto& spec : operator_catalog()) {
      for (const auto& d : enumerate_targets(model, spec.id, 1)) {
        auto mutant = apply(model, d);
        auto r = equivalence_probe(model, mutant.model, 2);
        if (r.verdict == ProbeVerdict::kDistinguished) {
          ++distinguished;
          EXPECT_EQ(run_convo(model, *r.witness).verdict, Verdict::kPass) << d.mutant_id;
          EXPECT_EQ(run_convo(mutant.model, *r.witness).verdict, Verdict::kFail) << d.mutant_id;
          continue;
        }
        ++equivalent;
        if (r.alphabet_overflow) continue;
        for (int trial = 0; trial < 20; ++trial) {
          std::vector<std::string> utterances;
          const auto turns = 1 + rng() % 2;
          for (std::size_t t = 0; t < turns; ++t) utterances.push_back(alphabet[rng() % alphabet.size()]);
          ConvoScript script;
          script.name = "random";
          ConversationState state;
          for (const auto& u : utterances) {
            script.turns.push_back({ConvoTurn::Speaker::kMe, u, {}});
            auto s = step(model, state, u);
            state = s.state;
            for (const auto& text : s.responses) {
              script.turns.push_back({ConvoTurn::Speaker::kBot, {}, {BotExpectation::Kind::kExact, {text}}});
            }
          }
          EXPECT_EQ(run_convo(mutant.model, script).verdict, Verdict::kPass) << d.mutant_id;
        }
      }
    }
  }
  EXPECT_GT(distinguished, 50u);
  EXPECT_GT(equivalent, 10u);
}

}  // namespace
}  // namespace chatmut
