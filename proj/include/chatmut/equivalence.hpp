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

#ifndef CHATMUT_EQUIVALENCE_HPP_
#define CHATMUT_EQUIVALENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "chatmut/convo.hpp"
#include "chatmut/metamodel.hpp"

namespace chatmut {

inline constexpr int kMaxProbeDepth = 4;
inline constexpr std::size_t kProbeAlphabetCap = 200;

enum class ProbeVerdict { kDistinguished, kLikelyEquivalent };

std::string_view to_string(ProbeVerdict verdict);

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::kLikelyEquivalent;
  std::optional<ConvoScript> witness;  // set when distinguished
  bool alphabet_overflow = false;      // alphabet truncated to the cap
  std::size_t alphabet_size = 0;
  std::size_t states_explored = 0;
};

struct Alphabet {
  std::vector<std::string> utterances;  // normalized, first-seen order
  bool overflow = false;
};

/// Every training phrase with each entity-typed part instantiated by each
/// entry value and synonym of its entity. Union over the given models, capped.
Alphabet probe_alphabet(const std::vector<const ChatbotModel*>& models,
                        std::size_t cap = kProbeAlphabetCap);

/// Bounded breadth-first search over the product of both simulators, in every
/// language the original supports. Revisited dialogue states are pruned.
/// A turn distinguishes the models when a script expecting the original's
/// responses would fail on the mutant. Throws kInvalidArgument unless
/// 1 <= depth <= kMaxProbeDepth.
ProbeResult equivalence_probe(const ChatbotModel& original, const ChatbotModel& mutant,
                              int depth, std::size_t cap = kProbeAlphabetCap);

}  // namespace chatmut

#endif  // CHATMUT_EQUIVALENCE_HPP_
