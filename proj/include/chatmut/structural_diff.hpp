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

#ifndef CHATMUT_STRUCTURAL_DIFF_HPP_
#define CHATMUT_STRUCTURAL_DIFF_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "chatmut/dialogflow_io.hpp"
#include "chatmut/location.hpp"

namespace chatmut {

enum class DiffOp { kAdd, kRemove, kReplace };

std::string_view to_string(DiffOp op);

struct DiffEntry {
  DiffOp op;
  Location loc;  // pointer into `before` for Remove/Replace, into `after` for Add

  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

/// Minimal tree diff. Arrays are aligned on their longest common
/// subsequence, so deleting one element yields one Remove rather than a
/// cascade of shifted replacements.
std::vector<DiffEntry> diff_documents(const Json& before, const Json& after,
                                      const std::string& file = {});

/// Diff of two whole agents: file additions and deletions are reported at
/// the file root, parsed documents are diffed structurally, opaque files by
/// content.
std::vector<DiffEntry> diff_sources(const SourceMap& before, const SourceMap& after);

}  // namespace chatmut

#endif  // CHATMUT_STRUCTURAL_DIFF_HPP_
