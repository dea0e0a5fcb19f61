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

#include "chatmut/structural_diff.hpp"

#include <algorithm>

namespace chatmut {

std::string_view to_string(DiffOp op) {
  switch (op) {
    case DiffOp::kAdd: return "add";
    case DiffOp::kRemove: return "remove";
    case DiffOp::kReplace: return "replace";
  }
  return "replace";
}

namespace {

void diff_into(const Json& a, const Json& b, const Location& at, std::vector<DiffEntry>& out);

void diff_arrays(const Json& a, const Json& b, const Location& at, std::vector<DiffEntry>& out) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // lcs[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  // Walk the alignment; between matches, pair deletions with insertions and
  // recurse into the pairs, leftovers become plain removes or adds.
  std::vector<std::size_t> dels;
  std::vector<std::size_t> adds;
  auto flush = [&] {
    const std::size_t paired = std::min(dels.size(), adds.size());
    for (std::size_t k = 0; k < paired; ++k) {
      diff_into(a[dels[k]], b[adds[k]], at.child(dels[k]), out);
    }
    for (std::size_t k = paired; k < dels.size(); ++k) {
      out.push_back({DiffOp::kRemove, at.child(dels[k])});
    }
    for (std::size_t k = paired; k < adds.size(); ++k) {
      out.push_back({DiffOp::kAdd, at.child(adds[k])});
    }
    dels.clear();
    adds.clear();
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      flush();
      ++i;
      ++j;
    } else if (j == m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1])) {
      dels.push_back(i++);
    } else {
      adds.push_back(j++);
    }
  }
  flush();
}

void diff_into(const Json& a, const Json& b, const Location& at, std::vector<DiffEntry>& out) {
  if (a == b) return;
  if (a.is_object() && b.is_object()) {
    for (const auto& [key, value] : a.items()) {
      auto it = b.find(key);
      if (it == b.end()) {
        out.push_back({DiffOp::kRemove, at.child(key)});
      } else {
        diff_into(value, *it, at.child(key), out);
      }
    }
    for (const auto& [key, value] : b.items()) {
      if (!a.contains(key)) out.push_back({DiffOp::kAdd, at.child(key)});
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    diff_arrays(a, b, at, out);
    return;
  }
  out.push_back({DiffOp::kReplace, at});
}

}  // namespace

std::vector<DiffEntry> diff_documents(const Json& before, const Json& after,
                                      const std::string& file) {
  std::vector<DiffEntry> out;
  diff_into(before, after, Location{file, ""}, out);
  return out;
}

std::vector<DiffEntry> diff_sources(const SourceMap& before, const SourceMap& after) {
  std::vector<DiffEntry> out;
  for (const auto& [rel, file] : before.files) {
    const auto* other = after.find(rel);
    if (other == nullptr) {
      out.push_back({DiffOp::kRemove, Location{rel, ""}});
      continue;
    }
    if (file.document && other->document) {
      auto d = diff_documents(*file.document, *other->document, rel);
      out.insert(out.end(), d.begin(), d.end());
    } else if (before.content(rel) != after.content(rel)) {
      out.push_back({DiffOp::kReplace, Location{rel, ""}});
    }
  }
  for (const auto& [rel, file] : after.files) {
    if (before.find(rel) == nullptr) out.push_back({DiffOp::kAdd, Location{rel, ""}});
  }
  return out;
}

}  // namespace chatmut
