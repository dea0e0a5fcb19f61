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

#ifndef CHATMUT_LOCATION_HPP_
#define CHATMUT_LOCATION_HPP_

#include <compare>
#include <string>
#include <string_view>

namespace chatmut {

/// A place inside an agent: a file relative to the agent root plus a JSON
/// pointer into that file's document. An empty pointer names the whole file.
struct Location {
  std::string file;
  std::string pointer;

  /// Appends one reference token, escaping '~' and '/'.
  Location child(std::string_view token) const;
  Location child(std::size_t index) const;

  std::string str() const { return file + "#" + pointer; }

  friend auto operator<=>(const Location&, const Location&) = default;
};

/// Parent pointer of a JSON pointer ("" for the root or a top-level token).
std::string parent_pointer(std::string_view pointer);

std::string escape_pointer_token(std::string_view token);

}  // namespace chatmut

#endif  // CHATMUT_LOCATION_HPP_
