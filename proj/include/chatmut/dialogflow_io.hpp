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

#ifndef CHATMUT_DIALOGFLOW_IO_HPP_
#define CHATMUT_DIALOGFLOW_IO_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "chatmut/errors.hpp"
#include "chatmut/location.hpp"
#include "chatmut/metamodel.hpp"
#include "json.hpp"

namespace chatmut {

using Json = nlohmann::json;

// Dialogflow ES agent export:
//
//   agent.json, package.json
//   intents/<name>.json, intents/<name>_usersays_<lang>.json
//   entities/<name>.json, entities/<name>_entries_<lang>.json
//
// Everything else is carried verbatim.

enum class FileRole {
  kAgentManifest,
  kIntent,
  kUsersays,
  kEntity,
  kEntries,
  kOpaque,
};

struct SourceFile {
  FileRole role = FileRole::kOpaque;
  // Bytes as read from disk. Null once the document has been edited; the
  // file is then serialized from `document`.
  std::shared_ptr<const std::string> bytes;
  std::shared_ptr<const Json> document;  // null for opaque files
};

struct LoadDiagnostic {
  ErrorCode code;
  std::string file;
  std::string message;
};

struct SourceMap {
  std::filesystem::path root;
  std::map<std::string, SourceFile> files;  // relative path, '/' separated
  std::set<std::string> removed;            // files deleted by a mutation
  std::vector<LoadDiagnostic> diagnostics;

  const SourceFile* find(const std::string& path) const;
  /// Bytes that save_agent would write for `path`.
  std::string content(const std::string& path) const;
};

/// Reads an unpacked agent export. Throws kMissingAgentManifest or
/// kMalformedDocument; orphan companion files become diagnostics.
ChatbotModel load_agent(const std::filesystem::path& root);

/// Loads `base` and replaces or deletes files as recorded in `overlay`, a
/// directory written by save_agent in modified-only mode.
ChatbotModel load_overlay(const std::filesystem::path& base, const std::filesystem::path& overlay);

/// Rebuilds the typed model from a set of documents. Never throws on odd
/// but well-typed content: mutants must always load.
ChatbotModel build_model(std::shared_ptr<const SourceMap> source);

enum class OutputMode { kFull, kModifiedOnly };

struct WrittenFile {
  std::string path;
  std::string digest;

  friend bool operator==(const WrittenFile&, const WrittenFile&) = default;
};

struct WriteManifest {
  std::vector<WrittenFile> files;
  std::vector<std::string> removed;
};

/// Name of the marker listing deleted files in a modified-only output.
inline constexpr const char* kRemovedMarker = ".removed";

WriteManifest save_agent(const ChatbotModel& model, const std::filesystem::path& dest,
                         OutputMode mode, const std::set<std::string>& dirty,
                         bool overwrite = false);

/// Normalized serialization used for every rewritten document.
std::string serialize_document(const Json& document);

struct ElementHandle {
  Location loc;
  Json value;
};

/// The platform finder: the current value at a location. Throws kPathNotFound.
ElementHandle resolve(const ChatbotModel& model, const Location& loc);
bool resolves(const ChatbotModel& model, const Location& loc);

struct DocumentEdit {
  enum class Kind { kReplace, kRemove, kRemoveFile };
  Kind kind;
  Location loc;
  Json value;  // kReplace only
};

struct EditResult {
  ChatbotModel model;
  std::set<std::string> dirty;
};

/// Applies edits to a copy of the model's documents and rebuilds the model.
/// The input model is left untouched. Throws kPathNotFound.
EditResult apply_edits(const ChatbotModel& model, const std::vector<DocumentEdit>& edits);

}  // namespace chatmut

#endif  // CHATMUT_DIALOGFLOW_IO_HPP_
