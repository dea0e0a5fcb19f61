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

#include "chatmut/dialogflow_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chatmut/digest.hpp"

namespace chatmut {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kUsersaysInfix = "_usersays_";
constexpr std::string_view kEntriesInfix = "_entries_";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// "intents/Greet_usersays_en.json" -> {"Greet", "en"}
struct CompanionName {
  std::string stem;
  std::string language;
};

std::optional<CompanionName> split_companion(std::string_view filename, std::string_view infix) {
  if (!ends_with(filename, ".json")) return std::nullopt;
  auto base = filename.substr(0, filename.size() - 5);
  auto at = base.rfind(infix);
  if (at == std::string_view::npos || at == 0) return std::nullopt;
  auto lang = base.substr(at + infix.size());
  if (lang.empty()) return std::nullopt;
  return CompanionName{std::string(base.substr(0, at)), std::string(lang)};
}

std::string file_stem(std::string_view filename) {
  auto base = filename;
  if (ends_with(base, ".json")) base.remove_suffix(5);
  return std::string(base);
}

FileRole classify(const std::string& rel) {
  if (rel == "agent.json") return FileRole::kAgentManifest;
  auto slash = rel.find('/');
  if (slash == std::string::npos || rel.find('/', slash + 1) != std::string::npos) {
    return FileRole::kOpaque;
  }
  auto dir = std::string_view(rel).substr(0, slash);
  auto name = std::string_view(rel).substr(slash + 1);
  if (!ends_with(name, ".json")) return FileRole::kOpaque;
  if (dir == "intents") {
    return split_companion(name, kUsersaysInfix) ? FileRole::kUsersays : FileRole::kIntent;
  }
  if (dir == "entities") {
    return split_companion(name, kEntriesInfix) ? FileRole::kEntries : FileRole::kEntity;
  }
  return FileRole::kOpaque;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIoFailure, path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

std::shared_ptr<const Json> parse_document(const std::string& rel, const std::string& bytes) {
  try {
    return std::make_shared<const Json>(Json::parse(bytes));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, rel + ": " + e.what());
  }
}

void add_file(SourceMap& map, const std::string& rel, std::string bytes) {
  SourceFile file;
  file.role = classify(rel);
  auto shared = std::make_shared<const std::string>(std::move(bytes));
  if (file.role != FileRole::kOpaque) file.document = parse_document(rel, *shared);
  file.bytes = std::move(shared);
  map.files[rel] = std::move(file);
}

// Companion files whose definition is missing are kept verbatim.
void demote_orphans(SourceMap& map) {
  for (auto& [rel, file] : map.files) {
    const bool usersays = file.role == FileRole::kUsersays;
    if (!usersays && file.role != FileRole::kEntries) continue;
    auto slash = rel.find('/');
    auto name = rel.substr(slash + 1);
    auto comp = split_companion(name, usersays ? kUsersaysInfix : kEntriesInfix);
    auto def = rel.substr(0, slash + 1) + comp->stem + ".json";
    auto it = map.files.find(def);
    const FileRole want = usersays ? FileRole::kIntent : FileRole::kEntity;
    if (it == map.files.end() || it->second.role != want) {
      map.diagnostics.push_back({ErrorCode::kOrphanCompanion, rel, "no definition file " + def});
      file.role = FileRole::kOpaque;
      file.document.reset();
    }
  }
}

SourceMap read_tree(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_regular_file(root / "agent.json", ec)) {
    throw Error(ErrorCode::kMissingAgentManifest, (root / "agent.json").string());
  }
  SourceMap map;
  map.root = root;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    auto rel = fs::relative(it->path(), root).generic_string();
    add_file(map, rel, read_file(it->path()));
  }
  if (ec) throw Error(ErrorCode::kIoFailure, root.string() + ": " + ec.message());
  return map;
}

// --- document -> model -----------------------------------------------------

std::string str_or(const Json& obj, const char* key, std::string fallback = {}) {
  if (obj.is_object()) {
    auto it = obj.find(key);
    if (it != obj.end() && it->is_string()) return it->get<std::string>();
  }
  return fallback;
}

std::optional<bool> bool_opt(const Json& obj, const char* key) {
  if (!obj.is_object()) return std::nullopt;
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_boolean()) return std::nullopt;
  return it->get<bool>();
}

std::optional<std::int64_t> int_opt(const Json& obj, const char* key) {
  if (!obj.is_object()) return std::nullopt;
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) return std::nullopt;
  if (it->is_number_float()) return static_cast<std::int64_t>(it->get<double>());
  return it->get<std::int64_t>();
}

const Json& member(const Json& obj, const char* key) {
  static const Json kNull;
  if (!obj.is_object()) return kNull;
  auto it = obj.find(key);
  return it == obj.end() ? kNull : *it;
}

std::string scalar_text(const Json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

bool is_text_message(const Json& type) {
  if (type.is_null()) return true;
  if (type.is_number_integer()) return type.get<std::int64_t>() == 0;
  if (type.is_string()) {
    auto t = type.get<std::string>();
    return t == "0" || t == "message" || t == "text";
  }
  return false;
}

ActionKind rich_kind(const Json& type) {
  if ((type.is_number_integer() && type.get<std::int64_t>() == 3) ||
      (type.is_string() && (type.get<std::string>() == "3" || type.get<std::string>() == "image"))) {
    return ActionKind::kImage;
  }
  return ActionKind::kHttpResponse;
}

Action parse_message(const Json& msg, const Location& loc, const std::string& default_lang) {
  Action action;
  action.loc = loc;
  action.language = str_or(msg, "lang", default_lang);
  const auto& type = member(msg, "type");
  if (!is_text_message(type)) {
    action.kind = rich_kind(type);
    action.raw_payload = msg.dump();
    return action;
  }
  const auto& speech = member(msg, "speech");
  if (speech.is_string()) {
    if (!speech.get<std::string>().empty()) {
      action.text_variants.push_back({speech.get<std::string>(), loc.child("speech")});
    }
  } else if (speech.is_array()) {
    for (std::size_t v = 0; v < speech.size(); ++v) {
      if (speech[v].is_string()) {
        action.text_variants.push_back({speech[v].get<std::string>(), loc.child("speech").child(v)});
      }
    }
  }
  action.kind = action.text_variants.empty() ? ActionKind::kEmpty : ActionKind::kText;
  if (action.kind == ActionKind::kEmpty) action.raw_payload = msg.dump();
  return action;
}

Parameter parse_parameter(const Json& p, const Location& loc, const std::string& default_lang) {
  Parameter param;
  param.loc = loc;
  param.name = str_or(p, "name");
  param.data_type = str_or(p, "dataType");
  param.value_expr = str_or(p, "value");
  param.is_required = bool_opt(p, "required");
  param.is_list = bool_opt(p, "isList");
  const auto& prompts = member(p, "prompts");
  if (prompts.is_array()) {
    for (std::size_t q = 0; q < prompts.size(); ++q) {
      const auto& pr = prompts[q];
      if (pr.is_string()) {
        param.prompts.push_back({default_lang, pr.get<std::string>(), loc.child("prompts").child(q)});
      } else if (pr.is_object()) {
        param.prompts.push_back({str_or(pr, "lang", default_lang), str_or(pr, "value"),
                                 loc.child("prompts").child(q)});
      }
    }
  }
  return param;
}

OutputContext parse_output_context(const Json& c, const Location& loc) {
  OutputContext ctx;
  ctx.loc = loc;
  ctx.name = str_or(c, "name");
  ctx.lifespan = int_opt(c, "lifespan");
  const auto& params = member(c, "parameters");
  if (params.is_object()) {
    for (const auto& [key, value] : params.items()) {
      ctx.parameters.push_back({key, scalar_text(value), loc.child("parameters").child(key)});
    }
  }
  return ctx;
}

std::size_t language_rank(const ChatbotModel& model, std::string_view lang) {
  for (std::size_t i = 0; i < model.supported_languages.size(); ++i) {
    if (iequals(model.supported_languages[i].value, lang)) return i;
  }
  return model.supported_languages.size();
}

// Companion files of `dir/stem`, ordered by supported language then name.
std::vector<std::pair<std::string, std::string>> companions(const SourceMap& map,
                                                            const ChatbotModel& model,
                                                            const std::string& dir,
                                                            const std::string& stem,
                                                            FileRole role,
                                                            std::string_view infix) {
  std::vector<std::pair<std::string, std::string>> out;  // path, language
  const auto prefix = dir + "/" + stem + std::string(infix);
  for (auto it = map.files.lower_bound(prefix); it != map.files.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    if (it->second.role != role) continue;
    auto comp = split_companion(std::string_view(it->first).substr(dir.size() + 1), infix);
    if (!comp || comp->stem != stem) continue;
    out.emplace_back(it->first, comp->language);
  }
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return language_rank(model, a.second) < language_rank(model, b.second);
  });
  return out;
}

Intent parse_intent(const SourceMap& map, const ChatbotModel& model, const std::string& rel,
                    const Json& doc) {
  Intent intent;
  intent.loc = Location{rel, ""};
  intent.name = str_or(doc, "name");
  intent.priority = int_opt(doc, "priority").value_or(kDefaultIntentPriority);
  intent.is_fallback = bool_opt(doc, "fallbackIntent");

  const auto& contexts = member(doc, "contexts");
  if (contexts.is_array()) {
    for (std::size_t c = 0; c < contexts.size(); ++c) {
      if (contexts[c].is_string()) {
        intent.input_contexts.push_back(
            {contexts[c].get<std::string>(), intent.loc.child("contexts").child(c)});
      }
    }
  }

  const auto& responses = member(doc, "responses");
  if (responses.is_array()) {
    for (std::size_t r = 0; r < responses.size(); ++r) {
      const auto& resp = responses[r];
      const auto rloc = intent.loc.child("responses").child(r);
      const auto& affected = member(resp, "affectedContexts");
      if (affected.is_array()) {
        for (std::size_t k = 0; k < affected.size(); ++k) {
          intent.output_contexts.push_back(
              parse_output_context(affected[k], rloc.child("affectedContexts").child(k)));
        }
      }
      const auto& params = member(resp, "parameters");
      if (params.is_array()) {
        for (std::size_t p = 0; p < params.size(); ++p) {
          intent.parameters.push_back(
              parse_parameter(params[p], rloc.child("parameters").child(p), model.default_language));
        }
      }
      const auto& messages = member(resp, "messages");
      if (messages.is_array()) {
        for (std::size_t m = 0; m < messages.size(); ++m) {
          intent.responses.push_back(
              parse_message(messages[m], rloc.child("messages").child(m), model.default_language));
        }
      }
    }
  }
  if (bool_opt(doc, "webhookUsed").value_or(false)) {
    Action hook;
    hook.kind = ActionKind::kHttpRequest;
    hook.loc = intent.loc.child("webhookUsed");
    hook.raw_payload = R"({"webhookUsed":true})";
    intent.responses.push_back(std::move(hook));
  }

  auto slash = rel.find('/');
  const auto stem = file_stem(std::string_view(rel).substr(slash + 1));
  for (const auto& [path, lang] :
       companions(map, model, "intents", stem, FileRole::kUsersays, kUsersaysInfix)) {
    intent.companion_files.push_back(path);
    const auto& phrases = *map.files.at(path).document;
    if (!phrases.is_array()) continue;
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      TrainingPhrase phrase;
      phrase.loc = Location{path, "/" + std::to_string(i)};
      phrase.language = str_or(phrases[i], "lang", lang);
      const auto& data = member(phrases[i], "data");
      if (data.is_array()) {
        for (const auto& part : data) {
          PhrasePart pp;
          pp.text = str_or(part, "text");
          if (part.is_object() && part.contains("alias") && part["alias"].is_string()) {
            pp.alias = part["alias"].get<std::string>();
          }
          if (part.is_object() && part.contains("meta") && part["meta"].is_string()) {
            pp.entity_ref = part["meta"].get<std::string>();
          }
          phrase.parts.push_back(std::move(pp));
        }
      }
      intent.training_phrases.push_back(std::move(phrase));
    }
  }
  return intent;
}

EntityDef parse_entity(const SourceMap& map, const ChatbotModel& model, const std::string& rel,
                       const Json& doc) {
  EntityDef entity;
  entity.loc = Location{rel, ""};
  entity.name = str_or(doc, "name");
  if (bool_opt(doc, "isRegexp").value_or(false)) {
    entity.kind = EntityKind::kRegex;
  } else if (bool_opt(doc, "isEnum").value_or(false)) {
    entity.kind = EntityKind::kComplex;
  }
  if (entity.kind != EntityKind::kSimple) entity.raw_payload = doc.dump();

  auto slash = rel.find('/');
  const auto stem = file_stem(std::string_view(rel).substr(slash + 1));
  for (const auto& [path, lang] :
       companions(map, model, "entities", stem, FileRole::kEntries, kEntriesInfix)) {
    entity.companion_files.push_back(path);
    if (entity.kind != EntityKind::kSimple) continue;
    const auto& entries = *map.files.at(path).document;
    if (!entries.is_array()) continue;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      EntityEntry entry;
      entry.loc = Location{path, "/" + std::to_string(i)};
      entry.language = lang;
      entry.value = str_or(entries[i], "value");
      const auto& syn = member(entries[i], "synonyms");
      if (syn.is_array()) {
        for (std::size_t s = 0; s < syn.size(); ++s) {
          if (syn[s].is_string()) {
            entry.synonyms.push_back({syn[s].get<std::string>(), entry.loc.child("synonyms").child(s)});
          }
        }
      }
      entity.entries.push_back(std::move(entry));
    }
  }
  return entity;
}

}  // namespace

const SourceFile* SourceMap::find(const std::string& path) const {
  auto it = files.find(path);
  return it == files.end() ? nullptr : &it->second;
}

std::string SourceMap::content(const std::string& path) const {
  const auto& file = files.at(path);
  if (file.bytes) return *file.bytes;
  return serialize_document(*file.document);
}

std::string serialize_document(const Json& document) { return document.dump(2) + "\n"; }

ChatbotModel build_model(std::shared_ptr<const SourceMap> source) {
  ChatbotModel model;
  const SourceMap& map = *source;

  const auto* agent = map.find("agent.json");
  static const Json kEmpty = Json::object();
  const Json& manifest = agent && agent->document ? *agent->document : kEmpty;
  model.name = str_or(manifest, "displayName", map.root.filename().string());
  model.default_language = str_or(manifest, "language");
  const Location agent_loc{"agent.json", ""};
  if (!model.default_language.empty()) {
    model.supported_languages.push_back({model.default_language, agent_loc.child("language")});
  }
  const auto& langs = member(manifest, "supportedLanguages");
  if (langs.is_array()) {
    for (std::size_t i = 0; i < langs.size(); ++i) {
      if (!langs[i].is_string()) continue;
      auto code = langs[i].get<std::string>();
      if (code.empty() || model.supports_language(code)) continue;
      model.supported_languages.push_back({code, agent_loc.child("supportedLanguages").child(i)});
    }
  }

  for (const auto& [rel, file] : map.files) {
    if (file.role == FileRole::kIntent) {
      model.intents.push_back(parse_intent(map, model, rel, *file.document));
    } else if (file.role == FileRole::kEntity) {
      model.entities.push_back(parse_entity(map, model, rel, *file.document));
    }
  }
  model.source = std::move(source);
  return model;
}

ChatbotModel load_agent(const fs::path& root) {
  auto map = read_tree(root);
  demote_orphans(map);
  return build_model(std::make_shared<const SourceMap>(std::move(map)));
}

ChatbotModel load_overlay(const fs::path& base, const fs::path& overlay) {
  auto map = read_tree(base);
  std::error_code ec;
  if (!fs::is_directory(overlay, ec)) {
    throw Error(ErrorCode::kIoFailure, overlay.string() + " is not a directory");
  }
  for (auto it = fs::recursive_directory_iterator(overlay, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file()) continue;
    auto rel = fs::relative(it->path(), overlay).generic_string();
    if (rel == kRemovedMarker) {
      std::istringstream lines(read_file(it->path()));
      for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        map.files.erase(line);
        map.removed.insert(line);
      }
      continue;
    }
    add_file(map, rel, read_file(it->path()));
  }
  if (ec) throw Error(ErrorCode::kIoFailure, overlay.string() + ": " + ec.message());
  map.root = overlay;
  demote_orphans(map);
  return build_model(std::make_shared<const SourceMap>(std::move(map)));
}

WriteManifest save_agent(const ChatbotModel& model, const fs::path& dest, OutputMode mode,
                         const std::set<std::string>& dirty, bool overwrite) {
  if (!model.source) throw Error(ErrorCode::kInvalidArgument, "model has no source map");
  const SourceMap& map = *model.source;
  for (const auto& path : dirty) {
    if (!map.files.count(path) && !map.removed.count(path)) {
      throw Error(ErrorCode::kInvalidArgument, "dirty file not part of the agent: " + path);
    }
  }

  std::error_code ec;
  if (fs::exists(dest, ec) && !fs::is_empty(dest, ec)) {
    if (!overwrite) throw Error(ErrorCode::kDestinationNotEmpty, dest.string());
    fs::remove_all(dest, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, dest.string() + ": " + ec.message());
  }
  fs::create_directories(dest, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, dest.string() + ": " + ec.message());

  WriteManifest manifest;
  auto emit = [&](const std::string& rel) {
    auto bytes = map.content(rel);
    write_file(dest / rel, bytes);
    manifest.files.push_back({rel, sha256_hex(bytes)});
  };

  if (mode == OutputMode::kFull) {
    for (const auto& [rel, file] : map.files) emit(rel);
  } else {
    for (const auto& rel : dirty) {
      if (map.files.count(rel)) emit(rel);
    }
  }
  for (const auto& rel : dirty) {
    if (map.removed.count(rel)) manifest.removed.push_back(rel);
  }
  if (mode == OutputMode::kModifiedOnly && !manifest.removed.empty()) {
    std::string listing;
    for (const auto& rel : manifest.removed) listing += rel + "\n";
    write_file(dest / kRemovedMarker, listing);
  }
  return manifest;
}

namespace {

Json::json_pointer to_pointer(const Location& loc) {
  try {
    return Json::json_pointer(loc.pointer);
  } catch (const Json::exception&) {
    throw Error(ErrorCode::kPathNotFound, "malformed pointer " + loc.str());
  }
}

const Json& document_of(const SourceMap& map, const Location& loc) {
  const auto* file = map.find(loc.file);
  if (file == nullptr) throw Error(ErrorCode::kPathNotFound, loc.str());
  if (!file->document) throw Error(ErrorCode::kPathNotFound, loc.str() + " (opaque file)");
  return *file->document;
}

}  // namespace

ElementHandle resolve(const ChatbotModel& model, const Location& loc) {
  if (!model.source) throw Error(ErrorCode::kPathNotFound, loc.str());
  const auto& doc = document_of(*model.source, loc);
  auto ptr = to_pointer(loc);
  if (!doc.contains(ptr)) throw Error(ErrorCode::kPathNotFound, loc.str());
  return ElementHandle{loc, doc.at(ptr)};
}

bool resolves(const ChatbotModel& model, const Location& loc) {
  try {
    resolve(model, loc);
    return true;
  } catch (const Error&) {
    return false;
  }
}

EditResult apply_edits(const ChatbotModel& model, const std::vector<DocumentEdit>& edits) {
  if (!model.source) throw Error(ErrorCode::kInvalidArgument, "model has no source map");
  auto map = std::make_shared<SourceMap>(*model.source);
  EditResult result;

  for (const auto& edit : edits) {
    if (edit.kind == DocumentEdit::Kind::kRemoveFile) {
      if (!map->files.erase(edit.loc.file)) throw Error(ErrorCode::kPathNotFound, edit.loc.str());
      map->removed.insert(edit.loc.file);
      result.dirty.insert(edit.loc.file);
      continue;
    }
    auto it = map->files.find(edit.loc.file);
    if (it == map->files.end() || !it->second.document) {
      throw Error(ErrorCode::kPathNotFound, edit.loc.str());
    }
    auto& file = it->second;
    Json doc = *file.document;
    auto ptr = to_pointer(edit.loc);
    if (!doc.contains(ptr)) throw Error(ErrorCode::kPathNotFound, edit.loc.str());

    if (edit.kind == DocumentEdit::Kind::kReplace) {
      doc[ptr] = edit.value;
    } else {
      if (ptr.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot remove a document root");
      auto& parent = doc[ptr.parent_pointer()];
      const auto& token = ptr.back();
      if (parent.is_array()) {
        parent.erase(static_cast<std::size_t>(std::stoul(token)));
      } else {
        parent.erase(token);
      }
    }
    file.document = std::make_shared<const Json>(std::move(doc));
    file.bytes.reset();
    result.dirty.insert(edit.loc.file);
  }
  result.model = build_model(std::move(map));
  return result;
}

}  // namespace chatmut
