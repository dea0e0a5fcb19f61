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

#include <gtest/gtest.h>

#include "chatmut/digest.hpp"
#include "test_support.hpp"

namespace chatmut {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::ScratchAgent;
using testing::TempDir;

std::vector<std::string> files_under(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ErrorCode load_error(const fs::path& root) {
  try {
    load_agent(root);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

TEST(LoadAgent, MissingManifest) {
  TempDir dir("io_nomanifest");
  testing::write_file(dir.path() / "intents/A.json", "{}");
  EXPECT_EQ(load_error(dir.path()), ErrorCode::kMissingAgentManifest);
  EXPECT_EQ(load_error(dir.path() / "nope"), ErrorCode::kMissingAgentManifest);
}

TEST(LoadAgent, MalformedDocument) {
  ScratchAgent agent("io_malformed");
  agent.put("intents/A.json", "{\"name\": ");
  EXPECT_EQ(load_error(agent.path()), ErrorCode::kMalformedDocument);
}

TEST(LoadAgent, OrphanCompanionIsKeptAsOpaque) {
  ScratchAgent agent("io_orphan");
  agent.put("intents/Ghost_usersays_en.json", R"([{"data": [{"text": "boo"}]}])");
  auto model = agent.load();
  EXPECT_TRUE(model.intents.empty());
  ASSERT_EQ(model.source->diagnostics.size(), 1u);
  EXPECT_EQ(model.source->diagnostics[0].code, ErrorCode::kOrphanCompanion);
  EXPECT_EQ(model.source->diagnostics[0].file, "intents/Ghost_usersays_en.json");
  EXPECT_EQ(model.source->find("intents/Ghost_usersays_en.json")->role, FileRole::kOpaque);
}

TEST(LoadAgent, MessageKindsAndWebhook) {
  ScratchAgent agent("io_messages");
  agent.put("intents/A.json", R"({
    "name": "A", "webhookUsed": true,
    "responses": [{"messages": [
      {"type": 0, "lang": "en", "speech": "single"},
      {"type": 3, "lang": "en", "imageUrl": "http://x"},
      {"type": 4, "lang": "en", "payload": {"k": 1}},
      {"type": "message", "speech": ["a", "b"]},
      {"type": 0, "lang": "en", "speech": []}
    ]}]
  })");
  auto model = agent.load();
  const auto& r = model.intents.at(0).responses;
  ASSERT_EQ(r.size(), 6u);
  EXPECT_EQ(r[0].kind, ActionKind::kText);
  EXPECT_EQ(r[0].text_variants.at(0).value, "single");
  EXPECT_EQ(r[0].text_variants.at(0).loc.pointer, "/responses/0/messages/0/speech");
  EXPECT_EQ(r[1].kind, ActionKind::kImage);
  EXPECT_EQ(r[2].kind, ActionKind::kHttpResponse);
  EXPECT_EQ(r[3].kind, ActionKind::kText);
  EXPECT_EQ(r[3].language, "en");  // default language fills in
  EXPECT_EQ(r[3].text_variants.at(1).loc.pointer, "/responses/0/messages/3/speech/1");
  EXPECT_EQ(r[4].kind, ActionKind::kEmpty);
  EXPECT_EQ(r[5].kind, ActionKind::kHttpRequest);
}

TEST(RoundTrip, FullSaveReloadsEqualAndByteIdentical) {
  for (const auto& name : testing::corpus_agents()) {
    const auto src = testing::agent_dir(name);
    auto model = load_agent(src);
    TempDir out("io_roundtrip_" + name);
    auto manifest = save_agent(model, out.path() / "copy", OutputMode::kFull, {});
    auto again = load_agent(out.path() / "copy");
    EXPECT_TRUE(model == again) << name;
    EXPECT_EQ(files_under(src), files_under(out.path() / "copy")) << name;
    for (const auto& rel : files_under(src)) {
      EXPECT_EQ(read_file(src / rel), read_file(out.path() / "copy" / rel)) << name << "/" << rel;
    }
    ASSERT_EQ(manifest.files.size(), files_under(src).size());
    for (const auto& f : manifest.files) EXPECT_EQ(f.digest, sha256_hex(read_file(src / f.path)));
  }
}

TEST(RoundTrip, EditedFileIsRewrittenOthersUntouched) {
  const auto src = testing::agent_dir("hotel_desk");
  auto model = load_agent(src);
  auto edited = apply_edits(model, {{DocumentEdit::Kind::kReplace,
                                     Location{"intents/Greet.json", "/priority"}, Json(7)}});
  EXPECT_EQ(edited.dirty, std::set<std::string>{"intents/Greet.json"});
  EXPECT_EQ(edited.model.find_intent("Greet")->priority, 7);
  EXPECT_EQ(model.find_intent("Greet")->priority, 500000);  // input untouched

  TempDir out("io_edited");
  save_agent(edited.model, out.path(), OutputMode::kFull, edited.dirty, true);
  for (const auto& rel : files_under(src)) {
    if (rel == "intents/Greet.json") {
      auto doc = testing::read_json(src / rel);
      doc["priority"] = 7;
      EXPECT_EQ(read_file(out.path() / rel), serialize_document(doc));
    } else {
      EXPECT_EQ(read_file(src / rel), read_file(out.path() / rel)) << rel;
    }
  }
  auto reloaded = load_agent(out.path());
  EXPECT_TRUE(reloaded == edited.model);
}

TEST(SaveAgent, ModifiedOnlyWithRemovalsOverlaysBack) {
  const auto src = testing::agent_dir("hotel_desk");
  auto model = load_agent(src);
  auto edited = apply_edits(model, {{DocumentEdit::Kind::kRemoveFile, Location{"entities/room.json", ""}, {}},
                                    {DocumentEdit::Kind::kRemoveFile, Location{"entities/room_entries_en.json", ""}, {}},
                                    {DocumentEdit::Kind::kRemoveFile, Location{"entities/room_entries_de.json", ""}, {}}});
  TempDir out("io_modified");
  auto manifest = save_agent(edited.model, out.path(), OutputMode::kModifiedOnly, edited.dirty, true);
  EXPECT_TRUE(manifest.files.empty());
  EXPECT_EQ(manifest.removed.size(), 3u);
  EXPECT_EQ(files_under(out.path()), std::vector<std::string>{kRemovedMarker});
  auto overlay = load_overlay(src, out.path());
  EXPECT_TRUE(overlay == edited.model);
  EXPECT_EQ(overlay.find_entity("room"), nullptr);
}

TEST(SaveAgent, ModifiedOnlyWritesDirtyFilesOnly) {
  auto model = load_agent(testing::agent_dir("hotel_desk"));
  auto edited = apply_edits(model, {{DocumentEdit::Kind::kRemove,
                                     Location{"intents/BookRoom.json", "/contexts/0"}, {}}});
  TempDir out("io_modified_one");
  save_agent(edited.model, out.path(), OutputMode::kModifiedOnly, edited.dirty, true);
  EXPECT_EQ(files_under(out.path()), std::vector<std::string>{"intents/BookRoom.json"});
  EXPECT_TRUE(load_overlay(testing::agent_dir("hotel_desk"), out.path()) == edited.model);
}

TEST(SaveAgent, RefusesNonEmptyDestination) {
  auto model = load_agent(testing::agent_dir("hotel_desk"));
  TempDir out("io_nonempty");
  testing::write_file(out.path() / "keep.txt", "x");
  try {
    save_agent(model, out.path(), OutputMode::kFull, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDestinationNotEmpty);
  }
  EXPECT_TRUE(fs::exists(out.path() / "keep.txt"));
  save_agent(model, out.path(), OutputMode::kFull, {}, true);
  EXPECT_FALSE(fs::exists(out.path() / "keep.txt"));
}

TEST(SaveAgent, DirtyMustBelongToAgent) {
  auto model = load_agent(testing::agent_dir("hotel_desk"));
  TempDir out("io_dirty");
  EXPECT_THROW(save_agent(model, out.path() / "x", OutputMode::kFull, {"intents/Nope.json"}), Error);
}

TEST(Resolve, FinderAndEdits) {
  auto model = load_agent(testing::agent_dir("hotel_desk"));
  auto h = resolve(model, Location{"intents/BookRoom.json", "/responses/0/parameters/0/name"});
  EXPECT_EQ(h.value, "date");
  EXPECT_TRUE(resolves(model, Location{"agent.json", "/language"}));
  EXPECT_FALSE(resolves(model, Location{"agent.json", "/nope"}));
  EXPECT_FALSE(resolves(model, Location{"missing.json", ""}));
  EXPECT_FALSE(resolves(model, Location{"agent.json", "bad pointer"}));
  try {
    apply_edits(model, {{DocumentEdit::Kind::kRemove, Location{"intents/Greet.json", "/nope"}, {}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPathNotFound);
  }
  EXPECT_THROW(apply_edits(model, {{DocumentEdit::Kind::kRemoveFile, Location{"nope.json", ""}, {}}}), Error);
}

TEST(SerializeDocument, TwoSpaceIndentAndNewline) {
  EXPECT_EQ(serialize_document(Json::parse(R"({"b": 1, "a": [true]})")),
            "{\n  \"a\": [\n    true\n  ],\n  \"b\": 1\n}\n");
}

}  // namespace
}  // namespace chatmut
