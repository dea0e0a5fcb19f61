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

#include "chatmut/errors.hpp"

namespace chatmut {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingAgentManifest: return "MissingAgentManifest";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kOrphanCompanion: return "OrphanCompanion";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kDestinationNotEmpty: return "DestinationNotEmpty";
    case ErrorCode::kPathNotFound: return "PathNotFound";
    case ErrorCode::kUnknownOperator: return "UnknownOperator";
    case ErrorCode::kStaleDescriptor: return "StaleDescriptor";
    case ErrorCode::kSelfReplacement: return "SelfReplacement";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kSourceLoadFailed: return "SourceLoadFailed";
    case ErrorCode::kOutputUnwritable: return "OutputUnwritable";
    case ErrorCode::kSuiteFailsOnOriginal: return "SuiteFailsOnOriginal";
    case ErrorCode::kMutantLoadFailed: return "MutantLoadFailed";
    case ErrorCode::kScriptMalformed: return "ScriptMalformed";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace chatmut
