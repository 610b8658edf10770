// Copyright 2026 The evsound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Listening-session bundles for the browser runner: trial order, question
// texts and audio, plus validation of manifests and returned results.

#ifndef EVSOUND_SESSION_H_
#define EVSOUND_SESSION_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evsound/pipeline.h"
#include "evsound/propagation.h"

namespace evsound {

inline constexpr const char* kSessionManifestName = "session_manifest.json";
inline constexpr int kTrainingStimulusId = 15;

struct Question {
  std::string id;
  std::string text;
  int min = 0;
  int max = 10;
};

// Noticeability, informativeness, annoyance, in presentation order.
const std::vector<Question>& StudyQuestions();
std::string_view SessionInstructions();
std::string_view TrialInstruction();

struct SessionTrial {
  int index = 0;
  int stimulus_id = 0;
  std::string audio;
  double duration = 0.0;
  bool training = false;
};

struct SessionManifest {
  int schema_version = kSessionSchemaVersion;
  std::string session_id;
  std::uint64_t seed = 0;
  double sample_rate = 0.0;
  double calibration_pa_per_unit = 0.0;
  Trajectory trajectory;
  std::string instructions;
  std::string trial_instruction;
  std::vector<Question> questions;
  // Training trial first, then the experimental trials in playback order.
  std::vector<SessionTrial> trials;
};

// Experimental order is SeededPermutation(15, seed) mapped to ids 1..15.
SessionManifest BuildSessionManifest(const StimulusManifest& stimuli,
                                     std::uint64_t seed);
std::string SessionManifestToJson(const SessionManifest& manifest);
// Throws a validation error listing every problem.
SessionManifest SessionManifestFromJson(std::string_view text);

std::string_view SessionManifestSchema();
std::string_view SessionResultSchema();

// Validates a JSON document against a JSON Schema. Supports the keywords
// used by the bundled schemas: type, properties, required,
// additionalProperties, items, minItems, maxItems, enum, const, minimum,
// maximum, exclusiveMinimum, minLength. Returns one message per violation,
// each prefixed with a JSON pointer.
std::vector<std::string> ValidateJson(std::string_view document,
                                      std::string_view schema);

// Schema validation plus the checks a schema cannot express: one training
// trial first, experimental trials forming a permutation of 1..15.
std::vector<std::string> ValidateSessionManifest(std::string_view text);
std::vector<std::string> ValidateSessionResult(std::string_view text);

// Copies the stereo files listed in audio_dir's stimulus manifest into
// out_dir and writes the session manifest and both schemas next to them.
SessionManifest WriteSessionBundle(const std::filesystem::path& audio_dir,
                                   const std::filesystem::path& out_dir,
                                   std::uint64_t seed);

}  // namespace evsound

#endif  // EVSOUND_SESSION_H_
