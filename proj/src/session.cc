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

#include "evsound/session.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "evsound/dsp.h"
#include "evsound/error.h"
#include "evsound/io.h"
#include "json.hpp"

namespace evsound {
namespace {

using nlohmann::json;

#include "schemas.inc"

constexpr std::string_view kInstructions =
    "Imagine that you are a pedestrian standing on the side of the road. You will "
    "experience 15 audiovisual scenarios of a vehicle driving by you. During each "
    "scenario, press and HOLD the trigger when you feel safe to cross the road in front "
    "of the car. You can release the button and then press it again multiple times "
    "during the scenario. After each scenario, you will be asked to answer a few "
    "questions. Press the button to proceed. The experiment will start with a training "
    "scenario to familiarise yourself with the environment. During this scenario, press "
    "and HOLD the trigger when you feel safe crossing the road in front of the car. You "
    "can release the button and then press it again multiple times during the scenario. "
    "Press the button to start.";

constexpr std::string_view kTrialInstruction =
    "Start by HOLDING the trigger button. Release the trigger button when it becomes "
    "unsafe to cross; press it again when safe to cross";

std::string Pointer(const std::string& base, const std::string& key) {
  return base + "/" + key;
}

bool IsType(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && d == std::floor(d);
  }
  throw Error(errc::kInvalidArgument, "schema uses unsupported type '" + type + "'");
}

void Validate(const json& v, const json& s, const std::string& at,
              std::vector<std::string>& out) {
  if (!s.is_object()) return;
  const std::string where = at.empty() ? "/" : at;
  if (s.contains("type")) {
    const json& t = s["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = IsType(v, t.get<std::string>());
    } else {
      for (const json& alt : t) ok = ok || IsType(v, alt.get<std::string>());
    }
    if (!ok) {
      out.push_back(where + ": expected type " + t.dump());
      return;
    }
  }
  if (s.contains("const") && v != s["const"]) {
    out.push_back(where + ": must equal " + s["const"].dump());
  }
  if (s.contains("enum")) {
    const json& e = s["enum"];
    if (std::find(e.begin(), e.end(), v) == e.end()) {
      out.push_back(where + ": must be one of " + e.dump());
    }
  }
  if (v.is_number()) {
    const double d = v.get<double>();
    if (s.contains("minimum") && d < s["minimum"].get<double>()) {
      out.push_back(where + ": below minimum " + s["minimum"].dump());
    }
    if (s.contains("maximum") && d > s["maximum"].get<double>()) {
      out.push_back(where + ": above maximum " + s["maximum"].dump());
    }
    if (s.contains("exclusiveMinimum") && d <= s["exclusiveMinimum"].get<double>()) {
      out.push_back(where + ": must exceed " + s["exclusiveMinimum"].dump());
    }
  }
  if (v.is_string() && s.contains("minLength") &&
      v.get<std::string>().size() < s["minLength"].get<std::size_t>()) {
    out.push_back(where + ": shorter than " + s["minLength"].dump());
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
      out.push_back(where + ": fewer than " + s["minItems"].dump() + " items");
    }
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) {
      out.push_back(where + ": more than " + s["maxItems"].dump() + " items");
    }
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        Validate(v[i], s["items"], Pointer(at, std::to_string(i)), out);
      }
    }
  }
  if (v.is_object()) {
    for (const json& key : s.value("required", json::array())) {
      if (!v.contains(key.get<std::string>())) {
        out.push_back(where + ": missing required property " + key.dump());
      }
    }
    const json props = s.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key())) {
        Validate(it.value(), props[it.key()], Pointer(at, it.key()), out);
      } else if (s.contains("additionalProperties")) {
        const json& extra = s["additionalProperties"];
        if (extra.is_boolean() && !extra.get<bool>()) {
          out.push_back(where + ": unexpected property \"" + it.key() + "\"");
        } else if (extra.is_object()) {
          Validate(it.value(), extra, Pointer(at, it.key()), out);
        }
      }
    }
  }
}

std::vector<std::string> ValidateText(std::string_view text, std::string_view schema) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    return {std::string("invalid JSON: ") + e.what()};
  }
  std::vector<std::string> out;
  Validate(doc, json::parse(schema), "", out);
  return out;
}

}  // namespace

const std::vector<Question>& StudyQuestions() {
  static const std::vector<Question> q = {
      {"noticeability",
       "The vehicle sound was easy to notice (0 = not easy to notice, 10 = easy to notice)", 0,
       10},
      {"informativeness",
       "The sound gave me enough information to realise that a vehicle was approaching "
       "(0 = not enough information, 10 = enough information)",
       0, 10},
      {"annoyance",
       "The vehicle sound was annoying (0 = not annoying, 10 = extremely annoying)", 0, 10},
  };
  return q;
}

std::string_view SessionInstructions() { return kInstructions; }
std::string_view TrialInstruction() { return kTrialInstruction; }

std::string_view SessionManifestSchema() { return kManifestSchemaText; }
std::string_view SessionResultSchema() { return kResultSchemaText; }

std::vector<std::string> ValidateJson(std::string_view document, std::string_view schema) {
  return ValidateText(document, schema);
}

SessionManifest BuildSessionManifest(const StimulusManifest& stimuli, std::uint64_t seed) {
  std::map<int, const ManifestEntry*> by_id;
  for (const auto& e : stimuli.stimuli) by_id[e.id] = &e;
  for (int id = 1; id <= kStimulusCount; ++id) {
    if (!by_id.count(id)) {
      throw Error(errc::kIo, "missing audio for stimulus " + std::to_string(id));
    }
  }
  SessionManifest m;
  m.session_id = "session-" + std::to_string(seed);
  m.seed = seed;
  m.sample_rate = stimuli.sample_rate;
  m.calibration_pa_per_unit = stimuli.full_scale;
  m.trajectory = stimuli.trajectory;
  m.instructions = std::string(kInstructions);
  m.trial_instruction = std::string(kTrialInstruction);
  m.questions = StudyQuestions();
  const ManifestEntry& training = *by_id.at(kTrainingStimulusId);
  m.trials.push_back({0, training.id, training.stereo_file, training.duration, true});
  const std::vector<int> order = dsp::SeededPermutation(kStimulusCount, seed);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const ManifestEntry& e = *by_id.at(order[i] + 1);
    m.trials.push_back({static_cast<int>(i + 1), e.id, e.stereo_file, e.duration, false});
  }
  return m;
}

std::string SessionManifestToJson(const SessionManifest& m) {
  json questions = json::array();
  for (const auto& q : m.questions) {
    questions.push_back({{"id", q.id}, {"text", q.text}, {"min", q.min}, {"max", q.max}});
  }
  json trials = json::array();
  for (const auto& t : m.trials) {
    trials.push_back({{"index", t.index},
                      {"stimulus_id", t.stimulus_id},
                      {"audio", t.audio},
                      {"duration", t.duration},
                      {"training", t.training}});
  }
  const Trajectory& tr = m.trajectory;
  json doc{{"schema_version", m.schema_version},
           {"session_id", m.session_id},
           {"seed", m.seed},
           {"sample_rate", m.sample_rate},
           {"calibration_pa_per_unit", m.calibration_pa_per_unit},
           {"trajectory",
            {{"x_start", tr.x_start}, {"x_end", tr.x_end}, {"y_s", tr.y_s}, {"v_x", tr.v_x},
             {"c", tr.c}}},
           {"instructions", m.instructions},
           {"trial_instruction", m.trial_instruction},
           {"questions", questions},
           {"trials", trials}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> ValidateSessionManifest(std::string_view text) {
  std::vector<std::string> issues = ValidateText(text, kManifestSchemaText);
  if (!issues.empty()) return issues;
  const json doc = json::parse(text);
  const json& trials = doc["trials"];
  if (!trials[0]["training"].get<bool>()) issues.push_back("/trials/0: must be the training trial");
  std::set<int> ids;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i]["index"].get<std::size_t>() != i) {
      issues.push_back("/trials/" + std::to_string(i) + "/index: out of sequence");
    }
    if (i == 0) continue;
    if (trials[i]["training"].get<bool>()) {
      issues.push_back("/trials/" + std::to_string(i) + ": only the first trial trains");
    }
    ids.insert(trials[i]["stimulus_id"].get<int>());
  }
  if (ids.size() != static_cast<std::size_t>(kStimulusCount)) {
    issues.push_back("/trials: experimental trials are not a permutation of 1..15");
  }
  return issues;
}

std::vector<std::string> ValidateSessionResult(std::string_view text) {
  return ValidateText(text, kResultSchemaText);
}

SessionManifest SessionManifestFromJson(std::string_view text) {
  const auto issues = ValidateSessionManifest(text);
  if (!issues.empty()) {
    std::string msg = "invalid session manifest:";
    for (const auto& s : issues) msg += "\n  " + s;
    throw Error(errc::kValidation, msg);
  }
  const json doc = json::parse(text);
  SessionManifest m;
  m.schema_version = doc["schema_version"].get<int>();
  m.session_id = doc["session_id"].get<std::string>();
  m.seed = doc["seed"].get<std::uint64_t>();
  m.sample_rate = doc["sample_rate"].get<double>();
  m.calibration_pa_per_unit = doc["calibration_pa_per_unit"].get<double>();
  const json& tr = doc["trajectory"];
  m.trajectory = {tr["x_start"].get<double>(), tr["x_end"].get<double>(),
                  tr["y_s"].get<double>(), tr["v_x"].get<double>(), tr["c"].get<double>()};
  m.instructions = doc["instructions"].get<std::string>();
  m.trial_instruction = doc["trial_instruction"].get<std::string>();
  for (const json& q : doc["questions"]) {
    m.questions.push_back({q["id"].get<std::string>(), q["text"].get<std::string>(),
                           q["min"].get<int>(), q["max"].get<int>()});
  }
  for (const json& t : doc["trials"]) {
    m.trials.push_back({t["index"].get<int>(), t["stimulus_id"].get<int>(),
                        t["audio"].get<std::string>(), t["duration"].get<double>(),
                        t["training"].get<bool>()});
  }
  return m;
}

SessionManifest WriteSessionBundle(const std::filesystem::path& audio_dir,
                                   const std::filesystem::path& out_dir, std::uint64_t seed) {
  const StimulusManifest stimuli =
      StimulusManifestFromJson(ReadFileBytes(audio_dir / kStimulusManifestName));
  const SessionManifest m = BuildSessionManifest(stimuli, seed);
  std::set<std::string> copied;
  for (const auto& t : m.trials) {
    if (!copied.insert(t.audio).second) continue;
    const auto src = audio_dir / t.audio;
    if (!std::filesystem::exists(src)) {
      throw Error(errc::kIo, "missing audio " + src.string());
    }
    WriteFileAtomic(out_dir / t.audio, ReadFileBytes(src));
  }
  WriteFileAtomic(out_dir / "session_manifest.schema.json", kManifestSchemaText);
  WriteFileAtomic(out_dir / "session_result.schema.json", kResultSchemaText);
  WriteFileAtomic(out_dir / kSessionManifestName, SessionManifestToJson(m));
  return m;
}

}  // namespace evsound
