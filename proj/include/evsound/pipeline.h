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

// End-to-end stimulus production and measurement: synthesis, pass-by
// rendering, bed mixing, level normalization, metric batteries and the
// files exchanged between the command-line stages.

#ifndef EVSOUND_PIPELINE_H_
#define EVSOUND_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "evsound/levels.h"
#include "evsound/propagation.h"
#include "evsound/signal.h"
#include "evsound/sqm/annoyance.h"
#include "evsound/study.h"
#include "evsound/synth.h"

namespace evsound {

inline constexpr int kStimulusManifestVersion = 1;
inline constexpr const char* kStimulusManifestName = "stimuli.json";

struct PipelineConfig {
  double sample_rate = kDefaultSampleRate;
  std::uint64_t seed = 0;
  double target_dba = 65.0;
  // Level of the synthetic source alone at the observer, before mixing.
  double source_dba = 65.0;
  // Tyre noise of the passing vehicle alone, and the static street bed.
  double tyre_dba = 52.0;
  double background_dba = 45.0;
  double full_scale = 20.0;  // Pa at digital full scale
  Trajectory trajectory;
};

// Stimulus specs as JSON: {"stimuli": [{"id": 1, "kind": "pure", ...}]}.
std::string StimulusSpecsToJson(const std::vector<StimulusSpec>& specs);
std::vector<StimulusSpec> StimulusSpecsFromJson(std::string_view text);

// Moving tyre noise and static background, shared by every stimulus of one
// configuration. Both at their configured levels.
struct NoiseBeds {
  CalibratedSignal tyre;        // rendered at the observer
  CalibratedSignal background;
};
NoiseBeds RenderNoiseBeds(const PipelineConfig& config);

struct RenderedStimulus {
  StimulusSpec spec;
  CalibratedSignal mono;    // observer pressure, metric input
  CalibratedSignal stereo;  // playback version
  double gain = 1.0;        // normalization gain applied to the mix
};

// `file_bed` is required for file-bed stimuli with a bed_path.
RenderedStimulus RenderStimulus(const StimulusSpec& spec,
                                const PipelineConfig& config,
                                const NoiseBeds& beds,
                                const CalibratedSignal* file_bed = nullptr);

struct ManifestEntry {
  int id = 0;
  std::string label;
  std::string kind;
  std::string mono_file;
  std::string stereo_file;
  double duration = 0.0;
  bool normalized = true;
  double gain = 1.0;
};

struct StimulusManifest {
  int schema_version = kStimulusManifestVersion;
  double sample_rate = kDefaultSampleRate;
  double full_scale = 20.0;
  std::uint64_t seed = 0;
  double target_dba = 65.0;
  Trajectory trajectory;
  std::vector<ManifestEntry> stimuli;
};

std::string StimulusManifestToJson(const StimulusManifest& manifest);
StimulusManifest StimulusManifestFromJson(std::string_view text);

// Renders every spec and writes <id>_mono.wav (float), <id>_stereo.wav
// (24-bit PCM) and the manifest into out_dir. Bed paths are resolved
// relative to spec_dir.
StimulusManifest SynthesizeAll(const std::vector<StimulusSpec>& specs,
                               const PipelineConfig& config,
                               const std::filesystem::path& out_dir,
                               const std::filesystem::path& spec_dir = {});

struct MetricReport {
  MetricSet metrics;
  SqmTraces traces;
};

// The full battery for one calibrated mono observer signal.
MetricReport ComputeMetrics(const CalibratedSignal& mono, int stimulus_id);

// Reads the manifest and mono files in audio_dir and measures each one.
std::vector<MetricSet> MeasureAll(const std::filesystem::path& audio_dir);

enum class TableFormat { kCsv, kJson };

struct AnalysisFiles {
  std::filesystem::path correlation_table;
  std::filesystem::path box_stats;
  std::filesystem::path scatter;
  std::filesystem::path box_plot;
  std::filesystem::path scatter_plot;
};

// Correlation table, box statistics per stimulus and pooled groups, the
// PA scatter with its fit, and the two plots.
AnalysisFiles Analyze(const std::vector<MetricSet>& metrics,
                      const std::vector<RatingRecord>& ratings,
                      const std::set<int>& exclude,
                      const std::filesystem::path& out_dir, TableFormat format);

// Spectrogram matrix as CSV: first row "frequency_hz" then frame times, then
// one row per bin starting with its frequency.
std::string SpectrogramCsv(const Spectrogram& spec);

}  // namespace evsound

#endif  // EVSOUND_PIPELINE_H_
