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

// Parametric synthesis of the warning-sound stimuli and their noise beds.

#ifndef EVSOUND_SYNTH_H_
#define EVSOUND_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evsound/signal.h"

namespace evsound {

inline constexpr double kDefaultSampleRate = 48000.0;
inline constexpr double kDefaultRampSeconds = 0.005;
inline constexpr double kDefaultSecondaryOffset = 90.0;
inline constexpr double kDefaultSecondaryGain = 0.5;

enum class NoiseBedKind { kTyreSurrogate, kBackgroundSurrogate };

struct NoiseBedSpec {
  NoiseBedKind kind = NoiseBedKind::kTyreSurrogate;
  std::uint64_t seed = 0;
  // RMS of the generated bed, in pascals.
  double gain = 1.0;
};

enum class StimulusKind { kPure, kIntermittent, kCombined, kDoubleBeep, kFileBed };

// One element of a beep pattern; a missing frequency is a pause.
struct BeepSegment {
  double duration_ms = 0.0;
  std::optional<double> freq_hz;
};

struct StimulusSpec {
  int id = 0;
  StimulusKind kind = StimulusKind::kPure;
  std::string label;
  double principal_freq = 0.0;
  double secondary_offset = kDefaultSecondaryOffset;
  double secondary_gain = kDefaultSecondaryGain;
  double on_ms = 500.0;
  double off_ms = 500.0;
  // Nominal number of pattern cycles; the pattern keeps running cyclically
  // until the requested duration, so this is a lower bound.
  int repetitions = 0;
  std::vector<BeepSegment> beep_pattern;
  // kFileBed only. An empty path falls back to `surrogate`; with neither,
  // the stimulus carries no source beyond the tyre bed.
  std::string bed_path;
  std::optional<NoiseBedSpec> surrogate;
  // False only for the tyre-only stimulus, which keeps its natural level.
  bool normalize = true;
};

std::string ToString(StimulusKind kind);
StimulusKind StimulusKindFromString(const std::string& name);
std::string ToString(NoiseBedKind kind);
NoiseBedKind NoiseBedKindFromString(const std::string& name);

// The fifteen stimuli of the listening study, ids 1..15.
std::vector<StimulusSpec> BuiltinStimulusTable();

// 240 ms @ 1800 Hz, 10 ms pause, 240 ms @ 1900 Hz, 1000 ms pause.
std::vector<BeepSegment> DefaultDoubleBeepPattern();

// Sine starting at phase zero. Rejects freq >= Nyquist, non-positive
// duration and negative amplitude.
CalibratedSignal SynthPureTone(double freq, double duration, double sample_rate,
                               double amplitude);

// Tone gated on/off, starting ON at t = 0, each ON segment shaped by
// raised-cosine ramps of `ramp` seconds.
CalibratedSignal SynthIntermittent(double freq, double on_ms, double off_ms,
                                   double duration, double sample_rate,
                                   double amplitude,
                                   double ramp = kDefaultRampSeconds);

// Principal sine plus two sines at freq +/- offset scaled by secondary_gain.
CalibratedSignal SynthCombined(double freq, double offset,
                               double secondary_gain, double duration,
                               double sample_rate, double amplitude);

// Repeats `pattern` from t = 0 until `duration`. Each beep starts at phase 0
// and is ramped at both ends. `duration` must hold `repetitions` patterns.
CalibratedSignal SynthDoubleBeep(const std::vector<BeepSegment>& pattern,
                                 int repetitions, double duration,
                                 double sample_rate, double amplitude,
                                 double ramp = kDefaultRampSeconds);

// Deterministic shaped Gaussian noise with RMS `spec.gain` Pa; at least 90%
// of its power lies below 3 kHz.
CalibratedSignal SynthNoiseBed(const NoiseBedSpec& spec, double duration,
                               double sample_rate);

// Source waveform for one stimulus (before propagation). File beds must be
// loaded by the caller and passed in `file_bed`.
CalibratedSignal SynthesizeSource(const StimulusSpec& spec, double duration,
                                  double sample_rate, double amplitude,
                                  const CalibratedSignal* file_bed = nullptr);

// Fades the first and last `ramp` seconds with raised-cosine ramps.
CalibratedSignal ApplyEdgeRamps(const CalibratedSignal& signal,
                                double ramp = kDefaultRampSeconds);

// Scalar gain that brings the A-weighted equivalent level of `signal` over
// its full duration to `target_dba`. Throws on silence.
double LevelNormalizationGain(const CalibratedSignal& signal,
                              double target_dba);
CalibratedSignal NormalizeToLevel(const CalibratedSignal& signal,
                                  double target_dba);

}  // namespace evsound

#endif  // EVSOUND_SYNTH_H_
