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

// Sound pressure levels, A-weighting, one-third-octave analysis and
// spectrograms.

#ifndef EVSOUND_LEVELS_H_
#define EVSOUND_LEVELS_H_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "evsound/signal.h"

namespace evsound {

inline constexpr int kThirdOctaveBands = 24;
// Level reported for bands or bins carrying no energy.
inline constexpr double kFloorDb = -100.0;

struct LevelTrace {
  std::vector<double> times;
  std::vector<double> values;
};

// IEC 61672 A-weighting magnitude in dB (0 dB at 1 kHz).
double AWeightingDb(double freq);

// Zero-phase A-weighting applied in the frequency domain with the analog
// magnitude response. Linear and time-invariant; channels are weighted
// independently.
CalibratedSignal AWeight(const CalibratedSignal& signal);

// 10*log10(mean(p^2) / p0^2) over all samples of a mono signal. Throws on
// silence.
double LpEq(const CalibratedSignal& signal);
// LpEq(AWeight(signal)).
double LpAEq(const CalibratedSignal& signal);

enum class TimeWeighting { kFast, kSlow };

double TimeConstant(TimeWeighting weighting);

// Exponentially time-weighted level at every sample, starting from rest.
// Times are sample instants; samples with zero energy read kFloorDb.
LevelTrace TimeWeightedLevel(const CalibratedSignal& signal,
                             TimeWeighting weighting);
// Maximum of TimeWeightedLevel. Throws on silence.
double LpMax(const CalibratedSignal& signal,
             TimeWeighting weighting = TimeWeighting::kFast);

struct ThirdOctaveFrame {
  double time = 0.0;  // frame center, s
  std::array<double, kThirdOctaveBands> band_levels{};
};

// Exact base-ten centers 1000 * 10^(n/10), n = -13..10 (nominally 50 Hz to
// 10 kHz).
std::array<double, kThirdOctaveBands> ThirdOctaveCenters();
std::array<double, kThirdOctaveBands> NominalThirdOctaveCenters();

// Band levels of consecutive non-overlapping frames. Each Hann-windowed
// frame is transformed and its power integrated between the band edges
// fc * 10^(+-1/20). Band power is normalized so a stationary signal reads
// its true band level.
std::vector<ThirdOctaveFrame> ThirdOctaveFrames(const CalibratedSignal& signal,
                                                double frame_seconds = 0.5);

struct Spectrogram {
  std::vector<double> times;        // frame centers, s
  std::vector<double> frequencies;  // bin frequencies, Hz
  // Power spectral density in dB re (20 uPa)^2/Hz; rows are frequency bins,
  // columns are frames.
  Eigen::ArrayXXd psd_db;
};

Spectrogram ComputeSpectrogram(const CalibratedSignal& signal,
                               int window = 4096, double overlap = 0.75);

}  // namespace evsound

#endif  // EVSOUND_LEVELS_H_
