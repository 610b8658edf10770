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

// Zwicker loudness (ISO 532-1), free field: time-varying from a pressure
// signal and stationary from one-third-octave levels.

#ifndef EVSOUND_SQM_LOUDNESS_H_
#define EVSOUND_SQM_LOUDNESS_H_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "evsound/signal.h"
#include "evsound/sqm/summary.h"

namespace evsound {

// 28 bands, 25 Hz ... 12.5 kHz.
inline constexpr int kLoudnessBands = 28;
// Specific loudness is sampled every 0.1 Bark from 0.1 to 24 Bark.
inline constexpr int kSpecificBins = 240;
inline constexpr double kLoudnessRate = 48000.0;
inline constexpr double kLoudnessHop = 0.002;

using LoudnessBandLevels = std::array<double, kLoudnessBands>;

struct SpecificLoudness {
  double total = 0.0;     // sone
  Eigen::ArrayXd values;  // sone/Bark, kSpecificBins entries
};

struct LoudnessResult {
  SqmTrace loudness;
  // kSpecificBins rows, one column per trace sample.
  Eigen::ArrayXXd specific;
};

// Band center frequencies 1000 * 10^((i - 16) / 10).
std::array<double, kLoudnessBands> LoudnessBandCenters();
// Critical-band rate of each specific-loudness bin, 0.1 ... 24 Bark.
Eigen::ArrayXd SpecificLoudnessBarkAxis();

// Stationary loudness of a one-third-octave spectrum in dB re 20 uPa.
SpecificLoudness LoudnessFromThirdOctave(const LoudnessBandLevels& levels);

// Time-varying loudness with a 2 ms hop. Signals not sampled at 48 kHz are
// resampled first. Throws for uncalibrated input.
LoudnessResult LoudnessTv(const CalibratedSignal& signal);

}  // namespace evsound

#endif  // EVSOUND_SQM_LOUDNESS_H_
