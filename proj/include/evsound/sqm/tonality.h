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

// Tonality after Aures: prominent spectral lines weighted by frequency and
// excess over their masking threshold, combined with the loudness share of
// the tonal part.

#ifndef EVSOUND_SQM_TONALITY_H_
#define EVSOUND_SQM_TONALITY_H_

#include <vector>

#include <Eigen/Core>

#include "evsound/signal.h"
#include "evsound/sqm/summary.h"

namespace evsound {

struct TonalityOptions {
  Eigen::Index frame_size = 8192;  // samples
  Eigen::Index hop = 4096;         // samples
};

struct TonalComponent {
  double frequency = 0.0;     // Hz
  double level = 0.0;         // dB re 20 uPa
  double excess_level = 0.0;  // dB above the masking threshold
};

struct TonalityFrame {
  double tonality = 0.0;  // t.u.
  double tonal_weight = 0.0;
  double loudness_weight = 0.0;
  std::vector<TonalComponent> components;
};

// Frequency weighting of a tonal component, 1 near 700 Hz.
double TonalFrequencyWeight(double hz);

// Tonality of one frame of pressure samples.
TonalityFrame TonalityOfFrame(const Eigen::ArrayXd& frame, double sample_rate);

// Frame-wise tonality; times are frame centers. A signal shorter than one
// frame is analysed as a single zero-padded frame.
SqmTrace TonalityTv(const CalibratedSignal& signal,
                    const TonalityOptions& options = {});

}  // namespace evsound

#endif  // EVSOUND_SQM_TONALITY_H_
