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

// Fluctuation strength: slow envelope modulation in 47 critical-band
// channels, weighted around 4 Hz and combined across correlated channels.

#ifndef EVSOUND_SQM_FLUCTUATION_H_
#define EVSOUND_SQM_FLUCTUATION_H_

#include <Eigen/Core>

#include "evsound/signal.h"
#include "evsound/sqm/summary.h"

namespace evsound {

inline constexpr int kFluctuationChannels = 47;

struct FluctuationOptions {
  double frame_seconds = 2.0;
  double hop_seconds = 0.1;
};

// Modulation-frequency weighting, 1 at 4 Hz.
double FluctuationModulationWeight(double mod_hz);

// Frame-wise fluctuation strength in vacil; times are frame centers. Signals
// shorter than one frame are analysed as a single frame.
SqmTrace FluctuationTv(const CalibratedSignal& signal,
                       const FluctuationOptions& options = {});

}  // namespace evsound

#endif  // EVSOUND_SQM_FLUCTUATION_H_
