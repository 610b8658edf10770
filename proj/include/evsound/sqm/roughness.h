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

// Roughness after Daniel and Weber: 47 overlapping critical-band channels,
// envelope modulation depth weighted by modulation frequency, and
// correlation between neighbouring channels.

#ifndef EVSOUND_SQM_ROUGHNESS_H_
#define EVSOUND_SQM_ROUGHNESS_H_

#include <Eigen/Core>

#include "evsound/signal.h"
#include "evsound/sqm/summary.h"

namespace evsound {

inline constexpr int kRoughnessChannels = 47;

struct RoughnessOptions {
  double frame_seconds = 0.2;
  double overlap = 0.5;
};

// Specific roughness of one analysis frame, asper per channel.
struct RoughnessFrame {
  double total = 0.0;
  Eigen::ArrayXd specific;
};

// Roughness of one frame of pressure samples (any length >= 64).
RoughnessFrame RoughnessOfFrame(const Eigen::ArrayXd& frame,
                                double sample_rate);

// Frame-wise roughness; times are frame centers.
SqmTrace RoughnessTv(const CalibratedSignal& signal,
                     const RoughnessOptions& options = {});

}  // namespace evsound

#endif  // EVSOUND_SQM_ROUGHNESS_H_
