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

// DIN 45692 sharpness from specific loudness.

#ifndef EVSOUND_SQM_SHARPNESS_H_
#define EVSOUND_SQM_SHARPNESS_H_

#include <Eigen/Core>

#include "evsound/sqm/loudness.h"
#include "evsound/sqm/summary.h"

namespace evsound {

// Frames whose total loudness is below this value have zero sharpness.
inline constexpr double kMinSharpnessLoudness = 0.1;

// High-Bark emphasis g(z): 1 up to 15.8 Bark, then
// 0.15 exp(0.42 (z - 15.8)) + 0.85.
double SharpnessWeighting(double bark);

// 0.11 * sum(N'(z) g(z) z dz) / N for one specific-loudness pattern sampled
// on SpecificLoudnessBarkAxis().
double Sharpness(const Eigen::Ref<const Eigen::ArrayXd>& specific,
                 double total_loudness);

SqmTrace SharpnessTv(const LoudnessResult& loudness);

}  // namespace evsound

#endif  // EVSOUND_SQM_SHARPNESS_H_
