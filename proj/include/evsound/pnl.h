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

// Perceived noise level, tone correction and effective perceived noise level
// of the aircraft-certification procedure.

#ifndef EVSOUND_PNL_H_
#define EVSOUND_PNL_H_

#include <array>
#include <string_view>
#include <vector>

#include "evsound/levels.h"

namespace evsound {

using BandLevels = std::array<double, kThirdOctaveBands>;

// Identifies the embedded noy table.
inline constexpr std::string_view kNoyTableVersion = "icao-annex16-v1";

// Noisiness in noys of `spl` dB in band `band` (0 = 50 Hz ... 23 = 10 kHz).
double Noy(int band, double spl);

// 40 + 33.22 log10(N) with N = n_max + 0.15 (sum n - n_max). Returns
// kFloorDb when no band reaches its noy threshold.
double PerceivedNoiseLevel(const BandLevels& levels);

// Spectral-irregularity tone correction C >= 0 (the largest per-band value).
double ToneCorrection(const BandLevels& levels);

struct PnlResult {
  LevelTrace pnlt;
  std::vector<double> pnl;
  std::vector<double> tone_correction;
  double pnlt_max = kFloorDb;
  double epnl = kFloorDb;
};

inline constexpr double kEpnlReferenceSeconds = 10.0;

// Per-frame PNL, C and PNLT for frames spaced `frame_step` seconds apart,
// and EPNL = 10 log10(sum 10^(PNLT/10) * frame_step / 10 s) over the frames
// with PNLT >= PNLT_max - 10 dB. Throws when no frame has noisiness.
PnlResult PnlChain(const std::vector<ThirdOctaveFrame>& frames,
                   double frame_step = 0.5);

}  // namespace evsound

#endif  // EVSOUND_PNL_H_
