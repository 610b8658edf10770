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

// RIFF/WAVE encoding of calibrated signals. A sample of full-scale value 1
// corresponds to `full_scale` pascals.

#ifndef EVSOUND_WAV_H_
#define EVSOUND_WAV_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "evsound/signal.h"

namespace evsound {

// 20 Pa (114 dB SPL peak) at digital full scale.
inline constexpr double kDefaultFullScalePa = 20.0;

enum class WavFormat { kPcm16, kPcm24, kFloat32 };

struct WavWriteOptions {
  WavFormat format = WavFormat::kFloat32;
  double full_scale = kDefaultFullScalePa;
};

// Throws a clipping error, stating the missing headroom in dB, when a
// sample would exceed digital full scale.
std::string EncodeWav(const CalibratedSignal& signal,
                      const WavWriteOptions& options = {});
void WriteWav(const std::filesystem::path& path, const CalibratedSignal& signal,
              const WavWriteOptions& options = {});

struct WavInfo {
  double sample_rate = 0.0;
  int channels = 0;
  int bits_per_sample = 0;
  bool is_float = false;
};

// Without a full-scale factor the result is uncalibrated, scaled to +-1.
CalibratedSignal DecodeWav(std::string_view bytes,
                           std::optional<double> full_scale = std::nullopt,
                           WavInfo* info = nullptr);
CalibratedSignal ReadWav(const std::filesystem::path& path,
                         std::optional<double> full_scale = std::nullopt,
                         WavInfo* info = nullptr);

}  // namespace evsound

#endif  // EVSOUND_WAV_H_
