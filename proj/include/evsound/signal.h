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

#ifndef EVSOUND_SIGNAL_H_
#define EVSOUND_SIGNAL_H_

#include <Eigen/Core>
#include <span>
#include <vector>

namespace evsound {

// Reference sound pressure, 20 uPa.
inline constexpr double kReferencePressure = 20e-6;

// Sampled acoustic pressure in pascals. Samples are stored one column per
// channel. A sample value p means p Pa, so a sine of amplitude A has a level
// of 20*log10(A / (sqrt(2) * 20e-6)) dB.
//
// `calibrated` is false for audio whose pascal scale is unknown (for example
// a WAV file read without a calibration factor); level-dependent metrics
// refuse such signals.
class CalibratedSignal {
 public:
  CalibratedSignal(double sample_rate, Eigen::ArrayXXd samples,
                   bool calibrated = true);

  static CalibratedSignal Mono(double sample_rate, Eigen::ArrayXd samples,
                               bool calibrated = true);
  static CalibratedSignal Stereo(double sample_rate, Eigen::ArrayXd left,
                                 Eigen::ArrayXd right);
  static CalibratedSignal Zeros(double sample_rate, Eigen::Index frames,
                                int channels = 1);

  double sample_rate() const { return sample_rate_; }
  Eigen::Index frames() const { return samples_.rows(); }
  int channels() const { return static_cast<int>(samples_.cols()); }
  double duration() const { return frames() / sample_rate_; }
  bool calibrated() const { return calibrated_; }
  bool empty() const { return frames() == 0; }

  const Eigen::ArrayXXd& samples() const { return samples_; }
  auto channel(int c) const { return samples_.col(c); }
  // Convenience accessor for single-channel signals.
  Eigen::ArrayXd mono() const;

  // Largest |sample| over all channels.
  double peak() const;

  CalibratedSignal scaled(double gain) const;
  CalibratedSignal segment(Eigen::Index start, Eigen::Index length) const;
  CalibratedSignal with_calibration(double pascal_per_unit) const;

 private:
  double sample_rate_;
  Eigen::ArrayXXd samples_;
  bool calibrated_;
};

// Requires a mono signal; throws Error otherwise.
void RequireMono(const CalibratedSignal& signal, const char* what);

// Weighted sample-wise sum. Shorter inputs are zero-padded at the tail.
// Sample rates and channel counts must match.
CalibratedSignal Mix(std::span<const CalibratedSignal> signals,
                     std::span<const double> gains);

}  // namespace evsound

#endif  // EVSOUND_SIGNAL_H_
