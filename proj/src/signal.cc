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

#include "evsound/signal.h"

#include <string>

#include "evsound/error.h"

namespace evsound {

CalibratedSignal::CalibratedSignal(double sample_rate, Eigen::ArrayXXd samples,
                                   bool calibrated)
    : sample_rate_(sample_rate),
      samples_(std::move(samples)),
      calibrated_(calibrated) {
  if (!(sample_rate_ > 0.0)) {
    throw Error(errc::kInvalidArgument, "sample rate must be positive");
  }
  if (samples_.cols() != 1 && samples_.cols() != 2) {
    throw Error(errc::kInvalidArgument, "signals have one or two channels");
  }
  if (!samples_.allFinite()) {
    throw Error(errc::kInvalidArgument, "signal contains non-finite samples");
  }
}

CalibratedSignal CalibratedSignal::Mono(double sample_rate,
                                        Eigen::ArrayXd samples,
                                        bool calibrated) {
  Eigen::ArrayXXd m(samples.size(), 1);
  m.col(0) = samples;
  return CalibratedSignal(sample_rate, std::move(m), calibrated);
}

CalibratedSignal CalibratedSignal::Stereo(double sample_rate,
                                          Eigen::ArrayXd left,
                                          Eigen::ArrayXd right) {
  if (left.size() != right.size()) {
    throw Error(errc::kInvalidArgument, "stereo channels differ in length");
  }
  Eigen::ArrayXXd m(left.size(), 2);
  m.col(0) = left;
  m.col(1) = right;
  return CalibratedSignal(sample_rate, std::move(m));
}

CalibratedSignal CalibratedSignal::Zeros(double sample_rate,
                                         Eigen::Index frames, int channels) {
  return CalibratedSignal(sample_rate, Eigen::ArrayXXd::Zero(frames, channels));
}

Eigen::ArrayXd CalibratedSignal::mono() const {
  RequireMono(*this, "mono()");
  return samples_.col(0);
}

double CalibratedSignal::peak() const {
  return samples_.size() == 0 ? 0.0 : samples_.abs().maxCoeff();
}

CalibratedSignal CalibratedSignal::scaled(double gain) const {
  return CalibratedSignal(sample_rate_, samples_ * gain, calibrated_);
}

CalibratedSignal CalibratedSignal::segment(Eigen::Index start,
                                           Eigen::Index length) const {
  if (start < 0 || length < 0 || start + length > frames()) {
    throw Error(errc::kInvalidArgument, "segment out of range");
  }
  return CalibratedSignal(sample_rate_,
                          samples_.middleRows(start, length).eval(),
                          calibrated_);
}

CalibratedSignal CalibratedSignal::with_calibration(
    double pascal_per_unit) const {
  return CalibratedSignal(sample_rate_, samples_ * pascal_per_unit, true);
}

void RequireMono(const CalibratedSignal& signal, const char* what) {
  if (signal.channels() != 1) {
    throw Error(errc::kInvalidArgument,
                std::string(what) + " requires a mono signal");
  }
}

CalibratedSignal Mix(std::span<const CalibratedSignal> signals,
                     std::span<const double> gains) {
  if (signals.empty()) {
    throw Error(errc::kInvalidArgument, "mix needs at least one signal");
  }
  if (signals.size() != gains.size()) {
    throw Error(errc::kInvalidArgument, "mix needs one gain per signal");
  }
  const double rate = signals.front().sample_rate();
  const int channels = signals.front().channels();
  Eigen::Index frames = 0;
  bool calibrated = true;
  for (const auto& s : signals) {
    if (s.sample_rate() != rate) {
      throw Error(errc::kMismatch, "mix inputs differ in sample rate");
    }
    if (s.channels() != channels) {
      throw Error(errc::kMismatch, "mix inputs differ in channel count");
    }
    frames = std::max(frames, s.frames());
    calibrated = calibrated && s.calibrated();
  }
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(frames, channels);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    out.topRows(signals[i].frames()) += gains[i] * signals[i].samples();
  }
  return CalibratedSignal(rate, std::move(out), calibrated);
}

}  // namespace evsound
