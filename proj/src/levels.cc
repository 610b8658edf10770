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

#include "evsound/levels.h"

#include <cmath>
#include <limits>

#include "evsound/dsp.h"
#include "evsound/error.h"

namespace evsound {
namespace {

constexpr double kP0Squared = kReferencePressure * kReferencePressure;

double UnnormalizedAWeight(double f) {
  constexpr double f1 = 20.598997, f2 = 107.65265, f3 = 737.86223,
                   f4 = 12194.217;
  const double f_2 = f * f;
  const double num = f4 * f4 * f_2 * f_2;
  const double den = (f_2 + f1 * f1) * std::sqrt((f_2 + f2 * f2) * (f_2 + f3 * f3)) *
                     (f_2 + f4 * f4);
  return num / den;
}

double PowerToDb(double ms) {
  return ms > 0.0 ? 10.0 * std::log10(ms / kP0Squared) : kFloorDb;
}

}  // namespace

double AWeightingDb(double freq) {
  static const double norm = UnnormalizedAWeight(1000.0);
  if (freq <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(UnnormalizedAWeight(freq) / norm);
}

CalibratedSignal AWeight(const CalibratedSignal& signal) {
  const double fs = signal.sample_rate();
  const Eigen::Index n = signal.frames();
  if (n == 0) return signal;
  // Padding keeps the wrap-around of the zero-phase response out of the
  // signal span.
  const Eigen::Index padded =
      dsp::NextFastSize(n + static_cast<Eigen::Index>(0.5 * fs));
  static const double norm = UnnormalizedAWeight(1000.0);
  Eigen::ArrayXd gain(padded / 2 + 1);
  for (Eigen::Index k = 0; k < gain.size(); ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(padded);
    gain[k] = k == 0 ? 0.0 : UnnormalizedAWeight(f) / norm;
  }
  dsp::Fft fft;
  Eigen::ArrayXXd out(n, signal.channels());
  for (int c = 0; c < signal.channels(); ++c) {
    Eigen::ArrayXd x = Eigen::ArrayXd::Zero(padded);
    x.head(n) = signal.channel(c);
    Eigen::ArrayXcd spec = fft.Forward(x);
    spec *= gain.cast<std::complex<double>>();
    out.col(c) = fft.Inverse(spec, padded).head(n);
  }
  return CalibratedSignal(fs, std::move(out), signal.calibrated());
}

double LpEq(const CalibratedSignal& signal) {
  RequireMono(signal, "lp_eq");
  if (signal.empty()) throw Error(errc::kInvalidArgument, "signal is empty");
  const double ms = signal.channel(0).square().mean();
  if (!(ms > 0.0)) {
    throw Error(errc::kSilence, "level of an all-zero signal is -infinity");
  }
  return 10.0 * std::log10(ms / kP0Squared);
}

double LpAEq(const CalibratedSignal& signal) { return LpEq(AWeight(signal)); }

double TimeConstant(TimeWeighting weighting) {
  return weighting == TimeWeighting::kFast ? 0.125 : 1.0;
}

LevelTrace TimeWeightedLevel(const CalibratedSignal& signal,
                             TimeWeighting weighting) {
  RequireMono(signal, "time-weighted level");
  const double fs = signal.sample_rate();
  const double alpha = std::exp(-1.0 / (TimeConstant(weighting) * fs));
  LevelTrace trace;
  trace.times.resize(static_cast<std::size_t>(signal.frames()));
  trace.values.resize(trace.times.size());
  double state = 0.0;
  const auto x = signal.channel(0);
  for (Eigen::Index i = 0; i < signal.frames(); ++i) {
    state = alpha * state + (1.0 - alpha) * x[i] * x[i];
    trace.times[static_cast<std::size_t>(i)] = static_cast<double>(i) / fs;
    trace.values[static_cast<std::size_t>(i)] = PowerToDb(state);
  }
  return trace;
}

double LpMax(const CalibratedSignal& signal, TimeWeighting weighting) {
  if (signal.empty()) throw Error(errc::kInvalidArgument, "signal is empty");
  const LevelTrace trace = TimeWeightedLevel(signal, weighting);
  double best = kFloorDb;
  bool any = false;
  for (double v : trace.values) {
    if (v > kFloorDb) any = true;
    best = std::max(best, v);
  }
  if (!any) throw Error(errc::kSilence, "level of an all-zero signal is -infinity");
  return best;
}

std::array<double, kThirdOctaveBands> ThirdOctaveCenters() {
  std::array<double, kThirdOctaveBands> fc{};
  for (int i = 0; i < kThirdOctaveBands; ++i) {
    fc[static_cast<std::size_t>(i)] = 1000.0 * std::pow(10.0, (i - 13) / 10.0);
  }
  return fc;
}

std::array<double, kThirdOctaveBands> NominalThirdOctaveCenters() {
  return {50,   63,   80,   100,  125,  160,  200,  250,
          315,  400,  500,  630,  800,  1000, 1250, 1600,
          2000, 2500, 3150, 4000, 5000, 6300, 8000, 10000};
}

std::vector<ThirdOctaveFrame> ThirdOctaveFrames(const CalibratedSignal& signal,
                                                double frame_seconds) {
  RequireMono(signal, "third-octave analysis");
  const double fs = signal.sample_rate();
  const auto len = static_cast<Eigen::Index>(std::llround(frame_seconds * fs));
  if (len < 16) throw Error(errc::kInvalidArgument, "frame is too short");
  if (signal.frames() < len) {
    throw Error(errc::kInvalidArgument, "signal is shorter than one frame");
  }
  const auto fc = ThirdOctaveCenters();
  if (fc.back() * std::pow(10.0, 0.05) > fs / 2.0) {
    throw Error(errc::kNyquist, "sample rate too low for the 10 kHz band");
  }
  const Eigen::ArrayXd w = dsp::HannWindow(len);
  const double wsum2 = w.square().sum();
  const double df = fs / static_cast<double>(len);
  // Band index of every bin, or -1.
  std::vector<int> band_of(static_cast<std::size_t>(len / 2 + 1), -1);
  for (std::size_t k = 1; k < band_of.size(); ++k) {
    const double f = static_cast<double>(k) * df;
    for (int b = 0; b < kThirdOctaveBands; ++b) {
      const double lo = fc[static_cast<std::size_t>(b)] * std::pow(10.0, -0.05);
      const double hi = fc[static_cast<std::size_t>(b)] * std::pow(10.0, 0.05);
      if (f >= lo && f < hi) {
        band_of[k] = b;
        break;
      }
    }
  }
  dsp::Fft fft;
  std::vector<ThirdOctaveFrame> frames;
  const auto x = signal.channel(0);
  for (Eigen::Index start = 0; start + len <= signal.frames(); start += len) {
    const Eigen::ArrayXd seg = x.segment(start, len) * w;
    const Eigen::ArrayXcd spec = fft.Forward(seg);
    std::array<double, kThirdOctaveBands> power{};
    for (std::size_t k = 1; k < band_of.size(); ++k) {
      if (band_of[k] < 0) continue;
      const bool edge = static_cast<Eigen::Index>(k) * 2 == len;
      const double scale = (edge ? 1.0 : 2.0) /
                           (static_cast<double>(len) * wsum2);
      power[static_cast<std::size_t>(band_of[k])] +=
          std::norm(spec[static_cast<Eigen::Index>(k)]) * scale;
    }
    ThirdOctaveFrame frame;
    frame.time = (static_cast<double>(start) + len / 2.0) / fs;
    for (int b = 0; b < kThirdOctaveBands; ++b) {
      const double p = power[static_cast<std::size_t>(b)];
      frame.band_levels[static_cast<std::size_t>(b)] =
          p > kP0Squared * 1e-10 ? 10.0 * std::log10(p / kP0Squared) : kFloorDb;
    }
    frames.push_back(frame);
  }
  return frames;
}

Spectrogram ComputeSpectrogram(const CalibratedSignal& signal, int window,
                               double overlap) {
  RequireMono(signal, "spectrogram");
  if (window < 16) throw Error(errc::kInvalidArgument, "window is too short");
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw Error(errc::kInvalidArgument, "overlap must lie in [0, 1)");
  }
  if (signal.frames() < window) {
    throw Error(errc::kInvalidArgument, "signal is shorter than the window");
  }
  const double fs = signal.sample_rate();
  const auto hop = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(window * (1.0 - overlap))));
  const Eigen::Index count = (signal.frames() - window) / hop + 1;
  const Eigen::Index bins = window / 2 + 1;
  const Eigen::ArrayXd w = dsp::HannWindow(window);
  const double scale = 1.0 / (fs * w.square().sum());

  Spectrogram out;
  out.psd_db.resize(bins, count);
  out.frequencies.resize(static_cast<std::size_t>(bins));
  for (Eigen::Index k = 0; k < bins; ++k) {
    out.frequencies[static_cast<std::size_t>(k)] =
        static_cast<double>(k) * fs / window;
  }
  dsp::Fft fft;
  const auto x = signal.channel(0);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::Index start = j * hop;
    out.times.push_back((static_cast<double>(start) + window / 2.0) / fs);
    const Eigen::ArrayXcd spec = fft.Forward(x.segment(start, window) * w);
    for (Eigen::Index k = 0; k < bins; ++k) {
      const bool edge = k == 0 || 2 * k == window;
      const double psd = std::norm(spec[k]) * scale * (edge ? 1.0 : 2.0);
      out.psd_db(k, j) = std::max(PowerToDb(psd), kFloorDb);
    }
  }
  return out;
}

}  // namespace evsound
