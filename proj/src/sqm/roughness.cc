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

#include "evsound/sqm/roughness.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "evsound/dsp.h"
#include "evsound/error.h"
#include "sqm/ear_tables.h"

namespace evsound {
namespace {

// Calibration: 1 kHz, 60 dB, 100% modulated at 70 Hz reads 1 asper.
constexpr double kCalibration = 0.2494;

// Channel weighting over Bark.
constexpr double kGziBark[] = {0,  1,  2,  3,  4,  5,  6,  7,  8,
                               9,  10, 11, 12, 13, 14, 15, 16, 17,
                               18, 19, 20, 21, 22, 23, 24};
constexpr double kGzi[] = {0.15, 0.26, 0.38, 0.47, 0.54, 0.65, 0.76, 0.83, 0.90,
                           0.98, 0.98, 0.90, 0.80, 0.70, 0.62, 0.54, 0.49, 0.43,
                           0.39, 0.35, 0.30, 0.30, 0.30, 0.30, 0.30};

// Modulation-frequency weightings, Hz -> gain, for five channel groups.
struct ModWeighting {
  std::vector<double> f;
  std::vector<double> h;
};

const std::array<ModWeighting, 5>& ModWeightings() {
  static const std::array<ModWeighting, 5> w = {{
      {{0, 17, 23, 25, 32, 37, 48, 67, 90, 114, 171, 206, 247, 294, 358},
       {0, 0.8, 0.95, 0.975, 1, 0.975, 0.9, 0.8, 0.7, 0.6, 0.4, 0.3, 0.2, 0.1,
        0}},
      {{0, 32, 43, 56, 69, 92, 120, 142, 165, 231, 277, 331, 397, 502},
       {0, 0.8, 0.95, 1, 0.975, 0.9, 0.8, 0.7, 0.6, 0.4, 0.3, 0.2, 0.1, 0}},
      {{0, 23.5, 34, 47, 56, 63, 79, 100, 115, 135, 159, 172, 194, 215, 244,
        290, 348, 415, 500, 645},
       {0, 0.4, 0.6, 0.8, 0.9, 0.95, 1, 0.975, 0.95, 0.9, 0.85, 0.8, 0.7, 0.6,
        0.5, 0.4, 0.3, 0.2, 0.1, 0}},
      {{0, 19, 44, 52.5, 58, 75, 101.5, 114.5, 132.5, 143.5, 165.5, 197.5, 241,
        290, 348, 415, 500, 645},
       {0, 0.4, 0.8, 0.9, 0.95, 1, 0.95, 0.9, 0.85, 0.8, 0.7, 0.6, 0.5, 0.4,
        0.3, 0.2, 0.1, 0}},
      {{0, 15, 41, 49, 53, 64, 71, 88, 94, 106, 115, 137, 180, 238, 290, 348,
        415, 500, 645},
       {0, 0.4, 0.8, 0.9, 0.965, 0.99, 1, 0.95, 0.9, 0.85, 0.8, 0.7, 0.6, 0.5,
        0.4, 0.3, 0.2, 0.1, 0}},
  }};
  return w;
}

// Channel index -> weighting group.
int ModGroup(int channel) {
  if (channel < 4) return 0;
  if (channel < 15) return 1;
  if (channel < 20) return 2;
  if (channel < 41) return 3;
  return 4;
}

double Lookup(double x, std::span<const double> xs, std::span<const double> ys) {
  return dsp::Interp(x, xs, ys);
}

struct Component {
  Eigen::Index bin;
  double bark;
  double level;     // dB re 20 uPa after the ear filter
  double upper_slope;  // dB/Bark, <= 0
};

}  // namespace

RoughnessFrame RoughnessOfFrame(const Eigen::ArrayXd& frame,
                                double sample_rate) {
  const Eigen::Index n = frame.size();
  if (n < 64) throw Error(errc::kInvalidArgument, "roughness frame too short");
  const Eigen::ArrayXd w = dsp::BlackmanWindow(n);
  dsp::Fft fft;
  // Complex peak amplitudes of the spectral lines.
  const Eigen::ArrayXcd spec = fft.Forward(frame * w) * (2.0 / w.sum());
  const double df = sample_rate / static_cast<double>(n);

  std::vector<Component> comps;
  std::vector<std::complex<double>> line(static_cast<std::size_t>(spec.size()));
  for (Eigen::Index k = 1; k < spec.size() - 1; ++k) {
    const double f = static_cast<double>(k) * df;
    const double z = dsp::HzToBark(f);
    const double ear = Lookup(z, ear::kEarBark, ear::kEarDb);
    if (ear < -300.0) continue;
    const double g = std::pow(10.0, ear / 20.0);
    line[static_cast<std::size_t>(k)] = spec[k] * g;
    const double amp = std::abs(spec[k]) * g / std::sqrt(2.0);
    if (amp <= 0.0) continue;
    const double level = 20.0 * std::log10(amp / kReferencePressure);
    if (level <= Lookup(z, ear::kLtqBark, ear::kLtqDb)) continue;
    comps.push_back({k, z, level, std::min(-24.0 - 230.0 / f + 0.2 * level, 0.0)});
  }

  RoughnessFrame out;
  out.specific = Eigen::ArrayXd::Zero(kRoughnessChannels);
  if (comps.empty()) return out;

  const auto& weightings = ModWeightings();
  const Eigen::Index half = n / 2 + 1;
  // Modulation weighting of each group sampled on the frame's bins.
  std::array<Eigen::ArrayXd, 5> mod_gain;
  for (std::size_t g = 0; g < mod_gain.size(); ++g) {
    mod_gain[g].resize(half);
    for (Eigen::Index k = 0; k < half; ++k) {
      mod_gain[g][k] = Lookup(static_cast<double>(k) * df, weightings[g].f, weightings[g].h);
    }
  }
  // Parseval weights of a half spectrum.
  Eigen::ArrayXd parseval = Eigen::ArrayXd::Constant(half, 2.0);
  parseval[0] = 1.0;
  if (n % 2 == 0) parseval[half - 1] = 1.0;

  double thresholds[kRoughnessChannels];
  double min_threshold = 1e300;
  for (int i = 0; i < kRoughnessChannels; ++i) {
    thresholds[i] = Lookup(0.5 * (i + 1), ear::kLtqBark, ear::kLtqDb);
    min_threshold = std::min(min_threshold, thresholds[i]);
  }
  // Channels reached by each component: flat within half a Bark, sloped
  // outside. Walking outwards stops once even the lowest threshold is missed.
  std::vector<std::vector<std::pair<Eigen::Index, double>>> members(kRoughnessChannels);
  for (const Component& c : comps) {
    const int center = std::clamp(static_cast<int>(std::lround(2.0 * c.bark)) - 1, 0,
                                  kRoughnessChannels - 1);
    for (int dir : {-1, 1}) {
      for (int i = dir < 0 ? center : center + 1; i >= 0 && i < kRoughnessChannels; i += dir) {
        const double zi = 0.5 * (i + 1);
        const double d = std::abs(c.bark - zi) - 0.5;
        double att = 0.0;
        if (d > 0.0) att = zi < c.bark ? -27.0 * d : c.upper_slope * d;
        if (c.level + att <= min_threshold && d > 0.0) break;
        if (c.level + att <= thresholds[i]) continue;
        members[static_cast<std::size_t>(i)].push_back({c.bin, std::pow(10.0, att / 20.0)});
      }
    }
  }

  std::vector<Eigen::ArrayXcd> mod_spec(kRoughnessChannels);
  Eigen::ArrayXd depth = Eigen::ArrayXd::Zero(kRoughnessChannels);
  Eigen::ArrayXcd excitation(n);
  for (int i = 0; i < kRoughnessChannels; ++i) {
    const auto& m = members[static_cast<std::size_t>(i)];
    if (m.empty()) continue;
    excitation.setZero();
    for (const auto& [bin, gain] : m) {
      excitation[bin] = line[static_cast<std::size_t>(bin)] * gain;
    }
    // Hilbert envelope of the channel signal.
    const Eigen::ArrayXd env =
        (fft.InverseComplex(excitation) * static_cast<double>(n)).abs();
    const double h0 = env.mean();
    Eigen::ArrayXcd spec_i = fft.Forward(env - h0) * mod_gain[static_cast<std::size_t>(ModGroup(i))];
    const double rms = std::sqrt((parseval * spec_i.abs2()).sum()) / static_cast<double>(n);
    depth[i] = h0 > 0.0 ? std::min(rms / h0, 1.0) : 0.0;
    mod_spec[static_cast<std::size_t>(i)] = std::move(spec_i);
  }

  // Correlation of the weighted envelopes of channels i and i + 2, from
  // their spectra; both have zero mean.
  Eigen::ArrayXd k = Eigen::ArrayXd::Zero(kRoughnessChannels);
  for (int i = 0; i + 2 < kRoughnessChannels; ++i) {
    const auto& a = mod_spec[static_cast<std::size_t>(i)];
    const auto& b = mod_spec[static_cast<std::size_t>(i + 2)];
    if (a.size() == 0 || b.size() == 0) continue;
    const double den = std::sqrt((parseval * a.abs2()).sum() * (parseval * b.abs2()).sum());
    if (den > 0.0) k[i] = (parseval * (a * b.conjugate()).real()).sum() / den;
  }
  for (int i = 0; i < kRoughnessChannels; ++i) {
    double kk;
    if (i < 2) {
      kk = k[i];
    } else if (i < kRoughnessChannels - 2) {
      kk = k[i] * k[i - 2];
    } else {
      kk = k[i - 2];
    }
    const double g = Lookup(0.5 * (i + 1), kGziBark, kGzi);
    out.specific[i] = kCalibration * g * std::pow(depth[i] * kk, 2.0);
  }
  out.total = out.specific.sum();
  return out;
}

SqmTrace RoughnessTv(const CalibratedSignal& signal,
                     const RoughnessOptions& options) {
  RequireMono(signal, "roughness");
  if (!signal.calibrated()) {
    throw Error(errc::kUncalibrated, "roughness needs a calibrated signal");
  }
  const double fs = signal.sample_rate();
  const auto len =
      static_cast<Eigen::Index>(std::llround(options.frame_seconds * fs));
  const auto hop = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(len * (1.0 - options.overlap))));
  if (signal.frames() < len) {
    throw Error(errc::kInvalidArgument, "signal shorter than a roughness frame");
  }
  SqmTrace trace;
  trace.metric = "roughness";
  trace.unit = "asper";
  const auto x = signal.channel(0);
  for (Eigen::Index start = 0; start + len <= signal.frames(); start += hop) {
    trace.times.push_back((static_cast<double>(start) + len / 2.0) / fs);
    trace.values.push_back(RoughnessOfFrame(x.segment(start, len), fs).total);
  }
  return trace;
}

}  // namespace evsound
