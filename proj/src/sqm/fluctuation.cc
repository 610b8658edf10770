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

#include "evsound/sqm/fluctuation.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "evsound/dsp.h"
#include "evsound/error.h"
#include "sqm/ear_tables.h"

namespace evsound {
namespace {

// 1 kHz, 60 dB, 100% modulated at 4 Hz reads 1 vacil.
constexpr double kCalibration = 1.0 / 11.018;
constexpr double kExponent = 1.7;
constexpr double kEnvelopeRate = 200.0;
constexpr double kEnvelopeCutoff = 40.0;
constexpr int kGammatoneOrder = 4;

double Erb(double hz) { return 24.7 * (4.37 * hz / 1000.0 + 1.0); }

// Magnitude envelope of one fourth-order gammatone channel, computed at
// baseband: shift fc to DC, then a cascade of complex one-pole lowpasses.
Eigen::ArrayXd GammatoneEnvelope(const Eigen::ArrayXd& x, double fc,
                                 double fs) {
  const double a = std::exp(-2.0 * std::numbers::pi * 1.019 * Erb(fc) / fs);
  const double w = 2.0 * std::numbers::pi * fc / fs;
  const std::complex<double> step = std::polar(1.0, -w);
  std::complex<double> osc = 1.0;
  std::complex<double> s[kGammatoneOrder] = {};
  Eigen::ArrayXd env(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    std::complex<double> v = x[n] * osc;
    for (auto& st : s) {
      st = (1.0 - a) * v + a * st;
      v = st;
    }
    env[n] = 2.0 * std::abs(v);
    osc *= step;
    // Keep the oscillator on the unit circle.
    if ((n & 1023) == 1023) osc /= std::abs(osc);
  }
  return env;
}

double Correlation(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  const Eigen::ArrayXd da = a - a.mean();
  const Eigen::ArrayXd db = b - b.mean();
  const double den = std::sqrt(da.square().sum() * db.square().sum());
  return den > 0.0 ? (da * db).sum() / den : 0.0;
}

Eigen::ArrayXd Detrend(const Eigen::ArrayXd& y) {
  const auto n = static_cast<double>(y.size());
  const Eigen::ArrayXd t =
      Eigen::ArrayXd::LinSpaced(y.size(), 0.0, n - 1.0) - (n - 1.0) / 2.0;
  const double tt = t.square().sum();
  const double slope = tt > 0.0 ? (t * (y - y.mean())).sum() / tt : 0.0;
  return y - y.mean() - slope * t;
}

}  // namespace

double FluctuationModulationWeight(double mod_hz) {
  if (mod_hz <= 0.0) return 0.0;
  return 2.0 / (mod_hz / 4.0 + 4.0 / mod_hz);
}

SqmTrace FluctuationTv(const CalibratedSignal& signal,
                       const FluctuationOptions& options) {
  RequireMono(signal, "fluctuation strength");
  if (!signal.calibrated()) {
    throw Error(errc::kUncalibrated,
                "fluctuation strength needs a calibrated signal");
  }
  if (!(options.frame_seconds > 0.0) || !(options.hop_seconds > 0.0)) {
    throw Error(errc::kInvalidArgument, "frame and hop must be positive");
  }
  const double fs = signal.sample_rate();
  const int decim = std::max(1, static_cast<int>(std::floor(fs / kEnvelopeRate)));
  const double env_rate = fs / decim;
  const Eigen::ArrayXd x = signal.channel(0);
  const auto n_env = static_cast<Eigen::Index>(x.size() / decim);
  if (n_env < static_cast<Eigen::Index>(0.25 * env_rate)) {
    throw Error(errc::kInvalidArgument,
                "signal too short for fluctuation strength");
  }
  const auto smooth = dsp::ButterworthLowpass(4, kEnvelopeCutoff, fs);

  // Slow envelopes of every audible channel at the envelope rate.
  std::vector<Eigen::ArrayXd> envs(kFluctuationChannels);
  std::vector<double> thresholds(kFluctuationChannels, 0.0);
  for (int i = 0; i < kFluctuationChannels; ++i) {
    const double z = 0.5 * (i + 1);
    const double fc = dsp::BarkToHz(z);
    thresholds[static_cast<std::size_t>(i)] =
        dsp::Interp(z, ear::kLtqBark, ear::kLtqDb);
    if (fc >= 0.45 * fs) continue;
    const double gain =
        std::pow(10.0, dsp::Interp(z, ear::kEarBark, ear::kEarDb) / 20.0);
    const Eigen::ArrayXd full =
        dsp::FilterCascade(smooth, GammatoneEnvelope(x, fc, fs) * gain);
    Eigen::ArrayXd dec(n_env);
    for (Eigen::Index k = 0; k < n_env; ++k) dec[k] = full[k * decim];
    envs[static_cast<std::size_t>(i)] = std::move(dec);
  }

  auto len = static_cast<Eigen::Index>(std::llround(options.frame_seconds * env_rate));
  len = std::min(len, n_env);
  const auto hop = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(options.hop_seconds * env_rate)));
  const Eigen::ArrayXd window = dsp::HannWindow(len);
  const double window_rms = std::sqrt(window.square().mean());
  Eigen::ArrayXd weights(len / 2 + 1);
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    weights[k] = FluctuationModulationWeight(static_cast<double>(k) * env_rate /
                                             static_cast<double>(len));
  }

  dsp::Fft fft;
  SqmTrace trace;
  trace.metric = "fluctuation_strength";
  trace.unit = "vacil";
  std::vector<Eigen::ArrayXd> bands(kFluctuationChannels);
  Eigen::ArrayXd depth(kFluctuationChannels);
  for (Eigen::Index start = 0; start + len <= n_env; start += hop) {
    depth.setZero();
    for (int i = 0; i < kFluctuationChannels; ++i) {
      auto& band = bands[static_cast<std::size_t>(i)];
      band = Eigen::ArrayXd::Zero(len);
      const Eigen::ArrayXd& env = envs[static_cast<std::size_t>(i)];
      if (env.size() == 0) continue;
      const Eigen::ArrayXd seg = env.segment(start, len);
      const double h0 = seg.mean();
      if (h0 <= 0.0) continue;
      const double level = 20.0 * std::log10(h0 / std::sqrt(2.0) / kReferencePressure);
      if (level <= thresholds[static_cast<std::size_t>(i)]) continue;
      Eigen::ArrayXcd spec = fft.Forward(Detrend(seg) * window);
      spec *= weights.head(spec.size());
      band = fft.Inverse(spec, len) / window_rms;
      depth[i] = std::min(std::sqrt(band.square().mean()) / h0, 1.0);
    }
    double total = 0.0;
    for (int i = 0; i < kFluctuationChannels; ++i) {
      if (depth[i] == 0.0) continue;
      double kk = 1.0;
      if (i >= 2) kk *= Correlation(bands[static_cast<std::size_t>(i - 2)],
                                    bands[static_cast<std::size_t>(i)]);
      if (i + 2 < kFluctuationChannels) {
        kk *= Correlation(bands[static_cast<std::size_t>(i)],
                          bands[static_cast<std::size_t>(i + 2)]);
      }
      total += std::pow(depth[i] * std::abs(kk), kExponent);
    }
    trace.times.push_back((static_cast<double>(start) + len / 2.0) / env_rate);
    trace.values.push_back(kCalibration * total);
  }
  return trace;
}

}  // namespace evsound
