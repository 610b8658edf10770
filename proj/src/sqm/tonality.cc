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

#include "evsound/sqm/tonality.h"

#include <algorithm>
#include <cmath>

#include "evsound/dsp.h"
#include "evsound/error.h"
#include "evsound/sqm/loudness.h"
#include "sqm/ear_tables.h"

namespace evsound {
namespace {

constexpr double kScale = 1.09;
constexpr double kTonalExponent = 0.29;
constexpr double kLoudnessExponent = 0.79;
constexpr double kMinToneHz = 20.0;
constexpr double kMaxToneHz = 16000.0;
constexpr double kProminenceDb = 7.0;
constexpr Eigen::Index kLobe = 2;  // Hann main-lobe half width, bins

double Db(double power) {
  return power > 0.0 ? 10.0 * std::log10(power / (kReferencePressure * kReferencePressure))
                     : -300.0;
}

double Power(double db) {
  return kReferencePressure * kReferencePressure * std::pow(10.0, db / 10.0);
}

// Masking by a tone at (zk, lk, fk) seen at critical-band rate zi.
double MaskingLevel(double zk, double lk, double fk, double zi) {
  if (zk < zi) {
    const double slope = std::min(-24.0 - 230.0 / fk + 0.2 * lk, 0.0);
    return lk + slope * (zi - zk);
  }
  return lk - 27.0 * (zk - zi);
}

SpecificLoudness BandLoudness(const Eigen::ArrayXd& power, double df) {
  const auto centers = LoudnessBandCenters();
  LoudnessBandLevels levels;
  for (int b = 0; b < kLoudnessBands; ++b) {
    const double lo = centers[static_cast<std::size_t>(b)] * std::pow(10.0, -0.05);
    const double hi = centers[static_cast<std::size_t>(b)] * std::pow(10.0, 0.05);
    double sum = 0.0;
    for (auto k = static_cast<Eigen::Index>(std::ceil(lo / df));
         k < power.size() && static_cast<double>(k) * df < hi; ++k) {
      sum += power[k];
    }
    levels[static_cast<std::size_t>(b)] = std::max(Db(sum), -100.0);
  }
  return LoudnessFromThirdOctave(levels);
}

}  // namespace

double TonalFrequencyWeight(double hz) {
  const double r = hz / 700.0 + 700.0 / hz;
  return 1.0 / std::sqrt(1.0 + 0.2 * r * r);
}

TonalityFrame TonalityOfFrame(const Eigen::ArrayXd& frame, double sample_rate) {
  const Eigen::Index n = frame.size();
  if (n < 64) throw Error(errc::kInvalidArgument, "tonality frame too short");
  const Eigen::ArrayXd w = dsp::HannWindow(n);
  dsp::Fft fft;
  const Eigen::ArrayXcd spec = fft.Forward(frame * w);
  // One-sided power per bin; sums to the mean square over a line's lobe.
  Eigen::ArrayXd power = spec.abs2() * (2.0 / (static_cast<double>(n) * w.square().sum()));
  power[0] *= 0.5;
  const double df = sample_rate / static_cast<double>(n);
  const Eigen::Index last = power.size() - 1;

  TonalityFrame out;
  struct Peak {
    Eigen::Index bin;
    double freq, z, level;
  };
  std::vector<Peak> peaks;
  for (Eigen::Index k = 3; k + 3 <= last; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < kMinToneHz || f > std::min(kMaxToneHz, 0.45 * sample_rate)) continue;
    if (!(power[k] > power[k - 1] && power[k] >= power[k + 1])) continue;
    const double lk = Db(power[k]);
    bool prominent = true;
    for (Eigen::Index j : {2, 3}) {
      if (lk - Db(power[k - j]) < kProminenceDb ||
          lk - Db(power[k + j]) < kProminenceDb) {
        prominent = false;
      }
    }
    if (!prominent) continue;
    // Line level from the whole main lobe, frequency from the lobe centroid.
    const double lobe = power.segment(k - kLobe, 2 * kLobe + 1).sum();
    double centroid = 0.0;
    for (Eigen::Index j = -kLobe; j <= kLobe; ++j) {
      centroid += static_cast<double>(k + j) * power[k + j];
    }
    const double freq = centroid / lobe * df;
    peaks.push_back({k, freq, dsp::HzToBark(freq), Db(lobe)});
  }

  // Residual spectrum with the tonal lobes removed.
  Eigen::ArrayXd noise = power;
  for (const Peak& p : peaks) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, p.bin - kLobe - 1);
    const Eigen::Index hi = std::min(last, p.bin + kLobe + 1);
    noise.segment(lo, hi - lo + 1).setZero();
  }

  double wt2 = 0.0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const Peak& p = peaks[i];
    double mask = Power(dsp::Interp(p.z, ear::kLtqBark, ear::kLtqDb));
    for (std::size_t k = 0; k < peaks.size(); ++k) {
      if (k == i) continue;
      mask += Power(MaskingLevel(peaks[k].z, peaks[k].level, peaks[k].freq, p.z));
    }
    const double lo = dsp::BarkToHz(std::max(p.z - 0.5, 0.0));
    const double hi = dsp::BarkToHz(p.z + 0.5);
    for (auto k = static_cast<Eigen::Index>(std::ceil(lo / df));
         k <= last && static_cast<double>(k) * df <= hi; ++k) {
      mask += noise[k];
    }
    const double excess = p.level - Db(mask);
    if (excess <= 0.0) continue;
    out.components.push_back({p.freq, p.level, excess});
    const double w3 = 1.0 - std::exp(-excess / 15.0);
    const double wi = TonalFrequencyWeight(p.freq) * w3;
    wt2 += wi * wi;
  }
  if (out.components.empty()) return out;
  out.tonal_weight = std::sqrt(wt2);

  const double total = BandLoudness(power, df).total;
  const double residual = BandLoudness(noise, df).total;
  out.loudness_weight =
      total > 0.0 ? std::clamp(1.0 - residual / total, 0.0, 1.0) : 0.0;
  out.tonality = kScale * std::pow(out.tonal_weight, kTonalExponent) *
                 std::pow(out.loudness_weight, kLoudnessExponent);
  return out;
}

SqmTrace TonalityTv(const CalibratedSignal& signal,
                    const TonalityOptions& options) {
  RequireMono(signal, "tonality");
  if (!signal.calibrated()) {
    throw Error(errc::kUncalibrated, "tonality needs a calibrated signal");
  }
  if (options.frame_size < 64 || options.hop < 1) {
    throw Error(errc::kInvalidArgument, "bad tonality frame settings");
  }
  const double fs = signal.sample_rate();
  const Eigen::Index len = options.frame_size;
  Eigen::ArrayXd x = signal.channel(0);
  if (x.size() < len) {
    Eigen::ArrayXd padded = Eigen::ArrayXd::Zero(len);
    padded.head(x.size()) = x;
    x = std::move(padded);
  }
  SqmTrace trace;
  trace.metric = "tonality";
  trace.unit = "t.u.";
  for (Eigen::Index start = 0; start + len <= x.size(); start += options.hop) {
    trace.times.push_back((static_cast<double>(start) + len / 2.0) / fs);
    trace.values.push_back(TonalityOfFrame(x.segment(start, len), fs).tonality);
  }
  return trace;
}

}  // namespace evsound
