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

#include "evsound/pnl.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evsound/error.h"

namespace evsound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NoyRow {
  double spl_a, spl_b, spl_c, spl_d, spl_e;
  double m_b, m_c, m_d, m_e;
};

// clang-format off
constexpr NoyRow kNoyTable[kThirdOctaveBands] = {
    {91.0, 64, 52, 49, 55, 0.043478, 0.030103, 0.079520, 0.058098},  // 50
    {85.9, 60, 51, 44, 51, 0.040570, 0.030103, 0.068160, 0.058098},  // 63
    {87.3, 56, 49, 39, 46, 0.036831, 0.030103, 0.068160, 0.052288},  // 80
    {79.9, 53, 47, 34, 42, 0.036831, 0.030103, 0.059640, 0.047534},  // 100
    {79.8, 51, 46, 30, 39, 0.035336, 0.030103, 0.053013, 0.043573},  // 125
    {76.0, 48, 45, 27, 36, 0.033333, 0.030103, 0.053013, 0.043573},  // 160
    {74.0, 46, 43, 24, 33, 0.033333, 0.030103, 0.053013, 0.040221},  // 200
    {74.9, 44, 42, 21, 30, 0.032051, 0.030103, 0.053013, 0.037349},  // 250
    {94.6, 42, 41, 18, 27, 0.030675, 0.030103, 0.053013, 0.034859},  // 315
    {kInf, 40, 40, 16, 25, 0.030103, 0.0,      0.053013, 0.034859},  // 400
    {kInf, 40, 40, 16, 25, 0.030103, 0.0,      0.053013, 0.034859},  // 500
    {kInf, 40, 40, 16, 25, 0.030103, 0.0,      0.053013, 0.034859},  // 630
    {kInf, 40, 40, 16, 25, 0.030103, 0.0,      0.053013, 0.034859},  // 800
    {kInf, 40, 40, 16, 25, 0.030103, 0.0,      0.053013, 0.034859},  // 1000
    {kInf, 38, 38, 15, 23, 0.030103, 0.0,      0.059640, 0.034859},  // 1250
    {kInf, 34, 34, 12, 21, 0.029960, 0.0,      0.053013, 0.040221},  // 1600
    {kInf, 32, 32,  9, 18, 0.029960, 0.0,      0.053013, 0.037349},  // 2000
    {kInf, 30, 30,  5, 15, 0.029960, 0.0,      0.047712, 0.034859},  // 2500
    {kInf, 29, 29,  4, 14, 0.029960, 0.0,      0.047712, 0.034859},  // 3150
    {kInf, 29, 29,  5, 14, 0.029960, 0.0,      0.053013, 0.034859},  // 4000
    {kInf, 30, 30,  6, 15, 0.029960, 0.0,      0.053013, 0.034859},  // 5000
    {kInf, 31, 31, 10, 17, 0.029960, 0.0,      0.068160, 0.037349},  // 6300
    {44.3, 37, 34, 17, 23, 0.042285, 0.029960, 0.079520, 0.037349},  // 8000
    {50.7, 41, 37, 21, 29, 0.042285, 0.029960, 0.059640, 0.043573},  // 10000
};
// clang-format on

// Bands 0..23 here are bands 1..24 of the procedure; the slope analysis
// starts at the procedure's band 3 (80 Hz), index 2.
constexpr int kFirstToneBand = 2;

double BandCorrection(int band, double f) {
  if (f < 1.5) return 0.0;
  const double fc = NominalThirdOctaveCenters()[static_cast<std::size_t>(band)];
  const bool mid = fc >= 500.0 && fc <= 5000.0;
  if (mid) {
    if (f < 3.0) return 2.0 * f / 3.0 - 1.0;
    if (f < 20.0) return f / 3.0;
    return 20.0 / 3.0;
  }
  if (f < 3.0) return f / 3.0 - 0.5;
  if (f < 20.0) return f / 6.0;
  return 10.0 / 3.0;
}

}  // namespace

double Noy(int band, double spl) {
  if (band < 0 || band >= kThirdOctaveBands) {
    throw Error(errc::kInvalidArgument, "band index out of range");
  }
  const NoyRow& r = kNoyTable[band];
  if (spl >= r.spl_a) return std::pow(10.0, r.m_c * (spl - r.spl_c));
  if (spl >= r.spl_b) return std::pow(10.0, r.m_b * (spl - r.spl_b));
  if (spl >= r.spl_e) return 0.3 * std::pow(10.0, r.m_e * (spl - r.spl_e));
  if (spl >= r.spl_d) return 0.1 * std::pow(10.0, r.m_d * (spl - r.spl_d));
  return 0.0;
}

double PerceivedNoiseLevel(const BandLevels& levels) {
  double sum = 0.0, peak = 0.0;
  for (int b = 0; b < kThirdOctaveBands; ++b) {
    const double n = Noy(b, levels[static_cast<std::size_t>(b)]);
    sum += n;
    peak = std::max(peak, n);
  }
  const double total = peak + 0.15 * (sum - peak);
  if (!(total > 0.0)) return kFloorDb;
  return 40.0 + 33.22 * std::log10(total);
}

double ToneCorrection(const BandLevels& spl) {
  constexpr int n = kThirdOctaveBands;
  constexpr int first = kFirstToneBand;
  // Step 1: slopes s[i] = SPL[i] - SPL[i-1], defined for i > first.
  std::array<double, n> s{};
  for (int i = first + 1; i < n; ++i) s[i] = spl[i] - spl[i - 1];

  // Steps 2-3: mark irregular slopes and the levels they point at.
  std::array<bool, n> marked{};
  for (int i = first + 2; i < n; ++i) {
    if (std::abs(s[i] - s[i - 1]) <= 5.0) continue;
    if (s[i] > 0.0 && s[i] > s[i - 1]) {
      marked[i] = true;
    } else if (s[i] <= 0.0 && s[i - 1] > 0.0) {
      marked[i - 1] = true;
    }
  }

  // Step 4: replace marked levels by the mean of their neighbours.
  std::array<double, n> adj = spl;
  for (int i = first; i < n; ++i) {
    if (!marked[i]) continue;
    adj[i] = i == n - 1 ? spl[n - 2] + s[n - 2]
                        : 0.5 * (spl[i - 1] + spl[i + 1]);
  }

  // Step 5: new slopes, with one extra slope past the last band.
  std::array<double, n + 1> s2{};
  for (int i = first + 1; i < n; ++i) s2[i] = adj[i] - adj[i - 1];
  s2[first] = s2[first + 1];
  s2[n] = s2[n - 1];

  // Step 6: three-band average slopes.
  std::array<double, n> sbar{};
  for (int i = first; i < n - 1; ++i) {
    sbar[i] = (s2[i] + s2[i + 1] + s2[i + 2]) / 3.0;
  }

  // Step 7: background levels.
  std::array<double, n> bg{};
  bg[first] = spl[first];
  for (int i = first + 1; i < n; ++i) bg[i] = bg[i - 1] + sbar[i - 1];

  // Steps 8-10.
  double c = 0.0;
  for (int i = first; i < n; ++i) {
    c = std::max(c, BandCorrection(i, spl[i] - bg[i]));
  }
  return c;
}

PnlResult PnlChain(const std::vector<ThirdOctaveFrame>& frames,
                   double frame_step) {
  if (frames.empty()) throw Error(errc::kInvalidArgument, "no frames");
  if (!(frame_step > 0.0)) {
    throw Error(errc::kInvalidArgument, "frame step must be positive");
  }
  PnlResult out;
  for (const ThirdOctaveFrame& f : frames) {
    const double pnl = PerceivedNoiseLevel(f.band_levels);
    const double c = pnl > kFloorDb ? ToneCorrection(f.band_levels) : 0.0;
    out.pnl.push_back(pnl);
    out.tone_correction.push_back(c);
    out.pnlt.times.push_back(f.time);
    out.pnlt.values.push_back(pnl + c);
  }
  out.pnlt_max =
      *std::max_element(out.pnlt.values.begin(), out.pnlt.values.end());
  if (!(out.pnlt_max > kFloorDb)) {
    throw Error(errc::kSilence, "no frame reaches the noy threshold");
  }
  double energy = 0.0;
  for (double v : out.pnlt.values) {
    if (v >= out.pnlt_max - 10.0) energy += std::pow(10.0, v / 10.0);
  }
  out.epnl = 10.0 * std::log10(energy * frame_step / kEpnlReferenceSeconds);
  return out;
}

}  // namespace evsound
