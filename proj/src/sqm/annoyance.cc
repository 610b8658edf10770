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

#include "evsound/sqm/annoyance.h"

#include <algorithm>
#include <cmath>
#include <future>

#include "evsound/error.h"
#include "evsound/sqm/fluctuation.h"
#include "evsound/sqm/loudness.h"
#include "evsound/sqm/roughness.h"
#include "evsound/sqm/sharpness.h"
#include "evsound/sqm/tonality.h"

namespace evsound {
namespace {

constexpr double kGamma0 = -0.16;
constexpr double kGamma1 = 11.48;
constexpr double kGamma2 = 0.84;
constexpr double kGamma3 = 1.25;
constexpr double kGamma4 = 0.29;
constexpr double kGamma5 = 5.49;

}  // namespace

AnnoyanceTerms AnnoyancePenalties(double n5, double s5, double r5, double fs5,
                                  double k5) {
  for (double v : {n5, s5, r5, fs5, k5}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(errc::kInvalidArgument,
                  "annoyance inputs must be finite and non-negative");
    }
  }
  AnnoyanceTerms t;
  if (s5 > kSharpnessThreshold) {
    t.w_s = (s5 - kSharpnessThreshold) * 0.25 * std::log10(n5 + 10.0);
  }
  if (n5 > 0.0) t.w_fr = 2.18 / std::pow(n5, 0.4) * (0.4 * fs5 + 0.6 * r5);
  const double a = 1.0 - std::exp(-kGamma4 * n5);
  const double b = 1.0 - std::exp(-kGamma5 * k5);
  t.w_t = a * a * b * b;
  return t;
}

double PsychoacousticAnnoyance(double n5, double s5, double r5, double fs5,
                               double k5) {
  const AnnoyanceTerms t = AnnoyancePenalties(n5, s5, r5, fs5, k5);
  // The offset can drive the radicand below zero for nearly neutral sounds;
  // clamp so that PA never falls below N5.
  const double radicand = kGamma0 + kGamma1 * t.w_s * t.w_s +
                          kGamma2 * t.w_fr * t.w_fr + kGamma3 * t.w_t * t.w_t;
  return n5 * (1.0 + std::sqrt(std::max(radicand, 0.0)));
}

SqmTraces ComputeSqmTraces(const CalibratedSignal& signal) {
  RequireMono(signal, "sound quality metrics");
  auto rough = std::async(std::launch::async, [&] { return RoughnessTv(signal); });
  auto fluct = std::async(std::launch::async, [&] { return FluctuationTv(signal); });
  auto tonal = std::async(std::launch::async, [&] { return TonalityTv(signal); });
  SqmTraces out;
  const LoudnessResult loud = LoudnessTv(signal);
  out.loudness = loud.loudness;
  out.sharpness = SharpnessTv(loud);
  out.roughness = rough.get();
  out.fluctuation = fluct.get();
  out.tonality = tonal.get();
  return out;
}

SqmSummary Summarize(const SqmTraces& traces, double skip_seconds) {
  SqmSummary s;
  s.n5 = PercentileExceeded(traces.loudness, 0.05, skip_seconds);
  s.s5 = PercentileExceeded(traces.sharpness, 0.05, skip_seconds);
  s.k5 = PercentileExceeded(traces.tonality, 0.05, skip_seconds);
  s.r5 = PercentileExceeded(traces.roughness, 0.05, skip_seconds);
  s.fs5 = PercentileExceeded(traces.fluctuation, 0.05, skip_seconds);
  s.pa = PsychoacousticAnnoyance(s.n5, s.s5, s.r5, s.fs5, s.k5);
  return s;
}

}  // namespace evsound
