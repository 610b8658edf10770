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

#include <cmath>

#include <gtest/gtest.h>

#include "evsound/synth.h"
#include "test_util.h"

namespace evsound {
namespace {

using testing::AmplitudeForDb;
using testing::Median;
using testing::ThrownCode;

constexpr double kFs = 48000.0;

double MedianK(const CalibratedSignal& s) { return Median(TonalityTv(s).values); }

TEST(TonalityTest, UnitAnchor) {
  EXPECT_NEAR(MedianK(SynthPureTone(1000.0, 1.0, kFs, AmplitudeForDb(60.0))), 1.0, 0.1);
}

TEST(TonalityTest, BroadbandNoiseIsNotTonal) {
  dsp::Rng rng(3);
  Eigen::ArrayXd w(48000);
  for (auto& v : w) v = 0.02 * rng.Gaussian();
  EXPECT_LE(MedianK(CalibratedSignal::Mono(kFs, w)), 0.1);
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 1, 0.02}, 2.0, kFs);
  EXPECT_LE(MedianK(bed), 0.1);
}

TEST(TonalityTest, SilenceIsZero) {
  const auto tr = TonalityTv(CalibratedSignal::Zeros(kFs, 48000));
  for (double v : tr.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(tr.metric, "tonality");
  EXPECT_EQ(tr.unit, "t.u.");
}

TEST(TonalityTest, FrequencyWeight) {
  // 1 / sqrt(1 + 0.2 (f/700 + 700/f)^2), largest at 700 Hz.
  for (double f : {100.0, 350.0, 700.0, 1000.0, 2000.0, 8000.0}) {
    const double r = f / 700.0 + 700.0 / f;
    EXPECT_NEAR(TonalFrequencyWeight(f), 1.0 / std::sqrt(1.0 + 0.2 * r * r), 1e-12);
    EXPECT_LE(TonalFrequencyWeight(f), TonalFrequencyWeight(700.0));
  }
}

TEST(TonalityTest, DetectsToneFrequencyAndLevel) {
  const auto s = SynthPureTone(1234.0, 0.5, kFs, AmplitudeForDb(60.0));
  const auto fr = TonalityOfFrame(s.mono().head(8192).eval(), kFs);
  ASSERT_EQ(fr.components.size(), 1u);
  EXPECT_NEAR(fr.components[0].frequency, 1234.0, 2.0);
  EXPECT_NEAR(fr.components[0].level, 60.0, 0.5);
  EXPECT_GT(fr.components[0].excess_level, 20.0);
}

// The frame value follows from its parts: w_T from the components, then
// K = 1.09 w_T^0.29 w_Gr^0.79.
TEST(TonalityPropertyTest, FrameComposition) {
  const auto a = SynthCombined(1000.0, 90.0, 0.5, 0.5, kFs, AmplitudeForDb(60.0));
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 2, 0.005}, 0.5, kFs);
  const CalibratedSignal in[] = {a, bed};
  const double g[] = {1.0, 1.0};
  const Eigen::ArrayXd x = Mix(in, g).mono().head(8192);
  const auto fr = TonalityOfFrame(x, kFs);
  ASSERT_GE(fr.components.size(), 1u);
  double sum = 0.0;
  for (const auto& c : fr.components) {
    const double w = TonalFrequencyWeight(c.frequency) *
                     (1.0 - std::exp(-c.excess_level / 15.0));
    sum += w * w;
  }
  EXPECT_NEAR(fr.tonal_weight, std::sqrt(sum), 1e-9);
  EXPECT_NEAR(fr.tonality,
              1.09 * std::pow(fr.tonal_weight, 0.29) * std::pow(fr.loudness_weight, 0.79),
              1e-9);
  EXPECT_GE(fr.loudness_weight, 0.0);
  EXPECT_LE(fr.loudness_weight, 1.0);
}

TEST(TonalityTest, NoiseMasksTone) {
  const auto tone = SynthPureTone(1000.0, 1.0, kFs, AmplitudeForDb(60.0));
  dsp::Rng rng(5);
  Eigen::ArrayXd w(48000);
  for (auto& v : w) v = 0.02 * rng.Gaussian();  // 60 dB white noise
  const CalibratedSignal in[] = {tone, CalibratedSignal::Mono(kFs, w)};
  const double g[] = {1.0, 1.0};
  EXPECT_LT(MedianK(Mix(in, g)), MedianK(tone));
}

TEST(TonalityTest, ShortSignalIsPaddedAndErrors) {
  const auto s = SynthPureTone(1000.0, 0.05, kFs, AmplitudeForDb(60.0));
  EXPECT_FALSE(TonalityTv(s).values.empty());
  EXPECT_EQ(ThrownCode([] {
              TonalityTv(CalibratedSignal::Mono(kFs, Eigen::ArrayXd::Ones(9000), false));
            }),
            errc::kUncalibrated);
  EXPECT_EQ(ThrownCode([] {
              TonalityTv(CalibratedSignal::Zeros(kFs, 9000), {8192, 0});
            }),
            errc::kInvalidArgument);
}

}  // namespace
}  // namespace evsound
