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
#include <cmath>

#include <gtest/gtest.h>

#include "evsound/synth.h"
#include "test_util.h"

namespace evsound {
namespace {

using testing::AmTone;
using testing::Median;
using testing::ThrownCode;

constexpr double kFs = 48000.0;

double MedianRoughness(const Eigen::ArrayXd& x) {
  return Median(RoughnessTv(CalibratedSignal::Mono(kFs, x)).values);
}

TEST(RoughnessTest, UnitAnchor) {
  EXPECT_NEAR(MedianRoughness(AmTone(1000, 70, 1.0, 60, kFs, 96000)), 1.0, 0.15);
}

TEST(RoughnessTest, UnmodulatedToneIsSmooth) {
  EXPECT_LT(MedianRoughness(AmTone(1000, 70, 0.0, 60, kFs, 96000)), 0.1);
}

TEST(RoughnessTest, SlowModulationIsNotRough) {
  const double r4 = MedianRoughness(AmTone(1000, 4, 1.0, 60, kFs, 96000));
  const double r70 = MedianRoughness(AmTone(1000, 70, 1.0, 60, kFs, 96000));
  EXPECT_LT(r4, 0.1 * r70);
}

// Medians from mosqito 1.2.1 roughness_dw (overlap 0.5) on the same signals.
TEST(RoughnessOracleTest, ModulationFrequencyResponse) {
  const struct {
    double fm;
    double expected;
  } cases[] = {{4, 0.00623},  {20, 0.18698},  {40, 0.63450}, {70, 1.01921},
               {100, 0.77793}, {150, 0.38265}, {300, 0.01479}};
  for (const auto& c : cases) {
    const double r = MedianRoughness(AmTone(1000, c.fm, 1.0, 60, kFs, 96000));
    EXPECT_NEAR(r, c.expected, std::max(0.03, 0.1 * c.expected)) << c.fm;
  }
  EXPECT_NEAR(MedianRoughness(AmTone(500, 70, 1.0, 70, kFs, 96000)), 0.94148,
              0.1 * 0.94148);
}

TEST(RoughnessTest, GrowsWithModulationDepth) {
  double prev = -1.0;
  for (double m : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double r = MedianRoughness(AmTone(1000, 70, m, 60, kFs, 96000));
    EXPECT_GT(r, prev) << m;
    prev = r;
  }
}

TEST(RoughnessTest, TraceLayout) {
  const auto tr = RoughnessTv(CalibratedSignal::Mono(kFs, AmTone(1000, 70, 1, 60, kFs, 96000)));
  EXPECT_EQ(tr.metric, "roughness");
  EXPECT_EQ(tr.unit, "asper");
  ASSERT_GE(tr.times.size(), 2u);
  EXPECT_NEAR(tr.times[1] - tr.times[0], 0.1, 1e-9);
  for (double v : tr.values) EXPECT_GE(v, 0.0);
  const auto frame = RoughnessOfFrame(
      AmTone(1000, 70, 1, 60, kFs, 9600), kFs);
  EXPECT_EQ(frame.specific.size(), kRoughnessChannels);
  EXPECT_NEAR(frame.specific.sum(), frame.total, 1e-12);
}

TEST(RoughnessTest, SilenceAndErrors) {
  const auto tr = RoughnessTv(CalibratedSignal::Zeros(kFs, 48000));
  for (double v : tr.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(ThrownCode([] {
              RoughnessTv(CalibratedSignal::Mono(kFs, Eigen::ArrayXd::Ones(48000), false));
            }),
            errc::kUncalibrated);
  EXPECT_EQ(ThrownCode([] { RoughnessTv(CalibratedSignal::Zeros(kFs, 100)); }),
            errc::kInvalidArgument);
}

TEST(RoughnessPropertyTest, Deterministic) {
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 5, 0.05}, 1.0, kFs);
  EXPECT_EQ(RoughnessTv(bed).values, RoughnessTv(bed).values);
}

}  // namespace
}  // namespace evsound
