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

double MedianFs(const Eigen::ArrayXd& x) {
  return Median(FluctuationTv(CalibratedSignal::Mono(kFs, x)).values);
}

TEST(FluctuationTest, UnitAnchor) {
  EXPECT_NEAR(MedianFs(AmTone(1000, 4, 1.0, 60, kFs, 192000)), 1.0, 0.15);
}

TEST(FluctuationTest, UnmodulatedToneIsSteady) {
  EXPECT_LT(MedianFs(AmTone(1000, 4, 0.0, 60, kFs, 192000)), 0.05);
}

TEST(FluctuationTest, ModulationWeightPeaksAtFourHertz) {
  EXPECT_NEAR(FluctuationModulationWeight(4.0), 1.0, 1e-12);
  // Band-pass of the form 2 / (f/4 + 4/f).
  for (double f : {0.5, 1.0, 2.0, 8.0, 16.0, 32.0}) {
    EXPECT_NEAR(FluctuationModulationWeight(f), 2.0 / (f / 4.0 + 4.0 / f), 1e-12);
    EXPECT_LT(FluctuationModulationWeight(f), 1.0);
  }
  EXPECT_NEAR(FluctuationModulationWeight(2.0), FluctuationModulationWeight(8.0), 1e-12);
}

// Band-pass response to modulation rate: maximum near 4 Hz.
TEST(FluctuationTest, ModulationRateResponse) {
  const double f1 = MedianFs(AmTone(1000, 1, 1.0, 60, kFs, 192000));
  const double f4 = MedianFs(AmTone(1000, 4, 1.0, 60, kFs, 192000));
  const double f8 = MedianFs(AmTone(1000, 8, 1.0, 60, kFs, 192000));
  const double f16 = MedianFs(AmTone(1000, 16, 1.0, 60, kFs, 192000));
  const double f32 = MedianFs(AmTone(1000, 32, 1.0, 60, kFs, 192000));
  EXPECT_GT(f4, f1);
  EXPECT_GT(f4, f8);
  EXPECT_GT(f8, f16);
  EXPECT_GT(f16, f32);
}

TEST(FluctuationTest, GrowsWithDepthAndLevel) {
  const double half = MedianFs(AmTone(1000, 4, 0.5, 60, kFs, 192000));
  const double full = MedianFs(AmTone(1000, 4, 1.0, 60, kFs, 192000));
  const double loud = MedianFs(AmTone(1000, 4, 1.0, 70, kFs, 192000));
  EXPECT_LT(half, full);
  EXPECT_GT(loud, full);
}

TEST(FluctuationTest, GatedToneExceedsContinuous) {
  const auto gated = SynthIntermittent(1000.0, 500.0, 500.0, 6.0, kFs,
                                       testing::AmplitudeForDb(65.0));
  const auto cont = SynthPureTone(1000.0, 6.0, kFs, testing::AmplitudeForDb(65.0));
  const auto tg = FluctuationTv(gated);
  const auto tc = FluctuationTv(cont);
  EXPECT_GT(PercentileExceeded(tg, 0.05, 0.5), PercentileExceeded(tc, 0.05, 0.5));
  EXPECT_GT(PercentileExceeded(tg, 0.05, 0.5), 0.1);
}

TEST(FluctuationTest, TraceLayoutAndErrors) {
  const auto tr = FluctuationTv(CalibratedSignal::Mono(kFs, AmTone(1000, 4, 1, 60, kFs, 192000)));
  EXPECT_EQ(tr.metric, "fluctuation_strength");
  EXPECT_EQ(tr.unit, "vacil");
  ASSERT_EQ(tr.values.size(), tr.times.size());
  ASSERT_GE(tr.times.size(), 2u);
  EXPECT_NEAR(tr.times[1] - tr.times[0], 0.1, 1e-9);
  for (double v : tr.values) EXPECT_GE(v, 0.0);
  const auto silent = FluctuationTv(CalibratedSignal::Zeros(kFs, 3 * 48000));
  for (double v : silent.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(ThrownCode([] {
              FluctuationTv(CalibratedSignal::Mono(kFs, Eigen::ArrayXd::Ones(96000), false));
            }),
            errc::kUncalibrated);
  EXPECT_EQ(ThrownCode([] {
              FluctuationTv(CalibratedSignal::Zeros(kFs, 96000), {0.0, 0.1});
            }),
            errc::kInvalidArgument);
}

TEST(FluctuationPropertyTest, Deterministic) {
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 5, 0.05}, 2.5, kFs);
  EXPECT_EQ(FluctuationTv(bed).values, FluctuationTv(bed).values);
}

}  // namespace
}  // namespace evsound
