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

#include <cmath>

#include <gtest/gtest.h>

#include "evsound/dsp.h"
#include "evsound/synth.h"
#include "test_util.h"

namespace evsound {
namespace {

using testing::ThrownCode;

constexpr int k1k = 13;  // index of the 1 kHz band

BandLevels Flat(double db) {
  BandLevels b;
  b.fill(db);
  return b;
}

TEST(NoyTest, DefinitionPoints) {
  // One noy is the noisiness of the 1 kHz band at 40 dB; it doubles per
  // 10 dB on the main slope.
  EXPECT_NEAR(Noy(k1k, 40.0), 1.0, 1e-12);
  EXPECT_NEAR(Noy(k1k, 50.0), 2.0, 1e-3);
  EXPECT_NEAR(Noy(k1k, 80.0), 16.0, 0.01);
  EXPECT_EQ(Noy(k1k, 10.0), 0.0);
  EXPECT_EQ(ThrownCode([] { Noy(24, 60.0); }), errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { Noy(-1, 60.0); }), errc::kInvalidArgument);
}

TEST(NoyPropertyTest, ContinuousAndMonotone) {
  for (int b = 0; b < kThirdOctaveBands; ++b) {
    double prev = 0.0;
    for (double spl = 0.0; spl <= 150.0; spl += 0.05) {
      const double n = Noy(b, spl);
      ASSERT_GE(n, prev) << "band " << b << " spl " << spl;
      // Table segments join within a few percent; no jumps larger than that.
      if (prev > 0.0) ASSERT_LT(n / prev, 1.04) << "band " << b << " spl " << spl;
      prev = n;
    }
  }
}

TEST(PerceivedNoiseLevelTest, SingleBandAndCombination) {
  BandLevels b = Flat(0.0);
  b[k1k] = 50.0;
  EXPECT_NEAR(PerceivedNoiseLevel(b), 40.0 + 33.22 * std::log10(2.0), 0.01);
  b[k1k] = 40.0;
  b[k1k - 1] = 40.0;  // 800 Hz also sits at one noy
  EXPECT_NEAR(PerceivedNoiseLevel(b), 40.0 + 33.22 * std::log10(1.15), 1e-6);
  EXPECT_EQ(PerceivedNoiseLevel(Flat(0.0)), kFloorDb);
}

TEST(PerceivedNoiseLevelPropertyTest, MonotoneInEveryBand) {
  dsp::Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    BandLevels b;
    for (auto& v : b) v = 20.0 + 80.0 * rng.Uniform();
    const double base = PerceivedNoiseLevel(b);
    const int band = static_cast<int>(rng.Below(kThirdOctaveBands));
    b[band] += 10.0 * rng.Uniform();
    EXPECT_GE(PerceivedNoiseLevel(b), base - 1e-12);
  }
}

// Expected corrections below were worked by hand through the standard's
// step procedure (slopes, encircling, adjusted levels, background, F).
TEST(ToneCorrectionTest, FlatSpectrumHasNone) {
  EXPECT_EQ(ToneCorrection(Flat(70.0)), 0.0);
}

TEST(ToneCorrectionTest, ProtrudingMidBand) {
  BandLevels b = Flat(70.0);
  b[k1k] = 85.0;  // F = 15 in the 500-5000 Hz range: C = F / 3
  EXPECT_NEAR(ToneCorrection(b), 5.0, 1e-9);
  b[k1k] = 100.0;  // F = 30 saturates at 6 2/3
  EXPECT_NEAR(ToneCorrection(b), 20.0 / 3.0, 1e-9);
}

TEST(ToneCorrectionTest, ProtrudingHighBands) {
  BandLevels b = Flat(70.0);
  b[22] = 85.0;  // 8 kHz: C = F / 6
  EXPECT_NEAR(ToneCorrection(b), 2.5, 1e-9);
  b = Flat(70.0);
  b[23] = 85.0;  // last band uses the extrapolated neighbour
  EXPECT_NEAR(ToneCorrection(b), 2.5, 1e-9);
  b = Flat(70.0);
  b[5] = 85.0;  // 160 Hz
  EXPECT_NEAR(ToneCorrection(b), 2.5, 1e-9);
}

TEST(ToneCorrectionTest, SmallBumpBelowThreshold) {
  // A 2 dB bump is not encircled; the smoothed background rises by 2/3 dB
  // and leaves F = 4/3 < 1.5.
  BandLevels b = Flat(70.0);
  b[k1k] = 72.0;
  EXPECT_EQ(ToneCorrection(b), 0.0);
}

TEST(ToneCorrectionTest, LowestBandsIgnored) {
  BandLevels b = Flat(70.0);
  b[0] = 90.0;
  b[1] = 90.0;
  EXPECT_EQ(ToneCorrection(b), 0.0);
}

TEST(ToneCorrectionTest, RealTonalAndBroadbandFrames) {
  const double fs = 48000.0;
  const auto noise =
      SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 12, 0.02}, 1.0, fs);
  const auto tone = SynthPureTone(1000.0, 1.0, fs, 0.3);
  const CalibratedSignal in[] = {noise, tone};
  const double g[] = {1.0, 1.0};
  const auto tonal = ThirdOctaveFrames(Mix(in, g), 0.5);
  const auto broad = ThirdOctaveFrames(noise, 0.5);
  for (const auto& f : tonal) EXPECT_GT(ToneCorrection(f.band_levels), 0.0);
  for (const auto& f : broad) EXPECT_LT(ToneCorrection(f.band_levels), 0.5);
  dsp::Rng rng(2);
  Eigen::ArrayXd white(48000);
  for (auto& v : white) v = 0.05 * rng.Gaussian();
  for (const auto& f : ThirdOctaveFrames(CalibratedSignal::Mono(fs, white), 0.5))
    EXPECT_LT(ToneCorrection(f.band_levels), 0.5);
}

std::vector<ThirdOctaveFrame> Steady(int count, const BandLevels& b) {
  std::vector<ThirdOctaveFrame> frames(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    frames[i].time = 0.25 + 0.5 * i;
    frames[i].band_levels = b;
  }
  return frames;
}

TEST(PnlChainTest, SingleFrame) {
  BandLevels b = Flat(60.0);
  b[k1k] = 80.0;
  const auto r = PnlChain(Steady(1, b));
  ASSERT_EQ(r.pnlt.values.size(), 1u);
  EXPECT_NEAR(r.pnlt_max, r.pnl[0] + r.tone_correction[0], 1e-12);
  EXPECT_NEAR(r.epnl, r.pnlt_max + 10.0 * std::log10(0.5 / 10.0), 1e-9);
  EXPECT_NEAR(r.epnl, r.pnlt_max - 13.01, 0.005);
}

TEST(PnlChainTest, DoublingDurationAddsThreeDb) {
  const BandLevels b = Flat(75.0);
  const auto r1 = PnlChain(Steady(20, b));
  const auto r2 = PnlChain(Steady(40, b));
  EXPECT_NEAR(r2.epnl - r1.epnl, 3.01, 0.05);
  EXPECT_NEAR(r2.pnlt_max, r1.pnlt_max, 1e-12);
}

TEST(PnlChainTest, FramesBelowWindowIgnored) {
  auto frames = Steady(10, Flat(80.0));
  const double base = PnlChain(frames).epnl;
  dsp::Rng rng(3);
  for (int extra = 0; extra < 20; ++extra) {
    ThirdOctaveFrame quiet;
    quiet.time = 5.25 + 0.5 * extra;
    // PNL drops by about 10 log2 per noy halving; 45 dB is far below 80 - 10.
    quiet.band_levels = Flat(40.0 + 5.0 * rng.Uniform());
    frames.push_back(quiet);
  }
  const auto r = PnlChain(frames);
  ASSERT_LT(r.pnlt.values.back(), r.pnlt_max - 10.0);
  EXPECT_DOUBLE_EQ(r.epnl, base);
}

TEST(PnlChainTest, Errors) {
  EXPECT_EQ(ThrownCode([] { PnlChain({}); }), errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { PnlChain(Steady(2, Flat(0.0))); }), errc::kSilence);
  EXPECT_EQ(ThrownCode([] { PnlChain(Steady(2, Flat(60.0)), 0.0); }),
            errc::kInvalidArgument);
}

TEST(PnlChainTest, NoyTableVersionPinned) {
  EXPECT_EQ(kNoyTableVersion, "icao-annex16-v1");
}

}  // namespace
}  // namespace evsound
