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

#include "evsound/synth.h"

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "evsound/dsp.h"
#include "evsound/levels.h"
#include "test_util.h"

namespace evsound {
namespace {

using testing::Rms;
using testing::ThrownCode;
using testing::ToneAmplitude;

constexpr double kFs = 48000.0;

Eigen::Index At(double seconds) {
  return static_cast<Eigen::Index>(std::llround(seconds * kFs));
}

TEST(PureToneTest, LengthMatchesDuration) {
  const auto s = SynthPureTone(1000.0, 14.4, kFs, 1.0);
  EXPECT_EQ(s.frames(), 691200);
  EXPECT_EQ(s.channels(), 1);
}

TEST(PureToneTest, StartsAtPhaseZeroWithExactAmplitude) {
  const double a = 0.3;
  const auto x = SynthPureTone(1000.0, 1.0, kFs, a).mono();
  EXPECT_EQ(x[0], 0.0);
  // Quarter period of 1 kHz at 48 kHz is sample 12.
  EXPECT_NEAR(x[12], a, 1e-12);
  EXPECT_NEAR(ToneAmplitude(x, 1000.0, kFs), a, 1e-9);
}

TEST(PureToneTest, ZeroAmplitudeIsSilent) {
  const auto x = SynthPureTone(440.0, 0.5, kFs, 0.0).mono();
  EXPECT_TRUE((x == 0.0).all());
}

TEST(PureToneTest, CalibratedLevel) {
  const auto s = SynthPureTone(1000.0, 1.0, kFs, std::sqrt(2.0) * 0.02);
  EXPECT_NEAR(LpEq(s), 20.0 * std::log10(0.02 / 20e-6), 1e-6);
}

TEST(PureToneTest, ValidatesParameters) {
  EXPECT_EQ(ThrownCode([] { SynthPureTone(24000.0, 1.0, kFs, 1.0); }),
            errc::kNyquist);
  EXPECT_EQ(ThrownCode([] { SynthPureTone(25000.0, 1.0, kFs, 1.0); }),
            errc::kNyquist);
  EXPECT_EQ(ThrownCode([] { SynthPureTone(1000.0, 0.0, kFs, 1.0); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { SynthPureTone(1000.0, -1.0, kFs, 1.0); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { SynthPureTone(1000.0, 1.0, kFs, -1.0); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { SynthPureTone(0.0, 1.0, kFs, 1.0); }),
            errc::kInvalidArgument);
}

// DFT peak of any synthesized tone lies within one bin of the request.
TEST(PureTonePropertyTest, PeakWithinOneBin) {
  dsp::Rng rng(3);
  const Eigen::Index n = 4800;  // 10 Hz bins
  const double bin = kFs / n;
  for (int trial = 0; trial < 20; ++trial) {
    const double f = 100.0 + rng.Uniform() * 15000.0;
    const auto x = SynthPureTone(f, n / kFs, kFs, 1.0).mono();
    const double peak = testing::PeakFrequency(x, kFs, f - 3 * bin,
                                               f + 3 * bin, bin / 4.0);
    EXPECT_LE(std::abs(peak - f), bin) << "f=" << f;
  }
}

TEST(IntermittentTest, GatingPattern) {
  const double a = 1.0;
  const auto x = SynthIntermittent(500.0, 500.0, 500.0, 14.4, kFs, a).mono();
  ASSERT_EQ(x.size(), 691200);
  // 13 full cycles plus a partial one: every cycle ON then OFF.
  for (int k = 0; k < 14; ++k) {
    const Eigen::Index on = At(k + 0.01);
    EXPECT_NEAR(Rms(x, on, At(0.48)), a / std::sqrt(2.0), 2e-3) << k;
    if (k < 13) {
      EXPECT_EQ(x.segment(At(k + 0.5), At(0.5)).abs().maxCoeff(), 0.0) << k;
    }
  }
}

TEST(IntermittentTest, SingleCycle) {
  const auto x = SynthIntermittent(1000.0, 500.0, 500.0, 1.0, kFs, 1.0).mono();
  ASSERT_EQ(x.size(), 48000);
  EXPECT_GT(x.head(24000).abs().maxCoeff(), 0.99);
  EXPECT_EQ(x.tail(24000).abs().maxCoeff(), 0.0);
}

TEST(IntermittentTest, DutyCycleRms) {
  const auto gated =
      SynthIntermittent(1000.0, 500.0, 500.0, 14.4, kFs, 1.0).mono();
  const auto cont = SynthPureTone(1000.0, 14.4, kFs, 1.0).mono();
  const double expected = Rms(cont.head(At(13.0)).eval()) / std::sqrt(2.0);
  EXPECT_NEAR(Rms(gated.head(At(13.0)).eval()) / expected, 1.0, 0.01);
}

TEST(IntermittentTest, TransitionsAreRamped) {
  const auto x = SynthIntermittent(1000.0, 500.0, 500.0, 1.0, kFs, 1.0).mono();
  // The first millisecond sits inside the raised-cosine onset.
  EXPECT_LT(x.head(At(0.001)).abs().maxCoeff(), 0.15);
  // And the last millisecond before switch-off.
  EXPECT_LT(x.segment(At(0.499), At(0.001)).abs().maxCoeff(), 0.15);
}

TEST(IntermittentTest, RejectsNonPositiveTiming) {
  EXPECT_EQ(ThrownCode([] { SynthIntermittent(500, 0, 500, 1, kFs, 1); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { SynthIntermittent(500, 500, -1, 1, kFs, 1); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { SynthIntermittent(30000, 500, 500, 1, kFs, 1); }),
            errc::kNyquist);
}

TEST(CombinedTest, LinesAtPrincipalAndSidebands) {
  const double g = 0.5, a = 1.0;
  const auto x = SynthCombined(350.0, 90.0, g, 1.0, kFs, a).mono();
  EXPECT_NEAR(ToneAmplitude(x, 350.0, kFs), a, 1e-6);
  EXPECT_NEAR(ToneAmplitude(x, 260.0, kFs), a * g, 1e-6);
  EXPECT_NEAR(ToneAmplitude(x, 440.0, kFs), a * g, 1e-6);
  // Nothing at an unrelated on-bin frequency.
  EXPECT_LT(ToneAmplitude(x, 600.0, kFs), 1e-6);
}

TEST(CombinedTest, PowerRatio) {
  for (double g : {0.25, 0.5, 0.8}) {
    const auto x = SynthCombined(2000.0, 90.0, g, 1.0, kFs, 1.0).mono();
    const double p0 = std::pow(ToneAmplitude(x, 2000.0, kFs), 2);
    const double pl = std::pow(ToneAmplitude(x, 1910.0, kFs), 2);
    const double pu = std::pow(ToneAmplitude(x, 2090.0, kFs), 2);
    EXPECT_NEAR(pl / p0, g * g, 1e-6);
    EXPECT_NEAR(pu / p0, g * g, 1e-6);
  }
}

TEST(CombinedTest, ZeroGainMatchesPureTone) {
  const auto c = SynthCombined(1000.0, 90.0, 0.0, 0.5, kFs, 0.7).mono();
  const auto p = SynthPureTone(1000.0, 0.5, kFs, 0.7).mono();
  EXPECT_TRUE((c == p).all());
}

TEST(CombinedTest, RejectsOffsetAtOrAboveFrequency) {
  EXPECT_EQ(ThrownCode([] { SynthCombined(90, 90, 0.5, 1, kFs, 1); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { SynthCombined(50, 90, 0.5, 1, kFs, 1); }),
            errc::kInvalidArgument);
}

TEST(DoubleBeepTest, DefaultPattern) {
  const auto p = DefaultDoubleBeepPattern();
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[0].duration_ms, 240.0);
  EXPECT_EQ(p[0].freq_hz, 1800.0);
  EXPECT_EQ(p[1].duration_ms, 10.0);
  EXPECT_FALSE(p[1].freq_hz.has_value());
  EXPECT_EQ(p[2].duration_ms, 240.0);
  EXPECT_EQ(p[2].freq_hz, 1900.0);
  EXPECT_EQ(p[3].duration_ms, 1000.0);
  EXPECT_FALSE(p[3].freq_hz.has_value());
}

TEST(DoubleBeepTest, BeepTimingAndFrequencies) {
  const auto x =
      SynthDoubleBeep(DefaultDoubleBeepPattern(), 8, 14.4, kFs, 1.0).mono();
  ASSERT_EQ(x.size(), 691200);
  // Beep 1 in [0, 0.24), pause, beep 2 in [0.25, 0.49), silence to 1.49.
  EXPECT_GT(Rms(x, At(0.01), At(0.22)), 0.7);
  EXPECT_EQ(x.segment(At(0.2401), At(0.0098)).abs().maxCoeff(), 0.0);
  EXPECT_GT(Rms(x, At(0.26), At(0.22)), 0.7);
  EXPECT_EQ(x.segment(At(0.4901), At(0.9998)).abs().maxCoeff(), 0.0);

  const Eigen::ArrayXd b1 = x.segment(At(0.01), At(0.22));
  const Eigen::ArrayXd b2 = x.segment(At(0.26), At(0.22));
  EXPECT_NEAR(testing::PeakFrequency(b1, kFs, 1700, 2000, 1.0), 1800.0, 5.0);
  EXPECT_NEAR(testing::PeakFrequency(b2, kFs, 1700, 2000, 1.0), 1900.0, 5.0);
}

TEST(DoubleBeepTest, PatternContinuesCyclically) {
  const auto x =
      SynthDoubleBeep(DefaultDoubleBeepPattern(), 8, 14.4, kFs, 1.0).mono();
  // Ninth cycle starts at 8 * 1.49 = 11.92 s.
  EXPECT_GT(Rms(x, At(11.93), At(0.2)), 0.7);
  // Tenth cycle starts at 13.41 s.
  EXPECT_GT(Rms(x, At(13.42), At(0.2)), 0.7);
}

TEST(DoubleBeepTest, SingleRepetitionThenSilence) {
  const double cycle = 1.49;
  const auto x =
      SynthDoubleBeep(DefaultDoubleBeepPattern(), 1, cycle, kFs, 1.0).mono();
  EXPECT_EQ(x.size(), At(cycle));
  EXPECT_GT(Rms(x, At(0.01), At(0.22)), 0.7);
  EXPECT_GT(Rms(x, At(0.26), At(0.22)), 0.7);
  EXPECT_EQ(x.tail(At(0.999)).abs().maxCoeff(), 0.0);
}

TEST(DoubleBeepTest, Validation) {
  EXPECT_EQ(ThrownCode([] { SynthDoubleBeep({}, 1, 1.0, kFs, 1.0); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] {
              SynthDoubleBeep(DefaultDoubleBeepPattern(), 8, 10.0, kFs, 1.0);
            }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] {
              SynthDoubleBeep({{100.0, 30000.0}}, 1, 1.0, kFs, 1.0);
            }),
            errc::kNyquist);
}

// Power fraction below `cut` from a naive DFT averaged over segments.
double PowerFractionBelow(const Eigen::ArrayXd& x, double cut) {
  const Eigen::Index n = 2048;
  double below = 0.0, total = 0.0;
  for (Eigen::Index start = 0; start + n <= x.size(); start += 8 * n) {
    for (Eigen::Index k = 1; k < n / 2; ++k) {
      double re = 0.0, im = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / n);
        const double ph = 2 * std::numbers::pi * k * i / n;
        re += w * x[start + i] * std::cos(ph);
        im -= w * x[start + i] * std::sin(ph);
      }
      const double p = re * re + im * im;
      total += p;
      if (k * kFs / n < cut) below += p;
    }
  }
  return below / total;
}

TEST(NoiseBedTest, DeterministicPerSeed) {
  for (auto kind : {NoiseBedKind::kTyreSurrogate, NoiseBedKind::kBackgroundSurrogate}) {
    const NoiseBedSpec spec{kind, 1234, 0.1};
    const auto a = SynthNoiseBed(spec, 2.0, kFs).mono();
    const auto b = SynthNoiseBed(spec, 2.0, kFs).mono();
    EXPECT_TRUE((a == b).all());
    NoiseBedSpec other = spec;
    other.seed = 1235;
    EXPECT_FALSE((SynthNoiseBed(other, 2.0, kFs).mono() == a).all());
  }
}

TEST(NoiseBedTest, GainIsRms) {
  const auto x = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 9, 0.05}, 2.0, kFs);
  EXPECT_NEAR(Rms(x.mono()), 0.05, 1e-12);
  const auto z = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 9, 0.0}, 1.0, kFs);
  EXPECT_TRUE((z.mono() == 0.0).all());
  EXPECT_EQ(ThrownCode([] {
              SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 9, -1.0}, 1.0, kFs);
            }),
            errc::kInvalidArgument);
}

TEST(NoiseBedTest, PowerMostlyBelow3kHz) {
  for (auto kind : {NoiseBedKind::kTyreSurrogate, NoiseBedKind::kBackgroundSurrogate}) {
    const auto x = SynthNoiseBed({kind, 77, 1.0}, 3.0, kFs).mono();
    EXPECT_GE(PowerFractionBelow(x, 3000.0), 0.9) << ToString(kind);
  }
}

TEST(NoiseBedTest, UncorrelatedBedsAddEnergetically) {
  const double rms60 = 20e-6 * 1000.0;
  const auto a = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 1, rms60}, 5.0, kFs);
  const auto b = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 2, rms60}, 5.0, kFs);
  EXPECT_NEAR(LpEq(a), 60.0, 1e-9);
  const std::vector<CalibratedSignal> in{a, b};
  const std::vector<double> g{1.0, 1.0};
  EXPECT_NEAR(LpEq(Mix(in, g)), 60.0 + 10.0 * std::log10(2.0), 0.3);
}

TEST(NormalizeTest, HitsTargetOnSine) {
  const auto s = SynthPureTone(1000.0, 2.0, kFs, 0.01);
  const auto n = NormalizeToLevel(s, 65.0);
  EXPECT_NEAR(LpAEq(n), 65.0, 0.01);
  EXPECT_NEAR(LpEq(n), 65.0, 0.02);
}

TEST(NormalizeTest, FixedPointAndIdempotence) {
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 4, 0.3}, 2.0, kFs);
  const auto once = NormalizeToLevel(bed, 65.0);
  EXPECT_NEAR(LevelNormalizationGain(once, 65.0), 1.0, 1e-6);
  const auto twice = NormalizeToLevel(once, 65.0);
  EXPECT_LT((twice.mono() - once.mono()).abs().maxCoeff(),
            1e-6 * once.peak());
}

TEST(NormalizeTest, PreservesShape) {
  const auto s =
      SynthIntermittent(700.0, 200.0, 300.0, 1.0, kFs, 0.2);
  const auto n = NormalizeToLevel(s, 70.0);
  const double g = LevelNormalizationGain(s, 70.0);
  EXPECT_LT((n.mono() - s.mono() * g).abs().maxCoeff(), 1e-15 * n.peak() + 1e-18);
}

TEST(NormalizeTest, RejectsSilence) {
  const auto z = CalibratedSignal::Zeros(kFs, 4800);
  EXPECT_EQ(ThrownCode([&] { NormalizeToLevel(z, 65.0); }), errc::kSilence);
}

TEST(EdgeRampTest, ZeroAtEdgesUnityInside) {
  const auto s = CalibratedSignal::Mono(kFs, Eigen::ArrayXd::Ones(4800));
  const auto r = ApplyEdgeRamps(s).mono();
  EXPECT_NEAR(r[0], 0.0, 1e-12);
  EXPECT_NEAR(r[r.size() - 1], 0.0, 1e-3);
  EXPECT_TRUE((r.segment(At(0.006), 4800 - 2 * At(0.006)) == 1.0).all());
}

TEST(BuiltinTableTest, CoversAllStimuli) {
  const auto table = BuiltinStimulusTable();
  ASSERT_EQ(table.size(), 15u);
  std::set<int> ids;
  for (const auto& s : table) ids.insert(s.id);
  EXPECT_EQ(ids.size(), 15u);
  EXPECT_EQ(*ids.begin(), 1);
  EXPECT_EQ(*ids.rbegin(), 15);
  const double freqs[] = {350, 500, 1000, 2000};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(table[i].kind, StimulusKind::kPure);
    EXPECT_EQ(table[4 + i].kind, StimulusKind::kIntermittent);
    EXPECT_EQ(table[4 + i].on_ms, 500.0);
    EXPECT_EQ(table[4 + i].off_ms, 500.0);
    EXPECT_EQ(table[4 + i].repetitions, 13);
    EXPECT_EQ(table[8 + i].kind, StimulusKind::kCombined);
    EXPECT_EQ(table[8 + i].secondary_offset, 90.0);
    for (int g = 0; g < 3; ++g) EXPECT_EQ(table[4 * g + i].principal_freq, freqs[i]);
  }
  EXPECT_EQ(table[12].kind, StimulusKind::kDoubleBeep);
  EXPECT_EQ(table[12].repetitions, 8);
  EXPECT_EQ(table[13].kind, StimulusKind::kFileBed);
  EXPECT_EQ(table[14].kind, StimulusKind::kFileBed);
  EXPECT_FALSE(table[14].normalize);
  for (int i = 0; i < 14; ++i) EXPECT_TRUE(table[i].normalize);
}

TEST(KindNamesTest, RoundTrip) {
  for (auto k : {StimulusKind::kPure, StimulusKind::kIntermittent,
                 StimulusKind::kCombined, StimulusKind::kDoubleBeep,
                 StimulusKind::kFileBed}) {
    EXPECT_EQ(StimulusKindFromString(ToString(k)), k);
  }
  for (auto k : {NoiseBedKind::kTyreSurrogate, NoiseBedKind::kBackgroundSurrogate}) {
    EXPECT_EQ(NoiseBedKindFromString(ToString(k)), k);
  }
  EXPECT_EQ(ThrownCode([] { StimulusKindFromString("chirp"); }),
            errc::kValidation);
}

TEST(SynthesizeSourceTest, DispatchAndNyquist) {
  auto table = BuiltinStimulusTable();
  const auto pure = SynthesizeSource(table[2], 0.5, kFs, 1.0).mono();
  EXPECT_TRUE((pure == SynthPureTone(1000.0, 0.5, kFs, 1.0).mono()).all());
  StimulusSpec bad = table[0];
  bad.principal_freq = 25000.0;
  EXPECT_EQ(ThrownCode([&] { SynthesizeSource(bad, 1.0, kFs, 1.0); }),
            errc::kNyquist);
  // Tyre-only has no source of its own.
  const auto tyre = SynthesizeSource(table[14], 0.5, kFs, 1.0);
  EXPECT_EQ(tyre.peak(), 0.0);
  // Diesel placeholder is a noise surrogate with the requested RMS.
  const auto diesel = SynthesizeSource(table[13], 1.0, kFs, std::sqrt(2.0));
  EXPECT_NEAR(Rms(diesel.mono()), 1.0, 1e-12);
}

TEST(SynthesizeSourceTest, FileBedLoopsAndScales) {
  Eigen::ArrayXd bed(100);
  for (int i = 0; i < 100; ++i) bed[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const auto file = CalibratedSignal::Mono(kFs, bed);
  StimulusSpec spec;
  spec.kind = StimulusKind::kFileBed;
  const auto x = SynthesizeSource(spec, 0.01, kFs, 0.5 * std::sqrt(2.0), &file)
                     .mono();
  ASSERT_EQ(x.size(), 480);
  EXPECT_NEAR(Rms(x), 0.5, 1e-12);
  EXPECT_EQ(x[0], x[100]);
  const auto silent = CalibratedSignal::Zeros(kFs, 10);
  EXPECT_EQ(ThrownCode([&] { SynthesizeSource(spec, 0.01, kFs, 1.0, &silent); }),
            errc::kSilence);
}

TEST(SynthDeterminismTest, BitIdentical) {
  for (const auto& spec : BuiltinStimulusTable()) {
    const double d = 14.4;  // long enough for every beep pattern
    const auto a = SynthesizeSource(spec, d, kFs, 1.0).mono();
    const auto b = SynthesizeSource(spec, d, kFs, 1.0).mono();
    EXPECT_TRUE((a == b).all()) << spec.id;
  }
}

}  // namespace
}  // namespace evsound
