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

#include "evsound/levels.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "evsound/dsp.h"
#include "evsound/propagation.h"
#include "evsound/synth.h"
#include "test_util.h"

namespace evsound {
namespace {

using testing::AmplitudeForDb;
using testing::ThrownCode;

constexpr double kFs = 48000.0;

// IEC 61672-1 A-weighting at the nominal one-third-octave frequencies.
const std::map<double, double>& IecATable() {
  static const std::map<double, double> t = {
      {50, -30.2}, {63, -26.2}, {80, -22.5}, {100, -19.1}, {125, -16.1},
      {160, -13.4}, {200, -10.9}, {250, -8.6}, {315, -6.6}, {400, -4.8},
      {500, -3.2}, {630, -1.9}, {800, -0.8}, {1000, 0.0}, {1250, 0.6},
      {1600, 1.0}, {2000, 1.2}, {2500, 1.3}, {3150, 1.2}, {4000, 1.0},
      {5000, 0.5}, {6300, -0.1}, {8000, -1.1}, {10000, -2.5}};
  return t;
}

double MeasuredAGain(double f) {
  const auto s = SynthPureTone(f, 1.0, kFs, 1.0);
  const Eigen::ArrayXd y = AWeight(s).mono();
  const Eigen::ArrayXd mid = y.segment(12000, 24000);
  return 20.0 * std::log10(testing::ToneAmplitude(mid, f, kFs));
}

TEST(AWeightTest, ZeroAtOneKilohertz) {
  EXPECT_NEAR(AWeightingDb(1000.0), 0.0, 1e-12);
  EXPECT_NEAR(MeasuredAGain(1000.0), 0.0, 0.05);
}

TEST(AWeightTest, MatchesIecTableAtBandCenters) {
  for (const auto& [f, db] : IecATable()) {
    EXPECT_NEAR(MeasuredAGain(f), db, 0.3) << f << " Hz";
    // The tabulated values belong to the exact base-ten band frequencies.
    const double exact = 1000.0 * std::pow(10.0, std::round(10.0 * std::log10(f / 1000.0)) / 10.0);
    EXPECT_NEAR(AWeightingDb(exact), db, 0.05) << f << " Hz";
  }
  EXPECT_NEAR(MeasuredAGain(100.0), -19.1, 0.3);
  EXPECT_NEAR(MeasuredAGain(10000.0), -2.5, 0.3);
}

TEST(AWeightPropertyTest, LinearTimeInvariant) {
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 2, 0.1}, 1.0, kFs);
  const Eigen::ArrayXd a = AWeight(bed).mono();
  const Eigen::ArrayXd b = AWeight(bed.scaled(-3.5)).mono();
  EXPECT_LT((b + 3.5 * a).abs().maxCoeff(), 1e-12);
}

TEST(LpEqTest, CalibrationAndScaling) {
  const auto s = SynthPureTone(1000.0, 1.0, kFs, std::sqrt(2.0) * 0.02);
  EXPECT_NEAR(LpEq(s), 60.0, 0.01);
  EXPECT_NEAR(LpEq(s.scaled(2.0)) - LpEq(s), 6.02, 0.01);
  EXPECT_NEAR(LpAEq(s), 60.0, 0.05);
}

TEST(LpEqTest, SilenceAndEmpty) {
  EXPECT_EQ(ThrownCode([] { LpEq(CalibratedSignal::Zeros(kFs, 100)); }),
            errc::kSilence);
  EXPECT_EQ(ThrownCode([] { LpEq(CalibratedSignal::Zeros(kFs, 0)); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { LpMax(CalibratedSignal::Zeros(kFs, 100)); }),
            errc::kSilence);
}

TEST(LpEqPropertyTest, UncorrelatedSumAddsThreeDb) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = SynthNoiseBed({NoiseBedKind::kBackgroundSurrogate, seed, 0.1},
                                 4.0, kFs);
    const auto b = SynthNoiseBed(
        {NoiseBedKind::kBackgroundSurrogate, seed + 100, 0.1}, 4.0, kFs);
    const CalibratedSignal in[] = {a, b};
    const double g[] = {1.0, 1.0};
    EXPECT_NEAR(LpEq(Mix(in, g)) - LpEq(a), 3.01, 0.3);
  }
}

TEST(LpMaxTest, StationarySine) {
  const auto s = SynthPureTone(1000.0, 6.0, kFs, AmplitudeForDb(60.0));
  EXPECT_NEAR(LpMax(s, TimeWeighting::kFast), 60.0, 0.1);
  EXPECT_NEAR(LpMax(s, TimeWeighting::kSlow), 60.0, 0.1);
  EXPECT_EQ(TimeConstant(TimeWeighting::kFast), 0.125);
  EXPECT_EQ(TimeConstant(TimeWeighting::kSlow), 1.0);
}

TEST(LpMaxTest, ExponentialRiseOfToneBurst) {
  // A 125 ms burst reaches 1 - e^-1 of its power under fast weighting.
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(48000);
  x.head(6000) = testing::Sine(1000.0, AmplitudeForDb(80.0), kFs, 6000);
  const auto s = CalibratedSignal::Mono(kFs, x);
  EXPECT_NEAR(LpMax(s, TimeWeighting::kFast),
              80.0 + 10.0 * std::log10(1.0 - std::exp(-1.0)), 0.05);
}

// Holds for signals that are stationary over many time constants: here a
// steady bed plus a 0.5 s periodic burst, over a whole number of periods.
TEST(LpMaxPropertyTest, MaxNotBelowEq) {
  dsp::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, rng.NextU64(),
                                    0.01 + rng.Uniform()},
                                   10.0 + 0.5 * static_cast<double>(rng.Below(5)), kFs);
    const auto burst =
        SynthIntermittent(200.0 + 1000.0 * rng.Uniform(), 100.0, 400.0,
                          bed.duration(), kFs, rng.Uniform());
    const CalibratedSignal in[] = {bed, burst};
    const double g[] = {1.0, 1.0};
    const auto s = Mix(in, g);
    for (auto w : {TimeWeighting::kFast, TimeWeighting::kSlow}) {
      EXPECT_GE(LpMax(s, w), LpEq(s) - 1e-9);
    }
  }
}

// Retarded time by bisection, independent of the library solver.
double RetardedTime(double t, const Trajectory& tr) {
  double lo = t - 1.0, hi = t;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid + std::hypot(tr.x_start + tr.v_x * mid, tr.y_s) / tr.c - t;
    (f < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// The fast-weighted maximum of a passing point source exceeds its
// equivalent level by the peak-to-mean ratio of the smoothed 1/r^2 envelope.
TEST(LpMaxTest, PassbyExcessFollowsGeometry) {
  const Trajectory tr;
  const auto src = SynthPureTone(1000.0, tr.Duration() + 0.1, kFs, 1.0);
  const auto y = RenderPassby(src, tr);
  const double measured = LpMax(AWeight(y)) - LpAEq(y);

  const double dt = 1.0 / kFs;
  const double alpha = std::exp(-dt / 0.125);
  double state = 0.0, peak = 0.0, sum = 0.0;
  const auto n = y.frames();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double tau = RetardedTime(i * dt, tr);
    const double r = std::hypot(tr.x_start + tr.v_x * tau, tr.y_s);
    const double p = tau < 0.0 ? 0.0 : 0.5 / (r * r);
    state = alpha * state + (1.0 - alpha) * p;
    peak = std::max(peak, state);
    sum += p;
  }
  const double predicted = 10.0 * std::log10(peak / (sum / n));
  EXPECT_NEAR(measured, predicted, 0.2);
}

TEST(ThirdOctaveTest, CentersAndNominals) {
  const auto fc = ThirdOctaveCenters();
  const auto nom = NominalThirdOctaveCenters();
  EXPECT_NEAR(fc[13], 1000.0, 1e-9);
  for (int i = 0; i < kThirdOctaveBands; ++i) {
    EXPECT_NEAR(fc[i] / nom[i], 1.0, 0.02) << i;
  }
}

TEST(ThirdOctaveTest, SineLandsInItsBand) {
  const auto s = SynthPureTone(1000.0, 2.0, kFs, AmplitudeForDb(70.0));
  const auto frames = ThirdOctaveFrames(s, 0.5);
  ASSERT_EQ(frames.size(), 4u);
  for (std::size_t j = 0; j < frames.size(); ++j) {
    EXPECT_NEAR(frames[j].time, 0.25 + 0.5 * j, 1e-12);
    EXPECT_NEAR(frames[j].band_levels[13], 70.0, 0.5);
    EXPECT_LE(frames[j].band_levels[12], 40.0);
    EXPECT_LE(frames[j].band_levels[14], 40.0);
  }
}

TEST(ThirdOctaveTest, WhiteNoiseRisesOneDbPerBand) {
  dsp::Rng rng(13);
  Eigen::ArrayXd x(static_cast<Eigen::Index>(20 * kFs));
  for (auto& v : x) v = 0.1 * rng.Gaussian();
  const auto frames = ThirdOctaveFrames(CalibratedSignal::Mono(kFs, x), 0.5);
  std::array<double, kThirdOctaveBands> mean{};
  for (const auto& f : frames) {
    for (int b = 0; b < kThirdOctaveBands; ++b)
      mean[b] += std::pow(10.0, f.band_levels[b] / 10.0) / frames.size();
  }
  // Average step over the mid bands, where bin quantization is negligible.
  const double step =
      (10.0 * std::log10(mean[23]) - 10.0 * std::log10(mean[8])) / 15.0;
  EXPECT_NEAR(step, 10.0 * std::log10(std::pow(2.0, 1.0 / 3.0)), 0.05);
  for (int b = 9; b < kThirdOctaveBands; ++b) {
    EXPECT_NEAR(10.0 * std::log10(mean[b] / mean[b - 1]), 1.0, 0.6) << b;
  }
}

TEST(ThirdOctaveTest, SilenceAtFloor) {
  const auto frames = ThirdOctaveFrames(CalibratedSignal::Zeros(kFs, 48000), 0.5);
  for (const auto& f : frames)
    for (double v : f.band_levels) EXPECT_EQ(v, kFloorDb);
}

TEST(ThirdOctaveTest, Errors) {
  EXPECT_EQ(ThrownCode([] { ThirdOctaveFrames(CalibratedSignal::Zeros(kFs, 100), 0.5); }),
            errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] {
              ThirdOctaveFrames(CalibratedSignal::Zeros(16000.0, 16000), 0.5);
            }),
            errc::kNyquist);
}

TEST(SpectrogramTest, StationarySineIsOneRidge) {
  const auto s = SynthPureTone(1000.0, 2.0, kFs, 1.0);
  const auto sp = ComputeSpectrogram(s);
  const double df = kFs / 4096.0;
  ASSERT_EQ(sp.psd_db.rows(), 2049);
  EXPECT_EQ(sp.times.size(), static_cast<std::size_t>(sp.psd_db.cols()));
  // Hop is a quarter window.
  EXPECT_NEAR(sp.times[1] - sp.times[0], 1024.0 / kFs, 1e-12);
  for (Eigen::Index j = 0; j < sp.psd_db.cols(); ++j) {
    Eigen::Index k;
    sp.psd_db.col(j).maxCoeff(&k);
    EXPECT_LE(std::abs(sp.frequencies[k] - 1000.0), df);
  }
}

TEST(SpectrogramTest, PsdIntegratesToMeanSquare) {
  const auto bed = SynthNoiseBed({NoiseBedKind::kTyreSurrogate, 8, 0.2}, 3.0, kFs);
  const auto sp = ComputeSpectrogram(bed);
  const double df = kFs / 4096.0;
  double ms = 0.0;
  for (Eigen::Index j = 0; j < sp.psd_db.cols(); ++j) {
    for (Eigen::Index k = 0; k < sp.psd_db.rows(); ++k)
      ms += std::pow(10.0, sp.psd_db(k, j) / 10.0) * 4e-10 * df;
  }
  ms /= static_cast<double>(sp.psd_db.cols());
  EXPECT_NEAR(10.0 * std::log10(ms / 0.04), 0.0, 0.3);
}

TEST(SpectrogramTest, SilenceIsUniformFloor) {
  const auto sp = ComputeSpectrogram(CalibratedSignal::Zeros(kFs, 10000));
  EXPECT_TRUE((sp.psd_db == kFloorDb).all());
}

TEST(SpectrogramTest, Errors) {
  const auto s = CalibratedSignal::Zeros(kFs, 1000);
  EXPECT_EQ(ThrownCode([&] { ComputeSpectrogram(s); }), errc::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { ComputeSpectrogram(s, 256, 1.0); }),
            errc::kInvalidArgument);
}

}  // namespace
}  // namespace evsound
