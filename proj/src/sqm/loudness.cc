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

#include "evsound/sqm/loudness.h"

#include <algorithm>
#include <cmath>

#include "evsound/dsp.h"
#include "evsound/error.h"

namespace evsound {
namespace {

constexpr int kCoreBands = 21;
using CoreLoudness = std::array<double, kCoreBands>;

// One-third-octave filter bank at 48 kHz: three second-order sections per
// band. Numerators are fixed ([1 2 1], [1 0 -1], [1 -2 1]); the denominators
// are [1, -2 - d1, 1 - d2] with the (d1, d2) listed here.
struct BandFilter {
  double gain;
  double d[3][2];
};

// clang-format off
constexpr BandFilter kBandFilters[kLoudnessBands] = {
    {4.30764e-11, {{-0.00067026, 0.000659453}, {-0.000375071, 0.000361926}, {-0.000306523, 0.000297634}}},
    {8.5934e-11, {{-0.000847258, 0.000830131}, {-0.000476448, 0.000455616}, {-0.000388773, 0.000374685}}},
    {1.71424e-10, {{-0.0010721, 0.00104496}, {-0.000606567, 0.000573553}, {-0.000494004, 0.000471677}}},
    {3.41944e-10, {{-0.00135836, 0.00131535}, {-0.000774327, 0.000722007}, {-0.000629154, 0.000593771}}},
    {6.82035e-10, {{-0.0017238, 0.00165564}, {-0.00099178, 0.000908866}, {-0.000803529, 0.000747455}}},
    {1.36026e-09, {{-0.00219188, 0.00208388}, {-0.00127545, 0.00114406}, {-0.00102976, 0.0009409}}},
    {2.71261e-09, {{-0.00279386, 0.00262274}, {-0.00164828, 0.00144006}, {-0.0013252, 0.00118438}}},
    {5.4087e-09, {{-0.00357182, 0.00330071}, {-0.00214252, 0.00181258}, {-0.00171397, 0.00149082}}},
    {1.07826e-08, {{-0.00458305, 0.00415355}, {-0.00280413, 0.00228135}, {-0.00223006, 0.00187646}}},
    {2.1491e-08, {{-0.00590655, 0.00522622}, {-0.00369947, 0.00287118}, {-0.00292205, 0.00236178}}},
    {4.28228e-08, {{-0.00765243, 0.00657493}, {-0.0049254, 0.00361318}, {-0.00386007, 0.0029724}}},
    {8.54316e-08, {{-0.0100023, 0.0082961}, {-0.00663788, 0.00455999}, {-0.00515982, 0.00375306}}},
    {1.70009e-07, {{-0.013123, 0.010422}, {-0.00902274, 0.00573132}, {-0.00694543, 0.00471734}}},
    {3.38215e-07, {{-0.0173693, 0.0130947}, {-0.0124176, 0.00720526}, {-0.00946002, 0.00593145}}},
    {6.7199e-07, {{-0.0231934, 0.0164308}, {-0.0173009, 0.00904761}, {-0.0130358, 0.00744926}}},
    {1.33531e-06, {{-0.0313292, 0.020637}, {-0.0244342, 0.0113731}, {-0.0182108, 0.00936778}}},
    {2.65172e-06, {{-0.0428261, 0.0259325}, {-0.0349619, 0.0143046}, {-0.0257855, 0.0117912}}},
    {5.25477e-06, {{-0.0591733, 0.0325054}, {-0.0506072, 0.0179513}, {-0.0369401, 0.0148094}}},
    {1.0378e-05, {{-0.0826348, 0.0405894}, {-0.0740348, 0.0224476}, {-0.0534977, 0.0185371}}},
    {2.0487e-05, {{-0.117018, 0.0508116}, {-0.109516, 0.0281387}, {-0.0785097, 0.0232872}}},
    {4.05198e-05, {{-0.167714, 0.0637872}, {-0.163378, 0.0353729}, {-0.116419, 0.0293723}}},
    {7.97914e-05, {{-0.242528, 0.0798576}, {-0.245161, 0.044337}, {-0.173972, 0.0370015}}},
    {0.000156511, {{-0.353142, 0.099633}, {-0.369163, 0.0553535}, {-0.261399, 0.0465428}}},
    {0.000304954, {{-0.516316, 0.124177}, {-0.555473, 0.0689403}, {-0.393998, 0.0586715}}},
    {0.000599157, {{-0.756635, 0.155023}, {-0.834281, 0.0858123}, {-0.594547, 0.074396}}},
    {0.00116544, {{-1.10165, 0.191713}, {-1.23939, 0.105243}, {-0.891666, 0.0940354}}},
    {0.00227488, {{-1.58477, 0.239049}, {-1.80505, 0.128794}, {-1.325, 0.121333}}},
    {0.00391006, {{-2.5063, 0.142308}, {-2.19464, 0.27647}, {-1.90231, 0.147304}}},
};
// clang-format on

constexpr double kNumerators[3][3] = {{1, 2, 1}, {1, 0, -1}, {1, -2, 1}};

// Low-frequency level ranges and the equal-loudness reductions applied
// within them to the first eleven bands (25 ... 250 Hz).
constexpr double kRap[8] = {45, 55, 65, 71, 80, 90, 100, 120};
constexpr double kDll[8][11] = {
    {-32, -24, -16, -10, -5, 0, -7, -3, 0, -2, 0},
    {-29, -22, -15, -10, -4, 0, -7, -2, 0, -2, 0},
    {-27, -19, -14, -9, -4, 0, -6, -2, 0, -2, 0},
    {-25, -17, -12, -9, -3, 0, -5, -2, 0, -2, 0},
    {-23, -16, -11, -7, -3, 0, -4, -1, 0, -1, 0},
    {-20, -14, -10, -6, -3, 0, -4, -1, 0, -1, 0},
    {-18, -12, -9, -6, -2, 0, -3, -1, 0, -1, 0},
    {-15, -10, -8, -4, -2, 0, -3, -1, 0, -1, 0},
};
// Critical-band threshold in quiet, ear transmission and band-width
// adaptation per approximated critical band.
constexpr double kLtq[20] = {30, 18, 12, 8, 7, 6, 5, 4, 3, 3,
                             3,  3,  3,  3, 3, 3, 3, 3, 3, 3};
constexpr double kA0[20] = {0,    0,    0,    0,    0,  0,    0,
                            0,    0,    0,    -0.5, -1.6, -3.2, -5.4,
                            -5.6, -4,   -1.5, 2,    5,    12};
constexpr double kDcb[20] = {-0.25, -0.6, -0.8, -0.8, -0.5, 0,   0.5,
                             1.1,   1.5,  1.7,  1.8,  1.8,  1.7, 1.6,
                             1.4,   1.2,  0.8,  0.5,  0,    -0.5};

constexpr double kZup[kCoreBands] = {0.9,  1.8,  2.8,  3.5,  4.4,  5.4,  6.6,
                                     7.9,  9.2,  10.6, 12.3, 13.8, 15.2, 16.7,
                                     18.1, 19.3, 20.6, 21.8, 22.7, 23.6, 24.0};
constexpr double kRns[18] = {21.5, 18,   15.1, 11.5, 9,    6.1,
                             4.4,  3.1,  2.13, 1.36, 0.82, 0.42,
                             0.30, 0.22, 0.15, 0.10, 0.035, 0};
// Upper-slope steepness per loudness range (rows) and band group (columns).
constexpr double kUsl[18][8] = {
    {13, 8.2, 6.3, 5.5, 5.5, 5.5, 5.5, 5.5},
    {9, 7.5, 6, 5.1, 4.5, 4.5, 4.5, 4.5},
    {7.8, 6.7, 5.6, 4.9, 4.4, 3.9, 3.9, 3.9},
    {6.2, 5.4, 4.6, 4.0, 3.5, 3.2, 3.2, 3.2},
    {4.5, 3.8, 3.6, 3.2, 2.9, 2.7, 2.7, 2.7},
    {3.7, 3.0, 2.8, 2.35, 2.2, 2.2, 2.2, 2.2},
    {2.9, 2.3, 2.1, 1.9, 1.8, 1.7, 1.7, 1.7},
    {2.4, 1.7, 1.5, 1.35, 1.3, 1.3, 1.3, 1.3},
    {1.95, 1.45, 1.3, 1.15, 1.1, 1.1, 1.1, 1.1},
    {1.5, 1.2, 0.94, 0.86, 0.82, 0.82, 0.82, 0.82},
    {0.72, 0.67, 0.64, 0.63, 0.62, 0.62, 0.62, 0.62},
    {0.59, 0.53, 0.51, 0.50, 0.42, 0.42, 0.42, 0.42},
    {0.40, 0.33, 0.26, 0.24, 0.24, 0.22, 0.22, 0.22},
    {0.27, 0.21, 0.20, 0.18, 0.17, 0.17, 0.17, 0.17},
    {0.16, 0.15, 0.14, 0.12, 0.11, 0.11, 0.11, 0.11},
    {0.12, 0.11, 0.10, 0.08, 0.08, 0.08, 0.08, 0.08},
    {0.09, 0.08, 0.07, 0.06, 0.06, 0.06, 0.06, 0.05},
    {0.06, 0.05, 0.03, 0.02, 0.02, 0.02, 0.02, 0.02},
};

constexpr int kDecimation = 24;   // 48 kHz -> 2 kHz
constexpr int kInnerSteps = 24;   // virtual upsampling in the decay stages
constexpr double kInnerRate = 2000.0;

CoreLoudness CoreFromLevels(const double* levels) {
  // Equal-loudness correction and grouping of the bands below 315 Hz into
  // the first three critical bands.
  double gi[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < 11; ++i) {
    int j = 0;
    while (j < 7 && levels[i] > kRap[j] - kDll[j][i]) ++j;
    const double ti = std::pow(10.0, (levels[i] + kDll[j][i]) / 10.0);
    gi[i < 6 ? 0 : (i < 9 ? 1 : 2)] += ti;
  }
  double le[20];
  for (int k = 0; k < 3; ++k) le[k] = gi[k] > 0.0 ? 10.0 * std::log10(gi[k]) : 0.0;
  for (int k = 3; k < 20; ++k) le[k] = levels[k + 8];

  CoreLoudness nm{};
  for (int k = 0; k < 20; ++k) {
    double l = le[k] - kA0[k];
    if (l <= kLtq[k]) continue;
    l -= kDcb[k];
    const double v =
        0.0635 * std::pow(10.0, 0.025 * kLtq[k]) *
        (std::pow(0.75 + 0.25 * std::pow(10.0, 0.1 * (l - kLtq[k])), 0.25) - 1.0);
    nm[k] = std::max(v, 0.0);
  }
  // Threshold dependence within the lowest critical band.
  const double korry = 0.4 + 0.32 * std::pow(nm[0], 0.2);
  if (korry <= 1.0) nm[0] *= korry;
  return nm;
}

// Spreads the core loudness into the specific-loudness pattern with the
// level-dependent upper slopes and returns the total loudness. `ns` may be
// null.
double Slopes(const CoreLoudness& nm, double* ns) {
  double total = 0.0, z1 = 0.0, n1 = 0.0, z2 = 0.0, n2 = 0.0;
  int iz = 0;  // next specific-loudness bin; bin iz sits at 0.1 * (iz + 1)
  int j = 0;
  auto fill = [&](double upto, auto value) {
    while (iz < kSpecificBins && 0.1 * (iz + 1) <= upto) {
      if (ns != nullptr) ns[iz] = std::max(0.0, value(0.1 * (iz + 1)));
      ++iz;
    }
  };
  for (int i = 0; i < kCoreBands; ++i) {
    const double zup = kZup[i] + 0.0001;
    const int ig = std::clamp(i - 1, 0, 7);
    do {
      if (n1 > nm[i]) {
        n2 = std::max(kRns[j], nm[i]);
        double dz = (n1 - n2) / kUsl[j][ig];
        z2 = z1 + dz;
        if (z2 > zup) {
          z2 = zup;
          dz = z2 - z1;
          n2 = n1 - dz * kUsl[j][ig];
        }
        total += dz * (n1 + n2) / 2.0;
        const double slope = kUsl[j][ig], n_start = n1, z_start = z1;
        fill(z2, [&](double z) { return n_start - (z - z_start) * slope; });
        if (n2 <= kRns[j]) j = std::min(j + 1, 17);
      } else {
        if (n1 < nm[i]) {
          j = 0;
          while (j < 17 && kRns[j] >= nm[i]) ++j;
        }
        z2 = zup;
        n2 = nm[i];
        total += n2 * (z2 - z1);
        const double level = n2;
        fill(z2, [&](double) { return level; });
      }
      n1 = n2;
      z1 = z2;
    } while (z1 < zup);
  }
  if (ns != nullptr) {
    for (; iz < kSpecificBins; ++iz) ns[iz] = 0.0;
  }
  total = std::max(total, 0.0);
  return total <= 16.0 ? std::floor(total * 1000.0 + 0.5) / 1000.0
                       : std::floor(total * 100.0 + 0.5) / 100.0;
}

// Two-capacitor model of the asymmetric temporal decay of each band.
class NonlinearDecay {
 public:
  NonlinearDecay() {
    constexpr double t_short = 0.005, t_long = 0.015, t_var = 0.075;
    const double dt = 1.0 / (kInnerRate * kInnerSteps);
    const double p = (t_var + t_long) / (t_var * t_short);
    const double q = 1.0 / (t_short * t_var);
    const double l1 = -p / 2.0 + std::sqrt(p * p / 4.0 - q);
    const double l2 = -p / 2.0 - std::sqrt(p * p / 4.0 - q);
    const double den = t_var * (l1 - l2);
    const double e1 = std::exp(l1 * dt), e2 = std::exp(l2 * dt);
    b_[0] = (e1 - e2) / den;
    b_[1] = ((t_var * l2 + 1.0) * e1 - (t_var * l1 + 1.0) * e2) / den;
    b_[2] = ((t_var * l1 + 1.0) * e1 - (t_var * l2 + 1.0) * e2) / den;
    b_[3] = (t_var * l1 + 1.0) * (t_var * l2 + 1.0) * (e1 - e2) / den;
    b_[4] = std::exp(-dt / t_long);
    b_[5] = std::exp(-dt / t_var);
  }

  double Step(double ui) {
    double uo;
    if (ui < uo_last_) {
      double u2;
      if (uo_last_ > u2_last_) {
        uo = uo_last_ * b_[2] - u2_last_ * b_[3];
        u2 = uo_last_ * b_[0] - u2_last_ * b_[1];
      } else {
        uo = uo_last_ * b_[4];
        u2 = uo;
      }
      if (ui > uo) uo = ui;
      u2_last_ = std::min(u2, uo);
    } else {
      uo = ui;
      if (!(std::abs(ui - uo_last_) < 1e-5 && uo <= u2_last_)) {
        u2_last_ = (u2_last_ - ui) * b_[5] + ui;
      }
    }
    uo_last_ = uo;
    return uo;
  }

 private:
  double b_[6];
  double uo_last_ = 0.0;
  double u2_last_ = 0.0;
};

// First-order low-pass run on a linearly interpolated, kInnerSteps times
// denser version of x; returns the output at the original instants.
std::vector<double> InterpolatedLowpass(const std::vector<double>& x,
                                        double tau) {
  const double a1 = std::exp(-1.0 / (kInnerRate * kInnerSteps * tau));
  const double b0 = 1.0 - a1;
  std::vector<double> y(x.size());
  double state = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double next = k + 1 < x.size() ? x[k + 1] : 0.0;
    const double delta = (next - x[k]) / kInnerSteps;
    for (int s = 0; s < kInnerSteps; ++s) {
      state = b0 * (x[k] + s * delta) + a1 * state;
      if (s == 0) y[k] = state;
    }
  }
  return y;
}

}  // namespace

std::array<double, kLoudnessBands> LoudnessBandCenters() {
  std::array<double, kLoudnessBands> fc{};
  for (int i = 0; i < kLoudnessBands; ++i) {
    fc[static_cast<std::size_t>(i)] = 1000.0 * std::pow(10.0, (i - 16) / 10.0);
  }
  return fc;
}

Eigen::ArrayXd SpecificLoudnessBarkAxis() {
  return Eigen::ArrayXd::LinSpaced(kSpecificBins, 0.1, 24.0);
}

SpecificLoudness LoudnessFromThirdOctave(const LoudnessBandLevels& levels) {
  SpecificLoudness out;
  out.values.resize(kSpecificBins);
  const CoreLoudness nm = CoreFromLevels(levels.data());
  out.total = Slopes(nm, out.values.data());
  return out;
}

LoudnessResult LoudnessTv(const CalibratedSignal& signal) {
  RequireMono(signal, "loudness");
  if (!signal.calibrated()) {
    throw Error(errc::kUncalibrated, "loudness needs a calibrated signal");
  }
  Eigen::ArrayXd x = signal.mono();
  if (signal.sample_rate() != kLoudnessRate) {
    x = dsp::Resample(x, signal.sample_rate(), kLoudnessRate);
  }
  if (x.size() < kDecimation * 4) {
    throw Error(errc::kInvalidArgument, "signal too short for loudness");
  }
  const Eigen::Index n = x.size();
  const std::size_t frames = static_cast<std::size_t>((n + kDecimation - 1) / kDecimation);

  // Band levels at 2 kHz, one row of kLoudnessBands per instant.
  std::vector<double> levels(frames * kLoudnessBands);
  const auto fc = LoudnessBandCenters();
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int band = 0; band < kLoudnessBands; ++band) {
    const BandFilter& f = kBandFilters[band];
    for (Eigen::Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x[i];
    for (int s = 0; s < 3; ++s) {
      const double b0 = kNumerators[s][0], b1 = kNumerators[s][1],
                   b2 = kNumerators[s][2];
      const double a1 = -2.0 - f.d[s][0], a2 = 1.0 - f.d[s][1];
      double z1 = 0.0, z2 = 0.0;
      for (double& v : y) {
        const double in = v;
        const double out = b0 * in + z1;
        z1 = b1 * in - a1 * out + z2;
        z2 = b2 * in - a2 * out;
        v = out;
      }
    }
    const double tau =
        fc[static_cast<std::size_t>(band)] <= 1000.0
            ? 2.0 / (3.0 * fc[static_cast<std::size_t>(band)])
            : 2.0 / 3000.0;
    const double a = std::exp(-1.0 / (kLoudnessRate * tau));
    const double g = 1.0 - a;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double v = f.gain * y[i];
      s1 = g * v * v + a * s1;
      s2 = g * s1 + a * s2;
      s3 = g * s2 + a * s3;
      if (i % kDecimation == 0) {
        levels[(i / kDecimation) * kLoudnessBands + static_cast<std::size_t>(band)] =
            10.0 * std::log10((s3 + 1e-12) / 4e-10);
      }
    }
  }

  std::vector<CoreLoudness> core(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    core[k] = CoreFromLevels(&levels[k * kLoudnessBands]);
  }
  // Nonlinear decay per core band on the interpolated sequence.
  for (int b = 0; b < kCoreBands; ++b) {
    NonlinearDecay nl;
    for (std::size_t k = 0; k < frames; ++k) {
      const double cur = core[k][b];
      const double next = k + 1 < frames ? core[k + 1][b] : 0.0;
      const double delta = (next - cur) / kInnerSteps;
      double first = 0.0;
      for (int s = 0; s < kInnerSteps; ++s) {
        const double o = nl.Step(cur + s * delta);
        if (s == 0) first = o;
      }
      core[k][b] = first;
    }
  }

  constexpr std::size_t kOutStep = 4;  // 0.5 ms -> 2 ms
  const std::size_t out_frames = (frames + kOutStep - 1) / kOutStep;
  LoudnessResult result;
  result.specific.resize(kSpecificBins, static_cast<Eigen::Index>(out_frames));
  std::vector<double> total(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    double* ns = k % kOutStep == 0
                     ? result.specific.col(static_cast<Eigen::Index>(k / kOutStep)).data()
                     : nullptr;
    total[k] = Slopes(core[k], ns);
  }
  // Duration dependence of short impulses.
  const std::vector<double> fast = InterpolatedLowpass(total, 3.5e-3);
  const std::vector<double> slow = InterpolatedLowpass(total, 70e-3);

  result.loudness.metric = "loudness";
  result.loudness.unit = "sone";
  for (std::size_t k = 0; k < frames; k += kOutStep) {
    result.loudness.times.push_back(static_cast<double>(k) / kInnerRate);
    result.loudness.values.push_back(
        std::max(0.0, 0.47 * fast[k] + 0.53 * slow[k]));
  }
  return result;
}

}  // namespace evsound
