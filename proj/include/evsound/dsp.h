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

// Small DSP toolbox shared by the synthesis, propagation and metric code.

#ifndef EVSOUND_DSP_H_
#define EVSOUND_DSP_H_

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace evsound::dsp {

// Thin wrapper over Eigen's FFT. Holds the plan cache, so reuse one instance
// for repeated transforms of the same size. Not thread-safe.
class Fft {
 public:
  // One-sided spectrum of a real signal, n/2+1 bins, unscaled.
  Eigen::ArrayXcd Forward(const Eigen::ArrayXd& x);
  // Inverse of Forward for a signal of length n (scaled by 1/n).
  Eigen::ArrayXd Inverse(const Eigen::ArrayXcd& half, Eigen::Index n);
  Eigen::ArrayXcd ForwardComplex(const Eigen::ArrayXcd& x);
  // Scaled by 1/n.
  Eigen::ArrayXcd InverseComplex(const Eigen::ArrayXcd& x);

 private:
  Eigen::FFT<double> engine_;
  std::vector<double> real_buf_;
  std::vector<std::complex<double>> cplx_in_;
  std::vector<std::complex<double>> cplx_out_;
};

// Smallest n' >= n whose only prime factors are 2, 3 and 5.
Eigen::Index NextFastSize(Eigen::Index n);

// Periodic Hann window (suits STFT analysis).
Eigen::ArrayXd HannWindow(Eigen::Index n);
// Symmetric Blackman window.
Eigen::ArrayXd BlackmanWindow(Eigen::Index n);

// Raised-cosine fade-in gain for t in [0, ramp]: 0.5 * (1 - cos(pi t / ramp)).
double RaisedCosine(double t, double ramp);

// Second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

  std::complex<double> Response(double freq, double sample_rate) const;
};

Biquad DesignLowpass(double cutoff, double q, double sample_rate);
Biquad DesignHighpass(double cutoff, double q, double sample_rate);

// Butterworth cascades of even order built from DesignLowpass/Highpass.
std::vector<Biquad> ButterworthLowpass(int order, double cutoff,
                                       double sample_rate);
std::vector<Biquad> ButterworthHighpass(int order, double cutoff,
                                        double sample_rate);

// Direct-form-II-transposed cascade.
Eigen::ArrayXd FilterCascade(std::span<const Biquad> sections,
                             const Eigen::ArrayXd& x);

// Band-limited interpolation of a sampled sequence at fractional positions
// with a Kaiser-windowed sinc kernel. The kernel is tabulated at `phases`
// sub-sample offsets and linearly interpolated between them. Positions that
// fall exactly on a sample return that sample unchanged; samples outside the
// sequence are treated as zero.
class SincInterpolator {
 public:
  explicit SincInterpolator(int taps = 32, double kaiser_beta = 8.0,
                            double cutoff = 1.0, int phases = 1024);

  double operator()(std::span<const double> x, double position) const;

  int taps() const { return taps_; }

 private:
  int taps_;
  int half_;
  int phases_;
  // (phases_ + 1) rows of taps_ coefficients.
  std::vector<double> table_;
};

// Band-limited sample-rate conversion built on SincInterpolator.
Eigen::ArrayXd Resample(const Eigen::ArrayXd& x, double from_rate,
                        double to_rate);

// Deterministic random numbers. The engine sequence is fixed by the C++
// standard, and the derived distributions are computed here instead of by
// <random> distributions so outputs do not depend on the library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double Gaussian();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates permutation of [0, n) driven by Rng(seed).
std::vector<int> SeededPermutation(int n, std::uint64_t seed);

// Piecewise-linear interpolation of (xp, fp) at x, clamped to the end values
// outside [xp.front(), xp.back()]. xp must be increasing.
double Interp(double x, std::span<const double> xp, std::span<const double> fp);

// Zwicker's critical-band rate approximation.
double HzToBark(double hz);
// Numerical inverse of HzToBark.
double BarkToHz(double bark);

}  // namespace evsound::dsp

#endif  // EVSOUND_DSP_H_
