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

#include "evsound/dsp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "evsound/error.h"

namespace evsound::dsp {

using std::numbers::pi;

Eigen::ArrayXcd Fft::Forward(const Eigen::ArrayXd& x) {
  const Eigen::Index n = x.size();
  real_buf_.assign(x.data(), x.data() + n);
  engine_.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  engine_.fwd(cplx_out_, real_buf_);
  engine_.ClearFlag(Eigen::FFT<double>::HalfSpectrum);
  Eigen::ArrayXcd out(n / 2 + 1);
  for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = cplx_out_[k];
  return out;
}

Eigen::ArrayXd Fft::Inverse(const Eigen::ArrayXcd& half, Eigen::Index n) {
  if (half.size() != n / 2 + 1) {
    throw Error(errc::kInvalidArgument, "half spectrum size mismatch");
  }
  cplx_in_.assign(half.data(), half.data() + half.size());
  engine_.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  engine_.inv(real_buf_, cplx_in_, n);
  engine_.ClearFlag(Eigen::FFT<double>::HalfSpectrum);
  return Eigen::Map<const Eigen::ArrayXd>(real_buf_.data(), n);
}

Eigen::ArrayXcd Fft::ForwardComplex(const Eigen::ArrayXcd& x) {
  cplx_in_.assign(x.data(), x.data() + x.size());
  engine_.fwd(cplx_out_, cplx_in_);
  return Eigen::Map<const Eigen::ArrayXcd>(cplx_out_.data(), x.size());
}

Eigen::ArrayXcd Fft::InverseComplex(const Eigen::ArrayXcd& x) {
  cplx_in_.assign(x.data(), x.data() + x.size());
  engine_.inv(cplx_out_, cplx_in_);
  return Eigen::Map<const Eigen::ArrayXcd>(cplx_out_.data(), x.size());
}

Eigen::Index NextFastSize(Eigen::Index n) {
  if (n <= 1) return 1;
  for (Eigen::Index m = n;; ++m) {
    Eigen::Index r = m;
    for (int p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

Eigen::ArrayXd HannWindow(Eigen::Index n) {
  Eigen::ArrayXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * pi * i / n);
  }
  return w;
}

Eigen::ArrayXd BlackmanWindow(Eigen::Index n) {
  Eigen::ArrayXd w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = 2.0 * pi * i / (n - 1);
    w[i] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
  }
  return w;
}

double RaisedCosine(double t, double ramp) {
  if (t <= 0.0) return 0.0;
  if (t >= ramp) return 1.0;
  return 0.5 * (1.0 - std::cos(pi * t / ramp));
}

std::complex<double> Biquad::Response(double freq, double sample_rate) const {
  const std::complex<double> z1 =
      std::polar(1.0, -2.0 * pi * freq / sample_rate);
  const std::complex<double> z2 = z1 * z1;
  return (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2);
}

Biquad DesignLowpass(double cutoff, double q, double sample_rate) {
  const double w0 = 2.0 * pi * cutoff / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double c = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 - c) / 2.0 / a0, (1.0 - c) / a0, (1.0 - c) / 2.0 / a0,
          -2.0 * c / a0, (1.0 - alpha) / a0};
}

Biquad DesignHighpass(double cutoff, double q, double sample_rate) {
  const double w0 = 2.0 * pi * cutoff / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double c = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 + c) / 2.0 / a0, -(1.0 + c) / a0, (1.0 + c) / 2.0 / a0,
          -2.0 * c / a0, (1.0 - alpha) / a0};
}

namespace {

std::vector<double> ButterworthQs(int order) {
  if (order < 2 || order % 2 != 0) {
    throw Error(errc::kInvalidArgument, "Butterworth order must be even");
  }
  std::vector<double> qs;
  for (int k = 0; k < order / 2; ++k) {
    qs.push_back(1.0 / (2.0 * std::sin((2.0 * k + 1.0) * pi / (2.0 * order))));
  }
  return qs;
}

}  // namespace

std::vector<Biquad> ButterworthLowpass(int order, double cutoff,
                                       double sample_rate) {
  std::vector<Biquad> out;
  for (double q : ButterworthQs(order)) {
    out.push_back(DesignLowpass(cutoff, q, sample_rate));
  }
  return out;
}

std::vector<Biquad> ButterworthHighpass(int order, double cutoff,
                                        double sample_rate) {
  std::vector<Biquad> out;
  for (double q : ButterworthQs(order)) {
    out.push_back(DesignHighpass(cutoff, q, sample_rate));
  }
  return out;
}

Eigen::ArrayXd FilterCascade(std::span<const Biquad> sections,
                             const Eigen::ArrayXd& x) {
  Eigen::ArrayXd y = x;
  for (const Biquad& s : sections) {
    double z1 = 0.0, z2 = 0.0;
    for (Eigen::Index n = 0; n < y.size(); ++n) {
      const double in = y[n];
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      y[n] = out;
    }
  }
  return y;
}

SincInterpolator::SincInterpolator(int taps, double kaiser_beta, double cutoff,
                                   int phases)
    : taps_(taps), half_(taps / 2), phases_(phases) {
  if (taps < 2 || taps % 2 != 0 || phases < 1 || !(cutoff > 0.0) ||
      cutoff > 1.0) {
    throw Error(errc::kInvalidArgument, "bad interpolator parameters");
  }
  const double norm = std::cyl_bessel_i(0.0, kaiser_beta);
  table_.resize(static_cast<std::size_t>(phases_ + 1) * taps_);
  for (int p = 0; p <= phases_; ++p) {
    const double frac = static_cast<double>(p) / phases_;
    for (int t = 0; t < taps_; ++t) {
      // Distance from the interpolation point to tap t.
      const double d = frac + (half_ - 1) - t;
      double h = 0.0;
      const double u = d / half_;
      if (std::abs(u) < 1.0) {
        const double window =
            std::cyl_bessel_i(0.0, kaiser_beta * std::sqrt(1.0 - u * u)) /
            norm;
        const double arg = pi * cutoff * d;
        const double sinc = d == 0.0 ? 1.0 : std::sin(arg) / arg;
        h = cutoff * sinc * window;
      }
      if (cutoff == 1.0 && d != 0.0 && d == std::round(d)) h = 0.0;
      table_[static_cast<std::size_t>(p) * taps_ + t] = h;
    }
  }
}

double SincInterpolator::operator()(std::span<const double> x,
                                    double position) const {
  const double base = std::floor(position);
  const double frac = position - base;
  const auto i0 = static_cast<std::int64_t>(base);
  const auto n = static_cast<std::int64_t>(x.size());
  if (frac == 0.0) {
    return (i0 >= 0 && i0 < n) ? x[static_cast<std::size_t>(i0)] : 0.0;
  }
  const double scaled = frac * phases_;
  const int p = std::min(static_cast<int>(scaled), phases_ - 1);
  const double mu = scaled - p;
  const double* row0 = &table_[static_cast<std::size_t>(p) * taps_];
  const double* row1 = row0 + taps_;
  const std::int64_t first = i0 - half_ + 1;
  double acc = 0.0;
  const int t_begin = static_cast<int>(std::max<std::int64_t>(0, -first));
  const int t_end = static_cast<int>(std::min<std::int64_t>(taps_, n - first));
  for (int t = t_begin; t < t_end; ++t) {
    const double h = row0[t] + mu * (row1[t] - row0[t]);
    acc += h * x[static_cast<std::size_t>(first + t)];
  }
  return acc;
}

Eigen::ArrayXd Resample(const Eigen::ArrayXd& x, double from_rate,
                        double to_rate) {
  if (!(from_rate > 0.0) || !(to_rate > 0.0)) {
    throw Error(errc::kInvalidArgument, "sample rates must be positive");
  }
  if (from_rate == to_rate) return x;
  const double cutoff = std::min(1.0, to_rate / from_rate);
  const int taps = cutoff < 1.0 ? static_cast<int>(2 * std::ceil(16 / cutoff))
                                : 32;
  const SincInterpolator interp(taps, 8.0, cutoff * 0.97);
  const auto out_n = static_cast<Eigen::Index>(
      std::llround(static_cast<double>(x.size()) * to_rate / from_rate));
  Eigen::ArrayXd y(out_n);
  const std::span<const double> src(x.data(), static_cast<std::size_t>(x.size()));
  for (Eigen::Index m = 0; m < out_n; ++m) {
    y[m] = interp(src, static_cast<double>(m) * from_rate / to_rate);
  }
  return y;
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::Below(std::uint64_t n) {
  if (n == 0) throw Error(errc::kInvalidArgument, "empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double Rng::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = Uniform();
  while (u1 <= 0.0) u1 = Uniform();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * pi * u2);
}

std::vector<int> SeededPermutation(int n, std::uint64_t seed) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.Below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

double Interp(double x, std::span<const double> xp,
              std::span<const double> fp) {
  if (xp.empty() || xp.size() != fp.size()) {
    throw Error(errc::kInvalidArgument, "interpolation table is malformed");
  }
  if (x <= xp.front()) return fp.front();
  if (x >= xp.back()) return fp.back();
  const auto it = std::upper_bound(xp.begin(), xp.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xp.begin());
  const double t = (x - xp[i - 1]) / (xp[i] - xp[i - 1]);
  return fp[i - 1] + t * (fp[i] - fp[i - 1]);
}

double HzToBark(double hz) {
  return 13.0 * std::atan(0.76 * hz / 1000.0) +
         3.5 * std::atan((hz / 7500.0) * (hz / 7500.0));
}

double BarkToHz(double bark) {
  double lo = 0.0, hi = 30000.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (HzToBark(mid) < bark ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace evsound::dsp
