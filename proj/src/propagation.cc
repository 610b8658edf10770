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

#include "evsound/propagation.h"

#include <cmath>
#include <numbers>
#include <span>

#include "evsound/dsp.h"
#include "evsound/error.h"

namespace evsound {

void Trajectory::Validate() const {
  if (!(c > 0.0)) throw Error(errc::kInvalidArgument, "c must be positive");
  if (!(y_s > 0.0)) {
    throw Error(errc::kInvalidArgument, "lateral offset y_s must be positive");
  }
  if (!(v_x >= 0.0) || !(v_x < c)) {
    throw Error(errc::kInvalidArgument, "speed must satisfy 0 <= v_x < c");
  }
  if (v_x > 0.0 && !(x_end > x_start)) {
    throw Error(errc::kInvalidArgument, "x_end must lie beyond x_start");
  }
}

double Trajectory::Duration() const {
  Validate();
  if (v_x == 0.0) {
    throw Error(errc::kInvalidArgument, "a static source has no duration");
  }
  return (x_end - x_start) / v_x;
}

double Trajectory::Distance(double tau) const {
  return std::hypot(SourceX(tau), y_s);
}

double EmissionTime(double t, const Trajectory& traj) {
  const double c2 = traj.c * traj.c;
  const double a = c2 - traj.v_x * traj.v_x;
  const double b = c2 * t + traj.x_start * traj.v_x;
  const double q = c2 * t * t - traj.x_start * traj.x_start - traj.y_s * traj.y_s;
  const double disc = std::sqrt(std::max(0.0, b * b - a * q));
  // Smaller root of a tau^2 - 2 b tau + q = 0, in the cancellation-free form.
  double tau = b > 0.0 ? q / (b + disc) : (b - disc) / a;
  // One Newton step on f(tau) = tau + r(tau)/c - t.
  const double r = traj.Distance(tau);
  const double f = tau + r / traj.c - t;
  const double df = 1.0 + traj.SourceX(tau) * traj.v_x / (r * traj.c);
  tau -= f / df;
  return tau;
}

CalibratedSignal RenderPassby(const CalibratedSignal& source,
                              const Trajectory& traj,
                              const RenderOptions& options) {
  traj.Validate();
  RequireMono(source, "pass-by rendering");
  if (!(options.r_ref > 0.0)) {
    throw Error(errc::kInvalidArgument, "r_ref must be positive");
  }
  const double fs = source.sample_rate();
  double duration = 0.0;
  if (options.duration) {
    duration = *options.duration;
  } else if (traj.v_x > 0.0) {
    duration = traj.Duration();
  } else {
    duration = source.duration();
  }
  if (!(duration > 0.0)) {
    throw Error(errc::kInvalidArgument, "render duration must be positive");
  }
  const auto n = static_cast<Eigen::Index>(std::llround(duration * fs));
  if (source.frames() + 1 < n) {
    throw Error(errc::kInvalidArgument,
                "source is shorter than the rendered pass-by");
  }

  const Eigen::ArrayXd x = source.mono();
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const dsp::SincInterpolator interp;
  Eigen::ArrayXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double tau = options.apply_delay ? EmissionTime(t, traj) : t;
    if (tau < 0.0) {
      y[i] = 0.0;
      continue;
    }
    const double gain =
        options.apply_spreading ? options.r_ref / traj.Distance(tau) : 1.0;
    // Without a delay the read position is the sample index itself.
    y[i] = gain * interp(xs, options.apply_delay ? tau * fs : static_cast<double>(i));
  }
  return CalibratedSignal::Mono(fs, std::move(y), source.calibrated());
}

double ReceivedAzimuth(double t, const Trajectory& traj) {
  const double tau = EmissionTime(t, traj);
  return std::atan2(traj.SourceX(tau), traj.y_s);
}

CalibratedSignal StereoStage(const CalibratedSignal& mono,
                             const Trajectory& traj, double head_radius) {
  traj.Validate();
  RequireMono(mono, "stereo staging");
  using std::numbers::pi;
  const double fs = mono.sample_rate();
  const Eigen::ArrayXd x = mono.mono();
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const dsp::SincInterpolator interp;
  Eigen::ArrayXd left(x.size()), right(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    const double theta = ReceivedAzimuth(t, traj);
    const double p = (theta / (pi / 2.0) + 1.0) / 2.0;
    const double gl = std::cos(p * pi / 2.0);
    const double gr = std::sin(p * pi / 2.0);
    // Woodworth spherical-head delay, applied to the ear facing away.
    const double a = std::abs(theta);
    const double itd = head_radius / traj.c * (a + std::sin(a));
    const double lagged = interp(xs, static_cast<double>(i) - itd * fs);
    if (theta < 0.0) {
      left[i] = gl * x[i];
      right[i] = gr * lagged;
    } else {
      left[i] = gl * lagged;
      right[i] = gr * x[i];
    }
  }
  CalibratedSignal out = CalibratedSignal::Stereo(fs, std::move(left),
                                                  std::move(right));
  return mono.calibrated() ? out : CalibratedSignal(fs, out.samples(), false);
}

}  // namespace evsound
