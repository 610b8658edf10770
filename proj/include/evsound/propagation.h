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

// Free-field rendering of a point source moving on a straight line past a
// fixed observer at the origin.

#ifndef EVSOUND_PROPAGATION_H_
#define EVSOUND_PROPAGATION_H_

#include <optional>

#include "evsound/signal.h"

namespace evsound {

// Source path x(tau) = x_start + v_x * tau at lateral offset y_s.
struct Trajectory {
  double x_start = -60.0;
  double x_end = 60.0;
  double y_s = 3.0;
  double v_x = 8.33;
  double c = 343.0;

  // Throws unless y_s > 0, 0 <= v_x < c and c > 0. A zero speed pins the
  // source at x_start.
  void Validate() const;
  // (x_end - x_start) / v_x. Throws for a static source.
  double Duration() const;
  double SourceX(double tau) const { return x_start + v_x * tau; }
  double Distance(double tau) const;
};

// Emission instant tau <= t with tau + r(tau)/c = t.
double EmissionTime(double t_receive, const Trajectory& traj);

struct RenderOptions {
  bool apply_spreading = true;
  bool apply_delay = true;
  double r_ref = 1.0;
  // Output length in seconds. Defaults to the trajectory duration, or to the
  // source length when the source is static.
  std::optional<double> duration;
};

// Observer signal y(t) = s(tau(t)) * r_ref / r(tau(t)) with windowed-sinc
// fractional delay. The source is silent before tau = 0, so the output starts
// with the initial propagation delay.
CalibratedSignal RenderPassby(const CalibratedSignal& source,
                              const Trajectory& traj,
                              const RenderOptions& options = {});

// Source azimuth seen by the observer at reception time t, in radians;
// negative on the left (x < 0), zero abeam.
double ReceivedAzimuth(double t_receive, const Trajectory& traj);

// Two-channel playback version of a rendered mono signal: constant-power
// panning plus a spherical-head interaural delay on the far ear.
CalibratedSignal StereoStage(const CalibratedSignal& mono,
                             const Trajectory& traj,
                             double head_radius = 0.0875);

}  // namespace evsound

#endif  // EVSOUND_PROPAGATION_H_
