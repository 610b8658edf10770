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

// Metric time series and their exceedance statistics.

#ifndef EVSOUND_SQM_SUMMARY_H_
#define EVSOUND_SQM_SUMMARY_H_

#include <string>
#include <vector>

namespace evsound {

struct SqmTrace {
  std::string metric;  // loudness, sharpness, tonality, roughness, ...
  std::string unit;
  std::vector<double> times;  // s
  std::vector<double> values;
};

// Value exceeded by `fraction` of the samples: the (1 - fraction) quantile
// with linear interpolation between order statistics. Throws on empty input.
double PercentileExceeded(const std::vector<double>& values, double fraction);

// Same, ignoring samples with time < skip_seconds. Falls back to the whole
// trace when nothing is left after skipping.
double PercentileExceeded(const SqmTrace& trace, double fraction,
                          double skip_seconds = 0.0);

inline constexpr double kDefaultWarmupSeconds = 0.5;

struct SqmSummary {
  double n5 = 0.0;   // sone
  double s5 = 0.0;   // acum
  double k5 = 0.0;   // t.u.
  double r5 = 0.0;   // asper
  double fs5 = 0.0;  // vacil
  double pa = 0.0;
};

}  // namespace evsound

#endif  // EVSOUND_SQM_SUMMARY_H_
