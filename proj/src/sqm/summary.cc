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

#include "evsound/sqm/summary.h"

#include <algorithm>
#include <cmath>

#include "evsound/error.h"

namespace evsound {

double PercentileExceeded(const std::vector<double>& values, double fraction) {
  if (values.empty()) throw Error(errc::kInvalidArgument, "empty trace");
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(errc::kInvalidArgument, "fraction must lie in [0, 1]");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double pos = (1.0 - fraction) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double PercentileExceeded(const SqmTrace& trace, double fraction,
                          double skip_seconds) {
  if (trace.values.empty()) throw Error(errc::kInvalidArgument, "empty trace");
  std::vector<double> kept;
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    const double t = i < trace.times.size() ? trace.times[i] : 0.0;
    if (t >= skip_seconds) kept.push_back(trace.values[i]);
  }
  return PercentileExceeded(kept.empty() ? trace.values : kept, fraction);
}

}  // namespace evsound
