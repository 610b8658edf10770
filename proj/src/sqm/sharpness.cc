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

#include "evsound/sqm/sharpness.h"

#include <cmath>

#include "evsound/error.h"

namespace evsound {

double SharpnessWeighting(double bark) {
  return bark <= 15.8 ? 1.0 : 0.15 * std::exp(0.42 * (bark - 15.8)) + 0.85;
}

double Sharpness(const Eigen::Ref<const Eigen::ArrayXd>& specific,
                 double total_loudness) {
  if (specific.size() != kSpecificBins) {
    throw Error(errc::kInvalidArgument, "unexpected specific-loudness size");
  }
  if (total_loudness < kMinSharpnessLoudness) return 0.0;
  static const Eigen::ArrayXd weights = [] {
    Eigen::ArrayXd z = SpecificLoudnessBarkAxis();
    Eigen::ArrayXd w(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      w[i] = SharpnessWeighting(z[i]) * z[i] * 0.1;
    }
    return w;
  }();
  return 0.11 * (specific * weights).sum() / total_loudness;
}

SqmTrace SharpnessTv(const LoudnessResult& loudness) {
  SqmTrace trace;
  trace.metric = "sharpness";
  trace.unit = "acum";
  trace.times = loudness.loudness.times;
  trace.values.resize(trace.times.size());
  for (std::size_t k = 0; k < trace.values.size(); ++k) {
    trace.values[k] = Sharpness(
        loudness.specific.col(static_cast<Eigen::Index>(k)),
        loudness.loudness.values[k]);
  }
  return trace;
}

}  // namespace evsound
