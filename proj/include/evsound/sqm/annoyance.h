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

// Psychoacoustic annoyance after Di et al. (2016): percentile loudness with
// sharpness, modulation and tonality penalties.

#ifndef EVSOUND_SQM_ANNOYANCE_H_
#define EVSOUND_SQM_ANNOYANCE_H_

#include "evsound/signal.h"
#include "evsound/sqm/summary.h"

namespace evsound {

inline constexpr double kSharpnessThreshold = 1.75;  // acum

struct AnnoyanceTerms {
  double w_s = 0.0;
  double w_fr = 0.0;
  double w_t = 0.0;
};

// Penalty terms for the given percentile statistics.
AnnoyanceTerms AnnoyancePenalties(double n5, double s5, double r5, double fs5,
                                  double k5);

// PA from the percentile statistics. Throws on negative input.
double PsychoacousticAnnoyance(double n5, double s5, double r5, double fs5,
                               double k5);

struct SqmTraces {
  SqmTrace loudness;
  SqmTrace sharpness;
  SqmTrace tonality;
  SqmTrace roughness;
  SqmTrace fluctuation;
};

// All five time-varying metrics of a calibrated mono signal.
SqmTraces ComputeSqmTraces(const CalibratedSignal& signal);

// Percentile statistics and PA; the first skip_seconds of each trace are
// excluded from the percentiles.
SqmSummary Summarize(const SqmTraces& traces,
                     double skip_seconds = kDefaultWarmupSeconds);

}  // namespace evsound

#endif  // EVSOUND_SQM_ANNOYANCE_H_
