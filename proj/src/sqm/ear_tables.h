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

// Ear transfer and threshold tables shared by the modulation-based metrics.

#ifndef EVSOUND_SRC_SQM_EAR_TABLES_H_
#define EVSOUND_SRC_SQM_EAR_TABLES_H_

namespace evsound::ear {

// Outer- and middle-ear transfer, dB over Bark.
inline constexpr double kEarBark[] = {0,  10, 12,   13, 14,   15, 16,   16.5,
                               17, 18, 18.5, 19, 20,   21, 21.5, 22,
                               22.5, 23, 23.5, 24, 25, 26};
inline constexpr double kEarDb[] = {0,     0,     1.15, 2.31, 3.85, 5.62,  6.92, 7.38,
                             6.92,  4.23,  2.31, 0,    -1.43, -2.59, -3.57, -5.19,
                             -7.41, -11.3, -20,  -40,  -130, -999};

// Threshold in quiet over Bark used for excitation.
inline constexpr double kLtqBark[] = {0,  0.01, 0.17, 0.8, 1,  1.5, 2,  3.3, 4,
                               5,  6,    8,    10,  12, 13.3, 15, 16, 17,
                               18, 19,   20,   21,  22, 23, 24, 24.5, 25};
inline constexpr double kLtqDb[] = {130, 70,  60,  30,  25,  20,  15,  10,   8.1,
                             6.3, 5,   3.5, 2.5, 1.7, 0,   -2.5, -4,  -3.7,
                             -1.5, 1.4, 3.8, 5,  7.5, 15,  48,  60,  130};

}  // namespace evsound::ear

#endif  // EVSOUND_SRC_SQM_EAR_TABLES_H_
