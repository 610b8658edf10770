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

#ifndef EVSOUND_ERROR_H_
#define EVSOUND_ERROR_H_

#include <stdexcept>
#include <string>

namespace evsound {

// Every failure raised by the library is an Error. The code is a stable
// snake_case token that the CLI forwards verbatim in its JSON error report.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kInvalidArgument = "invalid_argument";
inline constexpr const char* kNyquist = "nyquist";
inline constexpr const char* kSilence = "silence";
inline constexpr const char* kMismatch = "mismatch";
inline constexpr const char* kUncalibrated = "uncalibrated";
inline constexpr const char* kIo = "io";
inline constexpr const char* kValidation = "validation";
inline constexpr const char* kClipping = "clipping";
inline constexpr const char* kUndefined = "undefined";
}  // namespace errc

}  // namespace evsound

#endif  // EVSOUND_ERROR_H_
