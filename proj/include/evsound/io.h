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

// Whole-file reads and atomic writes.

#ifndef EVSOUND_IO_H_
#define EVSOUND_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace evsound {

std::string ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`, so a
// reader never sees a partial file. Creates parent directories.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace evsound

#endif  // EVSOUND_IO_H_
