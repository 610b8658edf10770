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

#include "evsound/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>

#include "evsound/error.h"
#include "evsound/io.h"

namespace evsound {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

void Put(std::string& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t Get(std::string_view in, std::size_t pos, int bytes) {
  std::uint32_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

int BitsOf(WavFormat f) {
  switch (f) {
    case WavFormat::kPcm16: return 16;
    case WavFormat::kPcm24: return 24;
    case WavFormat::kFloat32: return 32;
  }
  return 0;
}

}  // namespace

std::string EncodeWav(const CalibratedSignal& signal, const WavWriteOptions& options) {
  if (!(options.full_scale > 0.0)) {
    throw Error(errc::kInvalidArgument, "full scale must be positive");
  }
  if (!signal.calibrated()) {
    throw Error(errc::kUncalibrated, "refusing to write an uncalibrated signal");
  }
  const double peak = signal.peak() / options.full_scale;
  if (peak > 1.0) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "signal peak %.3f Pa exceeds full scale %.3f Pa; needs %.2f dB more headroom",
                  signal.peak(), options.full_scale, 20.0 * std::log10(peak));
    throw Error(errc::kClipping, msg);
  }
  const int bits = BitsOf(options.format);
  const int bytes = bits / 8;
  const auto channels = static_cast<std::uint32_t>(signal.channels());
  const auto frames = static_cast<std::uint32_t>(signal.frames());
  const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate()));
  if (std::abs(signal.sample_rate() - rate) > 1e-9) {
    throw Error(errc::kInvalidArgument, "WAV needs an integer sample rate");
  }
  const std::uint32_t data_size = frames * channels * static_cast<std::uint32_t>(bytes);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  Put(out, 36 + data_size, 4);
  out += "WAVEfmt ";
  Put(out, 16, 4);
  Put(out, options.format == WavFormat::kFloat32 ? kFormatFloat : kFormatPcm, 2);
  Put(out, channels, 2);
  Put(out, rate, 4);
  Put(out, rate * channels * static_cast<std::uint32_t>(bytes), 4);
  Put(out, channels * static_cast<std::uint32_t>(bytes), 2);
  Put(out, static_cast<std::uint32_t>(bits), 2);
  out += "data";
  Put(out, data_size, 4);
  const double unit = std::ldexp(1.0, bits - 1);
  const Eigen::ArrayXXd& s = signal.samples();
  for (std::uint32_t i = 0; i < frames; ++i) {
    for (std::uint32_t c = 0; c < channels; ++c) {
      const double v = s(i, c) / options.full_scale;
      if (options.format == WavFormat::kFloat32) {
        Put(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
      } else {
        const double q_real = std::clamp(std::nearbyint(v * unit), -unit, unit - 1.0);
        const auto q = static_cast<std::int32_t>(q_real);
        Put(out, static_cast<std::uint32_t>(q), bytes);
      }
    }
  }
  return out;
}

void WriteWav(const std::filesystem::path& path, const CalibratedSignal& signal,
              const WavWriteOptions& options) {
  WriteFileAtomic(path, EncodeWav(signal, options));
}

CalibratedSignal DecodeWav(std::string_view in, std::optional<double> full_scale,
                           WavInfo* info) {
  if (in.size() < 12 || in.substr(0, 4) != "RIFF" || in.substr(8, 4) != "WAVE") {
    throw Error(errc::kIo, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::string_view data;
  bool have_fmt = false, have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= in.size()) {
    const std::string_view id = in.substr(pos, 4);
    const std::uint32_t size = Get(in, pos + 4, 4);
    const std::size_t body = pos + 8;
    if (body + size > in.size()) {
      // Tolerate a truncated data chunk, as written by some recorders.
      if (id != "data") throw Error(errc::kIo, "truncated WAV chunk");
    }
    const std::size_t avail = std::min<std::size_t>(size, in.size() - body);
    if (id == "fmt ") {
      if (avail < 16) throw Error(errc::kIo, "short fmt chunk");
      format = static_cast<std::uint16_t>(Get(in, body, 2));
      channels = static_cast<std::uint16_t>(Get(in, body + 2, 2));
      rate = Get(in, body + 4, 4);
      bits = static_cast<std::uint16_t>(Get(in, body + 14, 2));
      if (format == kFormatExtensible) {
        if (avail < 26) throw Error(errc::kIo, "short extensible fmt chunk");
        format = static_cast<std::uint16_t>(Get(in, body + 24, 2));
      }
      have_fmt = true;
    } else if (id == "data") {
      data = in.substr(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) throw Error(errc::kIo, "WAV lacks fmt or data chunk");
  if (channels == 0 || rate == 0) throw Error(errc::kIo, "bad WAV header");
  const bool is_float = format == kFormatFloat;
  if (!(format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32)) &&
      !(is_float && (bits == 32 || bits == 64))) {
    throw Error(errc::kIo, "unsupported WAV encoding (format " + std::to_string(format) +
                               ", " + std::to_string(bits) + " bits)");
  }
  const int bytes = bits / 8;
  const auto frames = static_cast<Eigen::Index>(data.size() / (bytes * channels));
  Eigen::ArrayXXd samples(frames, channels);
  const double scale = 1.0 / std::ldexp(1.0, bits - 1);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c, p += static_cast<std::size_t>(bytes)) {
      double v;
      if (is_float && bits == 32) {
        v = std::bit_cast<float>(Get(data, p, 4));
      } else if (is_float) {
        std::uint64_t u = Get(data, p, 4) |
                          (static_cast<std::uint64_t>(Get(data, p + 4, 4)) << 32);
        v = std::bit_cast<double>(u);
      } else {
        std::uint32_t u = Get(data, p, bytes);
        // Sign-extend.
        const int shift = 32 - bits;
        v = static_cast<double>(static_cast<std::int32_t>(u << shift) >> shift) * scale;
      }
      samples(i, c) = v;
    }
  }
  if (info) *info = {static_cast<double>(rate), channels, bits, is_float};
  CalibratedSignal sig(rate, std::move(samples), false);
  return full_scale ? sig.with_calibration(*full_scale) : sig;
}

CalibratedSignal ReadWav(const std::filesystem::path& path,
                         std::optional<double> full_scale, WavInfo* info) {
  return DecodeWav(ReadFileBytes(path), full_scale, info);
}

}  // namespace evsound
