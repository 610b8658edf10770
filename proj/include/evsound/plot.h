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

// Minimal raster plots: spectrogram heat maps, box plots and scatter plots
// with error bars. Written as PNG or binary PPM.

#ifndef EVSOUND_PLOT_H_
#define EVSOUND_PLOT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "evsound/levels.h"
#include "evsound/study.h"

namespace evsound {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kGrey{170, 170, 170};
inline constexpr Rgb kBlue{31, 119, 180};
inline constexpr Rgb kRed{214, 39, 40};

class Image {
 public:
  Image(int width, int height, Rgb background = kWhite);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;
  // Row-major RGB bytes, top row first.
  const std::vector<std::uint8_t>& bytes() const { return data_; }

  // Drawing clips silently at the image border.
  void Set(int x, int y, Rgb c);
  void FillRect(int x0, int y0, int x1, int y1, Rgb c);
  void Line(int x0, int y0, int x1, int y1, Rgb c);
  void DashedLine(int x0, int y0, int x1, int y1, Rgb c, int dash = 6);
  void Circle(int cx, int cy, int r, Rgb c, bool filled);
  void Diamond(int cx, int cy, int r, Rgb c);

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Perceptually ordered colour for t in [0, 1].
Rgb Colormap(double t);

std::string EncodePng(const Image& image);
std::string EncodePpm(const Image& image);
// Format from the extension: .png or .ppm.
void WriteImage(const std::filesystem::path& path, const Image& image);

// Heat map with time to the right and frequency upwards. Values are clamped
// to [max - dynamic_range_db, max] where max is the largest value shown.
Image RenderSpectrogram(const Spectrogram& spec, double max_freq_hz = 5000.0,
                        double dynamic_range_db = 80.0, int width = 800,
                        int height = 400);

// One box per entry on a 0..10 rating axis; diamonds mark means.
Image RenderBoxPlot(std::span<const BoxStats> boxes, int width = 800,
                    int height = 400);

// Points with vertical error bars and a dashed fit line.
Image RenderScatter(std::span<const double> x, std::span<const double> y,
                    std::span<const double> y_err, const LinearFit& fit,
                    int width = 600, int height = 450);

}  // namespace evsound

#endif  // EVSOUND_PLOT_H_
