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

#include "evsound/plot.h"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdlib>

#include <png.h>

#include "evsound/error.h"
#include "evsound/io.h"

namespace evsound {
namespace {

constexpr int kMargin = 40;

struct Axis {
  double lo, hi;
  int p0, p1;  // pixel positions of lo and hi
  int Map(double v) const {
    if (hi == lo) return (p0 + p1) / 2;
    return static_cast<int>(std::lround(p0 + (v - lo) / (hi - lo) * (p1 - p0)));
  }
};

void Frame(Image& img) {
  const int x0 = kMargin, y0 = kMargin / 2;
  const int x1 = img.width() - kMargin / 2, y1 = img.height() - kMargin;
  img.Line(x0, y0, x0, y1, kBlack);
  img.Line(x0, y1, x1, y1, kBlack);
}

void YTicks(Image& img, const Axis& ay, double step) {
  for (double v = std::ceil(ay.lo / step) * step; v <= ay.hi + 1e-9; v += step) {
    const int y = ay.Map(v);
    img.Line(kMargin - 5, y, kMargin, y, kBlack);
  }
}

void PngWrite(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), len);
}

void PngFlush(png_structp) {}

std::pair<double, double> PaddedRange(std::span<const double> v, double pad) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  if (hi == lo) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double d = (hi - lo) * pad;
  return {lo - d, hi + d};
}

}  // namespace

Image::Image(int width, int height, Rgb background)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error(errc::kInvalidArgument, "empty image");
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = background.r;
    data_[i + 1] = background.g;
    data_[i + 2] = background.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_.at(i), data_.at(i + 1), data_.at(i + 2)};
}

void Image::Set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[i] = c.r;
  data_[i + 1] = c.g;
  data_[i + 2] = c.b;
}

void Image::FillRect(int x0, int y0, int x1, int y1, Rgb c) {
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  for (int y = std::max(y0, 0); y <= std::min(y1, height_ - 1); ++y) {
    for (int x = std::max(x0, 0); x <= std::min(x1, width_ - 1); ++x) Set(x, y, c);
  }
}

void Image::Line(int x0, int y0, int x1, int y1, Rgb c) {
  // Bresenham.
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    Set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void Image::DashedLine(int x0, int y0, int x1, int y1, Rgb c, int dash) {
  const int steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
  for (int i = 0; i <= steps; ++i) {
    if ((i / dash) % 2) continue;
    const double t = steps ? static_cast<double>(i) / steps : 0.0;
    Set(static_cast<int>(std::lround(x0 + t * (x1 - x0))),
        static_cast<int>(std::lround(y0 + t * (y1 - y0))), c);
  }
}

void Image::Circle(int cx, int cy, int r, Rgb c, bool filled) {
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      const int d2 = x * x + y * y;
      if (filled ? d2 <= r * r : (d2 <= r * r && d2 > (r - 1) * (r - 1))) {
        Set(cx + x, cy + y, c);
      }
    }
  }
}

void Image::Diamond(int cx, int cy, int r, Rgb c) {
  for (int y = -r; y <= r; ++y) {
    const int w = r - std::abs(y);
    for (int x = -w; x <= w; ++x) Set(cx + x, cy + y, c);
  }
}

Rgb Colormap(double t) {
  // Anchors sampled from viridis.
  static constexpr double kAnchors[][3] = {{68, 1, 84},    {59, 82, 139}, {33, 145, 140},
                                           {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int i = std::min(static_cast<int>(t), 3);
  const double f = t - i;
  auto mix = [&](int k) {
    return static_cast<std::uint8_t>(
        std::lround(kAnchors[i][k] + f * (kAnchors[i + 1][k] - kAnchors[i][k])));
  };
  return {mix(0), mix(1), mix(2)};
}

std::string EncodePng(const Image& image) {
  std::string out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(errc::kIo, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(errc::kIo, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, PngWrite, PngFlush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const auto& bytes = image.bytes();
  for (int y = 0; y < image.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(bytes.data() +
                                             static_cast<std::size_t>(y) * image.width() * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::string EncodePpm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.bytes().data()), image.bytes().size());
  return out;
}

void WriteImage(const std::filesystem::path& path, const Image& image) {
  const auto ext = path.extension();
  if (ext == ".png") {
    WriteFileAtomic(path, EncodePng(image));
  } else if (ext == ".ppm") {
    WriteFileAtomic(path, EncodePpm(image));
  } else {
    throw Error(errc::kInvalidArgument, "image path must end in .png or .ppm");
  }
}

Image RenderSpectrogram(const Spectrogram& spec, double max_freq_hz,
                        double dynamic_range_db, int width, int height) {
  Image img(width, height, kWhite);
  const Eigen::Index bins = spec.psd_db.rows();
  const Eigen::Index frames = spec.psd_db.cols();
  if (bins == 0 || frames == 0) return img;
  Eigen::Index top = 0;
  while (top + 1 < bins && spec.frequencies[static_cast<std::size_t>(top + 1)] <= max_freq_hz) {
    ++top;
  }
  const double vmax = spec.psd_db.topRows(top + 1).maxCoeff();
  const double vmin = vmax - dynamic_range_db;
  const int x0 = kMargin, x1 = width - kMargin / 2;
  const int y0 = kMargin / 2, y1 = height - kMargin;
  for (int x = x0; x <= x1; ++x) {
    const auto f = std::min<Eigen::Index>(
        frames - 1, static_cast<Eigen::Index>((x - x0) * frames / (x1 - x0 + 1)));
    for (int y = y0; y <= y1; ++y) {
      const auto b = std::min<Eigen::Index>(
          top, static_cast<Eigen::Index>((y1 - y) * (top + 1) / (y1 - y0 + 1)));
      img.Set(x, y, Colormap((spec.psd_db(b, f) - vmin) / dynamic_range_db));
    }
  }
  Frame(img);
  return img;
}

Image RenderBoxPlot(std::span<const BoxStats> boxes, int width, int height) {
  Image img(width, height, kWhite);
  const Axis ay{0.0, 10.0, height - kMargin, kMargin / 2};
  const int n = static_cast<int>(boxes.size());
  const double slot = n ? static_cast<double>(width - kMargin - kMargin / 2) / n : 0.0;
  for (int i = 0; i < n; ++i) {
    const BoxStats& b = boxes[static_cast<std::size_t>(i)];
    const int cx = kMargin + static_cast<int>((i + 0.5) * slot);
    const int hw = std::max(2, static_cast<int>(slot * 0.3));
    img.Line(cx, ay.Map(b.whisker_low), cx, ay.Map(b.q25), kBlack);
    img.Line(cx, ay.Map(b.q75), cx, ay.Map(b.whisker_high), kBlack);
    img.Line(cx - hw / 2, ay.Map(b.whisker_low), cx + hw / 2, ay.Map(b.whisker_low), kBlack);
    img.Line(cx - hw / 2, ay.Map(b.whisker_high), cx + hw / 2, ay.Map(b.whisker_high), kBlack);
    img.FillRect(cx - hw, ay.Map(b.q75), cx + hw, ay.Map(b.q25), Rgb{198, 219, 239});
    img.Line(cx - hw, ay.Map(b.q25), cx + hw, ay.Map(b.q25), kBlue);
    img.Line(cx - hw, ay.Map(b.q75), cx + hw, ay.Map(b.q75), kBlue);
    img.Line(cx - hw, ay.Map(b.q25), cx - hw, ay.Map(b.q75), kBlue);
    img.Line(cx + hw, ay.Map(b.q25), cx + hw, ay.Map(b.q75), kBlue);
    img.Line(cx - hw, ay.Map(b.median), cx + hw, ay.Map(b.median), kRed);
    img.Diamond(cx, ay.Map(b.mean), 4, kBlack);
    for (double o : b.outliers) img.Circle(cx, ay.Map(o), 4, kBlack, false);
  }
  YTicks(img, ay, 1.0);
  Frame(img);
  return img;
}

Image RenderScatter(std::span<const double> x, std::span<const double> y,
                    std::span<const double> y_err, const LinearFit& fit, int width,
                    int height) {
  if (x.size() != y.size() || (!y_err.empty() && y_err.size() != y.size())) {
    throw Error(errc::kMismatch, "scatter inputs differ in length");
  }
  Image img(width, height, kWhite);
  if (x.empty()) return img;
  const auto [xlo, xhi] = PaddedRange(x, 0.08);
  const Axis ax{xlo, xhi, kMargin, width - kMargin / 2};
  const Axis ay{0.0, 10.0, height - kMargin, kMargin / 2};
  img.DashedLine(ax.Map(xlo), ay.Map(fit.slope * xlo + fit.intercept), ax.Map(xhi),
                 ay.Map(fit.slope * xhi + fit.intercept), kBlue);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int px = ax.Map(x[i]);
    if (!y_err.empty()) {
      img.Line(px, ay.Map(y[i] - y_err[i]), px, ay.Map(y[i] + y_err[i]), kGrey);
      img.Line(px - 3, ay.Map(y[i] - y_err[i]), px + 3, ay.Map(y[i] - y_err[i]), kGrey);
      img.Line(px - 3, ay.Map(y[i] + y_err[i]), px + 3, ay.Map(y[i] + y_err[i]), kGrey);
    }
    img.Circle(px, ay.Map(y[i]), 4, kBlack, true);
  }
  YTicks(img, ay, 1.0);
  Frame(img);
  return img;
}

}  // namespace evsound
