#include "drs/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "drs/deform.hpp"

namespace drs {

Image::Image(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels),
      pixels_(static_cast<std::size_t>(width) * height * channels, 0.0) {
  if (width < 1 || height < 1) throw std::invalid_argument("Image: invalid dimensions");
  if (channels != 1 && channels != 3) throw std::invalid_argument("Image: channels must be 1 or 3");
}

Image::Image(int width, int height, int channels, std::vector<double> pixels)
    : Image(width, height, channels) {
  if (pixels.size() != pixels_.size())
    throw std::invalid_argument("Image: pixel count does not match dimensions");
  for (double p : pixels)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Image: intensity outside [0,1]");
  pixels_ = std::move(pixels);
}

double normalized_coord(int index, int n) {
  if (n <= 1) return 0.0;
  return -1.0 + 2.0 * index / (n - 1);
}

CoordinateField normalized_grid(int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("normalized_grid: invalid dimensions");
  CoordinateField grid;
  grid.width = width;
  grid.height = height;
  grid.x.resize(static_cast<std::size_t>(width) * height);
  grid.y.resize(grid.x.size());
  for (int r = 0; r < height; ++r) {
    const double py = normalized_coord(r, height);
    for (int c = 0; c < width; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * width + c;
      grid.x[i] = normalized_coord(c, width);
      grid.y[i] = py;
    }
  }
  return grid;
}

namespace {

// Continuous pixel index of a normalized coordinate, snapped to the nearest
// integer when within 1e-12 grid steps so that sampling at exact pixel
// centers reproduces the stored value bit-for-bit.
double to_index(double p, int n) {
  if (n <= 1) return 0.0;
  double idx = (p + 1.0) * (n - 1) / 2.0;
  const double nearest = std::round(idx);
  if (std::abs(idx - nearest) < 1e-12) idx = nearest;
  return idx;
}

double texel(const Image& image, int ch, int row, int col) {
  if (row < 0 || row >= image.height() || col < 0 || col >= image.width()) return 0.0;
  return image.at(ch, row, col);
}

}  // namespace

std::vector<double> bilinear_sample(const Image& image, double px, double py) {
  if (!std::isfinite(px) || !std::isfinite(py))
    throw std::invalid_argument("bilinear_sample: non-finite coordinates");
  const double xi = to_index(px, image.width());
  const double yi = to_index(py, image.height());
  const double xf = std::floor(xi);
  const double yf = std::floor(yi);
  const int x0 = static_cast<int>(xf);
  const int y0 = static_cast<int>(yf);
  const double wx = xi - xf;
  const double wy = yi - yf;

  std::vector<double> out(image.channels());
  for (int ch = 0; ch < image.channels(); ++ch) {
    if (wx == 0.0 && wy == 0.0) {
      out[ch] = texel(image, ch, y0, x0);
      continue;
    }
    const double v00 = texel(image, ch, y0, x0);
    const double v01 = texel(image, ch, y0, x0 + 1);
    const double v10 = texel(image, ch, y0 + 1, x0);
    const double v11 = texel(image, ch, y0 + 1, x0 + 1);
    out[ch] = (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) +
              wy * ((1.0 - wx) * v10 + wx * v11);
  }
  return out;
}

Image warp(const Image& image, const VectorField& field) {
  if (field.width != image.width() || field.height != image.height())
    throw std::invalid_argument("warp: field dimensions do not match image");
  Image out(image.width(), image.height(), image.channels());
  const CoordinateField grid = normalized_grid(image.width(), image.height());
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * image.width() + c;
      const std::vector<double> s =
          bilinear_sample(image, grid.x[i] + field.u[i], grid.y[i] + field.v[i]);
      for (int ch = 0; ch < image.channels(); ++ch) out.at(ch, r, c) = s[ch];
    }
  }
  return out;
}

void write_pgm(const Image& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c) {
      const double v = std::clamp(image.at(0, r, c), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
}

}  // namespace drs
