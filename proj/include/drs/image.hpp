#ifndef DRS_IMAGE_HPP
#define DRS_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace drs {

// Channel-major image with intensities in [0,1].
// Pixel (row r, col c) of channel ch lives at ch*W*H + r*W + c.
class Image {
public:
  Image() = default;
  Image(int width, int height, int channels);
  Image(int width, int height, int channels, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t size() const { return pixels_.size(); }

  double at(int ch, int row, int col) const {
    return pixels_[static_cast<std::size_t>(ch) * width_ * height_ +
                   static_cast<std::size_t>(row) * width_ + col];
  }
  double& at(int ch, int row, int col) {
    return pixels_[static_cast<std::size_t>(ch) * width_ * height_ +
                   static_cast<std::size_t>(row) * width_ + col];
  }

  const std::vector<double>& pixels() const { return pixels_; }
  std::vector<double>& pixels() { return pixels_; }

private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> pixels_;
};

// Per-pixel normalized coordinates in [-1,1]^2, row-major.
struct CoordinateField {
  int width = 0;
  int height = 0;
  std::vector<double> x;  // size width*height
  std::vector<double> y;

  double px(int row, int col) const { return x[static_cast<std::size_t>(row) * width + col]; }
  double py(int row, int col) const { return y[static_cast<std::size_t>(row) * width + col]; }
};

struct VectorField;  // deform.hpp

// Pixel centers at -1 + 2*i/(N-1); a degenerate axis (N == 1) maps to 0.
CoordinateField normalized_grid(int width, int height);

// Normalized coordinate of one pixel index along an axis of length n.
double normalized_coord(int index, int n);

// Pixel <-> normalized unit conversion factor along an axis of length n.
inline double pixels_per_unit(int n) { return (n - 1) / 2.0; }

// Bilinear sample at a normalized-space point; out-of-frame neighbors
// contribute intensity 0. Returns one value per channel.
std::vector<double> bilinear_sample(const Image& image, double px, double py);

// Resample: output pixel p takes the input at p + (u(p), v(p)).
Image warp(const Image& image, const VectorField& field);

// Binary PGM (P5, maxval 255), channel 0 only.
void write_pgm(const Image& image, const std::string& path);

}  // namespace drs

#endif
