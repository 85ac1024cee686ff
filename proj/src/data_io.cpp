#include "drs/data_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "drs/smoothing.hpp"

namespace drs {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t get_be32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("load_idx: truncated header");
  return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
         (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

void put_be32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
               static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("load_idx: cannot open " + images_path);
  const std::uint32_t img_magic = get_be32(img);
  if (img_magic != kImageMagic)
    throw std::runtime_error("load_idx: bad image magic " + std::to_string(img_magic) + " in " +
                             images_path);
  const std::uint32_t count = get_be32(img);
  const std::uint32_t rows = get_be32(img);
  const std::uint32_t cols = get_be32(img);

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("load_idx: cannot open " + labels_path);
  const std::uint32_t lab_magic = get_be32(lab);
  if (lab_magic != kLabelMagic)
    throw std::runtime_error("load_idx: bad label magic " + std::to_string(lab_magic) + " in " +
                             labels_path);
  const std::uint32_t lab_count = get_be32(lab);
  if (lab_count != count)
    throw std::runtime_error("load_idx: image/label count mismatch (" + std::to_string(count) +
                             " vs " + std::to_string(lab_count) + ")");

  Dataset ds;
  std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols);
  int max_label = -1;
  for (std::uint32_t i = 0; i < count; ++i) {
    img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!img) throw std::runtime_error("load_idx: truncated image data in " + images_path);
    std::vector<double> pixels(buf.size());
    for (std::size_t j = 0; j < buf.size(); ++j) pixels[j] = buf[j] / 255.0;
    ds.images.emplace_back(static_cast<int>(cols), static_cast<int>(rows), 1, std::move(pixels));
    const int lbl = lab.get();
    if (lbl < 0) throw std::runtime_error("load_idx: truncated label data in " + labels_path);
    ds.labels.push_back(lbl);
    max_label = std::max(max_label, lbl);
  }
  ds.class_count = max_label + 1;
  return ds;
}

void save_idx(const Dataset& dataset, const std::string& images_path,
              const std::string& labels_path) {
  if (dataset.images.empty()) throw std::invalid_argument("save_idx: empty dataset");
  const Image& first = dataset.images.front();
  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("save_idx: cannot open " + images_path);
  put_be32(img, kImageMagic);
  put_be32(img, static_cast<std::uint32_t>(dataset.images.size()));
  put_be32(img, static_cast<std::uint32_t>(first.height()));
  put_be32(img, static_cast<std::uint32_t>(first.width()));
  for (const Image& im : dataset.images)
    for (int r = 0; r < im.height(); ++r)
      for (int c = 0; c < im.width(); ++c)
        img.put(static_cast<char>(
            static_cast<unsigned char>(std::lround(im.at(0, r, c) * 255.0))));

  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("save_idx: cannot open " + labels_path);
  put_be32(lab, kLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(dataset.labels.size()));
  for (int l : dataset.labels) lab.put(static_cast<char>(static_cast<unsigned char>(l)));
}

Dataset synth_shapes(int count_per_class, int size, std::uint64_t seed) {
  if (size < 8) throw std::invalid_argument("synth_shapes: size must be >= 8");
  Dataset ds;
  ds.class_count = 2;
  for (int cls = 0; cls < 2; ++cls) {
    for (int i = 0; i < count_per_class; ++i) {
      const RandomStream stream(seed, static_cast<std::uint64_t>(cls) * count_per_class + i);
      const double jx = (stream.u01(0) - 0.5) * 0.2 * size;
      const double jy = (stream.u01(1) - 0.5) * 0.2 * size;
      const double cx = size / 2.0 + jx;
      const double cy = size / 2.0 + jy;
      Image im(size, size, 1);
      if (cls == 0) {
        // Filled disk with jittered radius.
        const double radius = size * (0.22 + 0.1 * stream.u01(2));
        for (int r = 0; r < size; ++r)
          for (int c = 0; c < size; ++c) {
            const double dx = c + 0.5 - cx, dy = r + 0.5 - cy;
            if (dx * dx + dy * dy <= radius * radius) im.at(0, r, c) = 1.0;
          }
      } else {
        // Filled horizontal bar with jittered half-width.
        const double half = size * (0.06 + 0.06 * stream.u01(2));
        const double len = size * (0.30 + 0.10 * stream.u01(3));
        for (int r = 0; r < size; ++r)
          for (int c = 0; c < size; ++c) {
            if (std::abs(r + 0.5 - cy) <= half && std::abs(c + 0.5 - cx) <= len)
              im.at(0, r, c) = 1.0;
          }
      }
      ds.images.push_back(std::move(im));
      ds.labels.push_back(cls);
    }
  }
  return ds;
}

}  // namespace drs
