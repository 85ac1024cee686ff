#ifndef DRS_DATA_IO_HPP
#define DRS_DATA_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "drs/image.hpp"

namespace drs {

struct Dataset {
  std::vector<Image> images;
  std::vector<int> labels;
  int class_count = 0;
};

// Big-endian IDX pair (images 0x00000803, labels 0x00000801); intensities / 255.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);
void save_idx(const Dataset& dataset, const std::string& images_path,
              const std::string& labels_path);

// Two-class shapes (0: filled disk, 1: filled bar) with seeded jitter.
Dataset synth_shapes(int count_per_class, int size, std::uint64_t seed);

}  // namespace drs

#endif
