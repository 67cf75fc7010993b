#pragma once

// IDX containers (big-endian): images use magic 0x00000803 with dimensions
// (count, 28, 28), labels use 0x00000801 with (count). Files ending in ".gz"
// are gzip-compressed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "actspec/dataset.hpp"
#include "actspec/nn.hpp"

namespace actspec {

inline constexpr std::size_t kImageSide = 28;
inline constexpr std::size_t kImagePixels = kImageSide * kImageSide;

struct ImageSet {
  std::vector<std::uint8_t> pixels;  // count x 784, row-major
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const std::uint8_t> image(std::size_t i) const {
    return std::span<const std::uint8_t>(pixels).subspan(i * kImagePixels, kImagePixels);
  }
};

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);
/// Returns the pixel block; throws DimensionError unless the image dims are 28 x 28.
std::vector<std::uint8_t> parse_idx_images(std::span<const std::uint8_t> bytes, std::size_t& count);

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels);
std::vector<std::uint8_t> encode_idx_images(std::span<const std::uint8_t> pixels, std::size_t count);

/// Whole-file read, decompressing when the file is gzip (detected by content).
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Writes gzip when the path ends in ".gz".
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

ImageSet load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);
void save_idx(const ImageSet& set, const std::filesystem::path& images, const std::filesystem::path& labels);

/// >= 128 maps to +1, otherwise -1.
inline int binarize_pixel(std::uint8_t v) { return v >= 128 ? 1 : -1; }

/// Keeps images whose label is in `keep` (empty keeps everything), in file order.
ImageSet filter_labels(const ImageSet& set, std::span<const std::uint8_t> keep);

/// Binarized images as +-1 vectors of length 784.
std::vector<std::vector<double>> binarized_inputs(const ImageSet& set);

/// Input-layer dataset: pattern = binarized image, value = the classifier's
/// selected output (an oracle cut at 0). Throws when the selection is empty.
ActivationDataset to_input_dataset(const ImageSet& set, std::span<const std::uint8_t> keep,
                                   const SubnetOracle& classifier);

}  // namespace actspec
