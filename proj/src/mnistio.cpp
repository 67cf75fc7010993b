#include "actspec/mnistio.hpp"

#include <zlib.h>

#include <algorithm>
#include <string>

#include "actspec/abf.hpp"

namespace actspec {

namespace {

constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr std::uint32_t kImageMagic = 0x00000803;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) throw FormatError("IDX header truncated");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex32(std::uint32_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 28; shift >= 0; shift -= 4) s.push_back(digits[(v >> shift) & 0xf]);
  return s;
}

}  // namespace

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kLabelMagic) throw FormatError("label file has magic " + hex32(magic) + ", expected 0x00000801");
  const std::size_t count = read_be32(bytes, 4);
  if (bytes.size() < 8 + count) throw FormatError("label payload truncated");
  std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count));
  for (auto l : labels) {
    if (l > 9) throw FormatError("label out of range 0-9");
  }
  return labels;
}

std::vector<std::uint8_t> parse_idx_images(std::span<const std::uint8_t> bytes, std::size_t& count) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kImageMagic) throw FormatError("image file has magic " + hex32(magic) + ", expected 0x00000803");
  count = read_be32(bytes, 4);
  const std::uint32_t rows = read_be32(bytes, 8);
  const std::uint32_t cols = read_be32(bytes, 12);
  if (rows != kImageSide || cols != kImageSide) {
    throw DimensionError("image dimensions " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", expected 28x28");
  }
  const std::size_t payload = count * kImagePixels;
  if (bytes.size() < 16 + payload) throw FormatError("image payload truncated");
  return std::vector<std::uint8_t>(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(payload));
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  put_be32(out, kLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::vector<std::uint8_t> encode_idx_images(std::span<const std::uint8_t> pixels, std::size_t count) {
  if (pixels.size() != count * kImagePixels) throw DimensionError("pixel block is not count x 784");
  std::vector<std::uint8_t> out;
  put_be32(out, kImageMagic);
  put_be32(out, static_cast<std::uint32_t>(count));
  put_be32(out, kImageSide);
  put_be32(out, kImageSide);
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  // gzread passes uncompressed files through unchanged.
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (f == nullptr) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> out;
  std::uint8_t buf[1 << 16];
  for (;;) {
    const int got = gzread(f, buf, sizeof buf);
    if (got < 0) {
      int err = 0;
      const std::string msg = gzerror(f, &err);
      gzclose(f);
      throw FormatError("read error in " + path.string() + ": " + msg);
    }
    if (got == 0) break;
    out.insert(out.end(), buf, buf + got);
  }
  gzclose(f);
  return out;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  const bool gz = path.extension() == ".gz";
  gzFile f = gzopen(path.string().c_str(), gz ? "wb9" : "wbT");
  if (f == nullptr) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const int wrote = bytes.empty() ? 0 : gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
  gzclose(f);
  if (static_cast<std::size_t>(wrote) != bytes.size()) throw std::runtime_error("short write to " + path.string());
}

ImageSet load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  ImageSet set;
  std::size_t count = 0;
  set.pixels = parse_idx_images(read_file_bytes(images), count);
  set.labels = parse_idx_labels(read_file_bytes(labels));
  if (set.labels.size() != count) {
    throw FormatError("image count " + std::to_string(count) + " differs from label count " +
                      std::to_string(set.labels.size()));
  }
  return set;
}

void save_idx(const ImageSet& set, const std::filesystem::path& images, const std::filesystem::path& labels) {
  write_file_bytes(images, encode_idx_images(set.pixels, set.size()));
  write_file_bytes(labels, encode_idx_labels(set.labels));
}

ImageSet filter_labels(const ImageSet& set, std::span<const std::uint8_t> keep) {
  ImageSet out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!keep.empty() && std::find(keep.begin(), keep.end(), set.labels[i]) == keep.end()) continue;
    const auto img = set.image(i);
    out.pixels.insert(out.pixels.end(), img.begin(), img.end());
    out.labels.push_back(set.labels[i]);
  }
  return out;
}

std::vector<std::vector<double>> binarized_inputs(const ImageSet& set) {
  std::vector<std::vector<double>> out(set.size(), std::vector<double>(kImagePixels));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto img = set.image(i);
    for (std::size_t p = 0; p < kImagePixels; ++p) out[i][p] = binarize_pixel(img[p]);
  }
  return out;
}

ActivationDataset to_input_dataset(const ImageSet& set, std::span<const std::uint8_t> keep,
                                   const SubnetOracle& classifier) {
  if (classifier.cut != 0) throw std::invalid_argument("input-layer dataset needs an oracle cut at the input");
  const ImageSet chosen = filter_labels(set, keep);
  if (chosen.size() == 0) throw std::invalid_argument("label filter selected no images");
  return extract_activation_dataset(classifier, binarized_inputs(chosen));
}

}  // namespace actspec
