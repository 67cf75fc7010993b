#include <gtest/gtest.h>

#include <filesystem>

#include "actspec/abf.hpp"
#include "actspec/mnistio.hpp"

using namespace actspec;

namespace {

ImageSet tiny_set() {
  ImageSet s;
  for (std::uint8_t k = 0; k < 5; ++k) {
    s.labels.push_back(k % 3);
    for (std::size_t p = 0; p < kImagePixels; ++p) s.pixels.push_back(static_cast<std::uint8_t>((p * 7 + k * 31) % 256));
  }
  return s;
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "actspec_mnist_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Idx, LabelHeader) {
  const std::vector<std::uint8_t> labels{3, 1, 4};
  const auto bytes = encode_idx_labels(labels);
  ASSERT_EQ(bytes.size(), 11u);
  EXPECT_EQ((std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 8)),
            (std::vector<std::uint8_t>{0, 0, 8, 1, 0, 0, 0, 3}));
  EXPECT_EQ(parse_idx_labels(bytes), labels);
}

TEST(Idx, ImageRoundTrip) {
  const auto set = tiny_set();
  const auto bytes = encode_idx_images(set.pixels, set.size());
  EXPECT_EQ(bytes[3], 3u);
  EXPECT_EQ(bytes[11], 28u);
  std::size_t count = 0;
  EXPECT_EQ(parse_idx_images(bytes, count), set.pixels);
  EXPECT_EQ(count, 5u);
}

TEST(Idx, Errors) {
  auto labels = encode_idx_labels(std::vector<std::uint8_t>{1, 2});
  auto bad_magic = labels;
  bad_magic[3] = 3;
  EXPECT_THROW(parse_idx_labels(bad_magic), FormatError);
  labels.pop_back();
  EXPECT_THROW(parse_idx_labels(labels), FormatError);
  EXPECT_THROW(parse_idx_labels(encode_idx_labels(std::vector<std::uint8_t>{12})), FormatError);

  auto images = encode_idx_images(tiny_set().pixels, 5);
  images[11] = 27;
  std::size_t count = 0;
  EXPECT_THROW(parse_idx_images(images, count), DimensionError);
}

TEST(Idx, GzipFilesRoundTrip) {
  const auto dir = scratch();
  const auto set = tiny_set();
  save_idx(set, dir / "img.gz", dir / "lab.gz");
  save_idx(set, dir / "img.idx", dir / "lab.idx");
  EXPECT_LT(std::filesystem::file_size(dir / "img.gz"), std::filesystem::file_size(dir / "img.idx"));
  for (const auto& [i, l] : {std::pair{"img.gz", "lab.gz"}, std::pair{"img.idx", "lab.idx"}}) {
    const auto back = load_idx(dir / i, dir / l);
    EXPECT_EQ(back.pixels, set.pixels);
    EXPECT_EQ(back.labels, set.labels);
  }
  EXPECT_THROW(load_idx(dir / "img.gz", dir / "missing"), FormatError);
  std::filesystem::remove_all(dir);
}

TEST(Idx, CountMismatch) {
  const auto dir = scratch();
  auto set = tiny_set();
  write_file_bytes(dir / "img", encode_idx_images(set.pixels, set.size()));
  set.labels.pop_back();
  write_file_bytes(dir / "lab", encode_idx_labels(set.labels));
  EXPECT_THROW(load_idx(dir / "img", dir / "lab"), FormatError);
  std::filesystem::remove_all(dir);
}

TEST(Preprocess, BinarizeAndFilter) {
  EXPECT_EQ(binarize_pixel(127), -1);
  EXPECT_EQ(binarize_pixel(128), 1);
  const auto set = tiny_set();
  const std::vector<std::uint8_t> keep{0, 2};
  const auto kept = filter_labels(set, keep);
  EXPECT_EQ(kept.labels, (std::vector<std::uint8_t>{0, 2, 0}));
  EXPECT_EQ(kept.image(2)[5], set.image(3)[5]);
  const auto in = binarized_inputs(kept);
  ASSERT_EQ(in.size(), 3u);
  EXPECT_EQ(in[0][0], -1.0);
  EXPECT_EQ(in[0][20], static_cast<double>(binarize_pixel(set.image(0)[20])));
}

TEST(Preprocess, InputDatasetFromClassifier) {
  Mlp net;
  Layer L;
  L.rows = 1;
  L.cols = kImagePixels;
  L.weights.assign(kImagePixels, 0.0);
  L.weights[20] = 1.0;
  L.bias = {0.0};
  L.activation = Activation::identity;
  net.layers.push_back(L);
  const auto oracle = SubnetOracle::make(net, 0, OutputSelector{}, {});
  const auto set = tiny_set();
  const auto ds = to_input_dataset(set, std::vector<std::uint8_t>{}, oracle);
  ASSERT_EQ(ds.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(ds[k].value, ds[k].pattern.sign(20));
  EXPECT_THROW(to_input_dataset(set, std::vector<std::uint8_t>{9}, oracle), std::invalid_argument);
}

TEST(Canonical, FileCountsWhenPresent) {
  const std::filesystem::path dir = ACTSPEC_DATA_DIR "/mnist";
  const auto train = dir / "train-images-idx3-ubyte.gz";
  const auto test = dir / "t10k-images-idx3-ubyte.gz";
  if (!std::filesystem::exists(train) || !std::filesystem::exists(test)) {
    GTEST_SKIP() << "canonical MNIST files not present";
  }
  EXPECT_EQ(load_idx(train, dir / "train-labels-idx1-ubyte.gz").size(), 60000u);
  EXPECT_EQ(load_idx(test, dir / "t10k-labels-idx1-ubyte.gz").size(), 10000u);
}

TEST(Canonical, BundledSubset) {
  const std::filesystem::path dir = ACTSPEC_DATA_DIR "/mnist";
  const auto set = load_idx(dir / "mnist10k-images-idx3-ubyte.gz", dir / "mnist10k-labels-idx1-ubyte.gz");
  EXPECT_EQ(set.size(), 10000u);
  const std::vector<std::uint8_t> keep{1, 7};
  EXPECT_EQ(filter_labels(set, keep).size(), 2197u);
}
