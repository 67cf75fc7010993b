#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "actspec/abf.hpp"
#include "fixtures.hpp"

using namespace actspec;

namespace {

std::string to_abf(const ActivationDataset& ds) {
  std::ostringstream os;
  write_abf(ds, os);
  return os.str();
}

ActivationDataset from_abf(const std::string& bytes) {
  std::istringstream is(bytes);
  return read_abf(is);
}

}  // namespace

TEST(Abf, RoundTripAcrossDimensions) {
  for (std::size_t n : {1u, 7u, 8u, 9u, 63u, 64u, 65u, 100u, 512u}) {
    const auto ds = fixtures::random_dataset(n, 25, n);
    EXPECT_EQ(from_abf(to_abf(ds)), ds) << "n=" << n;
  }
}

TEST(Abf, HeaderAndRecordLayout) {
  const auto ds = fixtures::worked_example();
  const auto bytes = to_abf(ds);
  ASSERT_EQ(bytes.size(), 12u + 4u * (1u + 16u));
  EXPECT_EQ(bytes.substr(0, 4), "ABF1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 5u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 4u);
  // Second record: pattern byte then f64 value -1.
  EXPECT_EQ(static_cast<unsigned char>(bytes[12 + 17]), 0b00010001u);
  double v = 0;
  std::memcpy(&v, bytes.data() + 12 + 17 + 1, 8);
  EXPECT_EQ(v, -1.0);
}

TEST(Abf, RejectsBadMagic) {
  auto bytes = to_abf(fixtures::worked_example());
  bytes[0] = 'X';
  EXPECT_THROW(from_abf(bytes), FormatError);
}

TEST(Abf, RejectsTruncation) {
  const auto bytes = to_abf(fixtures::worked_example());
  for (std::size_t cut : {std::size_t{2}, std::size_t{6}, std::size_t{11}, std::size_t{20}, bytes.size() - 1}) {
    EXPECT_THROW(from_abf(bytes.substr(0, cut)), FormatError) << "cut=" << cut;
  }
}

TEST(Abf, RejectsZeroDimension) {
  auto bytes = to_abf(fixtures::worked_example());
  bytes[4] = 0;
  EXPECT_THROW(from_abf(bytes), FormatError);
}

TEST(Abf, RejectsNonFiniteValue) {
  auto bytes = to_abf(fixtures::worked_example());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(bytes.data() + 12 + 1, &nan, 8);
  EXPECT_THROW(from_abf(bytes), FormatError);
}

TEST(Abf, RejectsTrailingPatternBits) {
  auto bytes = to_abf(fixtures::worked_example());
  bytes[12] = static_cast<char>(0xff);
  EXPECT_THROW(from_abf(bytes), FormatError);
}

TEST(Abf, JsonLinesRoundTrip) {
  const auto ds = fixtures::random_dataset(13, 10, 2);
  std::stringstream ss;
  write_abf_jsonl(ds, ss);
  std::string header;
  std::getline(ss, header);
  EXPECT_NE(header.find("\"ABF1\""), std::string::npos);
  ss.seekg(0);
  EXPECT_EQ(read_abf_jsonl(ss), ds);
}

TEST(Abf, JsonLinesRejectsWrongPatternLength) {
  std::istringstream is(
      "{\"format\":\"ABF1\",\"n\":3,\"count\":1}\n"
      "{\"pattern\":\"10\",\"value\":1.0,\"weight\":1.0}\n");
  EXPECT_THROW(read_abf_jsonl(is), FormatError);
}

TEST(Abf, FileDispatchOnExtension) {
  const auto dir = std::filesystem::temp_directory_path() / "actspec_abf_test";
  std::filesystem::create_directories(dir);
  const auto ds = fixtures::random_dataset(9, 12, 3);
  save_dataset(ds, dir / "d.abf");
  save_dataset(ds, dir / "d.jsonl");
  EXPECT_EQ(load_dataset(dir / "d.abf"), ds);
  EXPECT_EQ(load_dataset(dir / "d.jsonl"), ds);
  std::ifstream jl(dir / "d.jsonl");
  std::string first;
  std::getline(jl, first);
  EXPECT_EQ(first.front(), '{');
  EXPECT_THROW(load_dataset(dir / "missing.abf"), FormatError);
  std::filesystem::remove_all(dir);
}
