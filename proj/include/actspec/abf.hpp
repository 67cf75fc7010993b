#pragma once

// ABF v1 ("activation binary format"):
//
//   magic "ABF1" (4 bytes)
//   u32 LE  n            (dimension, > 0)
//   u32 LE  count        (records)
//   count x { ceil(n/8) pattern bytes (bit i = coordinate i, LSB-first, 1 => +1),
//             f64 LE value, f64 LE weight }
//
// The JSON-lines debug variant is one header object
// {"format":"ABF1","n":..,"count":..} followed by one object per record
// {"pattern":"<bit string>","value":..,"weight":..}, where character i of the
// bit string is '1' when coordinate i is +1.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "actspec/dataset.hpp"

namespace actspec {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_abf(const ActivationDataset& ds, std::ostream& sink);
ActivationDataset read_abf(std::istream& source);

void write_abf_jsonl(const ActivationDataset& ds, std::ostream& sink);
ActivationDataset read_abf_jsonl(std::istream& source);

/// Chooses the JSON-lines variant when the path ends in ".jsonl".
void save_dataset(const ActivationDataset& ds, const std::filesystem::path& path);
ActivationDataset load_dataset(const std::filesystem::path& path);

}  // namespace actspec
