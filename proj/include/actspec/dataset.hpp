#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "actspec/bits.hpp"

namespace actspec {

struct Record {
  BitPattern pattern;
  double value = 0.0;
  double weight = 1.0;

  friend bool operator==(const Record&, const Record&) = default;
};

/// The in-distribution set: records of (pattern, value, weight) over n
/// coordinates. Duplicate patterns are allowed; every average is weight-aware.
class ActivationDataset {
 public:
  ActivationDataset() = default;
  /// Validates: all patterns have dimension n, values finite, weights finite
  /// and nonnegative, total weight positive (n > 0, at least one record).
  ActivationDataset(std::size_t n, std::vector<Record> records);

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<Record>& records() const { return records_; }
  double total_weight() const { return total_weight_; }

  /// Weighted mean of f(x).
  double mean_value() const;
  /// Weighted mean of f(x)^2.
  double mean_square() const;
  double max_abs_value() const;
  /// Weighted mean of x_i.
  double mean_sign(std::size_t i) const;
  /// Copy with every value multiplied by alpha.
  ActivationDataset scaled(double alpha) const;

  friend bool operator==(const ActivationDataset&, const ActivationDataset&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Record> records_;
  double total_weight_ = 0.0;
};

/// Records partitioned by their coordinates on J. Keys are the patterns with
/// coordinates outside J cleared, so map order is lexicographic on the
/// restricted pattern.
struct RestrictionGroups {
  SubsetMask j_mask;
  std::map<BitPattern, std::vector<std::size_t>> groups;
};

RestrictionGroups group_by_restriction(const ActivationDataset& ds, const SubsetMask& j);

}  // namespace actspec
