#include "actspec/dataset.hpp"

#include <cmath>
#include <string>

namespace actspec {

ActivationDataset::ActivationDataset(std::size_t n, std::vector<Record> records)
    : n_(n), records_(std::move(records)) {
  if (n_ == 0) throw DimensionError("dataset dimension must be positive");
  if (records_.empty()) throw std::invalid_argument("dataset has no records");
  for (std::size_t r = 0; r < records_.size(); ++r) {
    const Record& rec = records_[r];
    if (rec.pattern.dimension() != n_) {
      throw DimensionError("record " + std::to_string(r) + " has dimension " +
                           std::to_string(rec.pattern.dimension()) + ", expected " + std::to_string(n_));
    }
    if (!std::isfinite(rec.value)) throw std::invalid_argument("record " + std::to_string(r) + " has non-finite value");
    if (!std::isfinite(rec.weight) || rec.weight < 0.0) {
      throw std::invalid_argument("record " + std::to_string(r) + " has invalid weight");
    }
    total_weight_ += rec.weight;
  }
  if (!(total_weight_ > 0.0)) throw std::invalid_argument("dataset total weight must be positive");
}

double ActivationDataset::mean_value() const {
  double s = 0.0;
  for (const auto& r : records_) s += r.weight * r.value;
  return s / total_weight_;
}

double ActivationDataset::mean_square() const {
  double s = 0.0;
  for (const auto& r : records_) s += r.weight * r.value * r.value;
  return s / total_weight_;
}

double ActivationDataset::max_abs_value() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, std::abs(r.value));
  return m;
}

double ActivationDataset::mean_sign(std::size_t i) const {
  if (i >= n_) throw DimensionError("variable index out of range");
  double s = 0.0;
  for (const auto& r : records_) s += r.weight * r.pattern.sign(i);
  return s / total_weight_;
}

ActivationDataset ActivationDataset::scaled(double alpha) const {
  std::vector<Record> out = records_;
  for (auto& r : out) r.value *= alpha;
  return ActivationDataset(n_, std::move(out));
}

RestrictionGroups group_by_restriction(const ActivationDataset& ds, const SubsetMask& j) {
  if (j.dimension() != ds.dimension()) {
    throw DimensionError("restriction mask has n=" + std::to_string(j.dimension()) + ", dataset has n=" +
                         std::to_string(ds.dimension()));
  }
  RestrictionGroups out{j, {}};
  for (std::size_t r = 0; r < ds.size(); ++r) {
    out.groups[ds[r].pattern.restricted(j)].push_back(r);
  }
  return out;
}

}  // namespace actspec
