#pragma once

// Sampled bucket weights.
//
// For a record x drawn in proportion to its weight and a partner x' drawn
// independently from the records that agree with x on J = [n] \ I, the term
// f(x) x^S f(x') x'^S has expectation sum_g P(g) m_g^2 = bucket_weight_exact.
// Terms lie in [-M^2, M^2], so Hoeffding gives the sample count below.

#include <cstddef>
#include <cstdint>

#include "actspec/dataset.hpp"
#include "actspec/oracle.hpp"

namespace actspec {

struct EstimatorConfig {
  double eta = 0.1;
  double delta = 0.05;
  /// |f| bound M; 0 means "max |value| in the dataset".
  double bound = 0.0;
  std::uint64_t seed = 0;
  /// Use every record with exact within-group pairing (no sampling).
  bool exhaustive = false;
  /// Overrides sample_size() when nonzero.
  std::size_t pair_count = 0;
  /// Spliced mode only: draw the partner's I-coordinates uniformly instead of
  /// copying them from a second dataset record.
  bool uniform_donor = true;

  void validate() const;
};

/// ceil(2 M^4 ln(2/delta) / eta^2), with M = cfg.bound (must be > 0 here).
std::size_t sample_size(const EstimatorConfig& cfg);

struct WeightEstimate {
  double estimate = 0.0;
  std::size_t samples_used = 0;
  /// Fraction of samples whose anchor sat in a single-record group; those
  /// terms are f(x)^2 exactly and carry no averaging over the free coordinates.
  double singleton_fraction = 0.0;
};

/// Stream id for a (S, I) query, so an estimate does not depend on which
/// other buckets were evaluated before it.
std::uint64_t query_stream(const SubsetMask& s, const SubsetMask& i_mask);

WeightEstimate bucket_weight_estimate(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask,
                                      const EstimatorConfig& cfg);

namespace detail {
struct GroupIndex;
/// Same as bucket_weight_estimate with the J-grouping supplied by the caller
/// (the search shares one grouping across all buckets of a depth).
WeightEstimate bucket_weight_estimate_grouped(const ActivationDataset& ds, const GroupIndex& groups,
                                              const SubsetMask& s, const SubsetMask& i_mask,
                                              const EstimatorConfig& cfg);
}  // namespace detail

/// Query-access variant: an anchor a is drawn from the dataset and the partner
/// takes a's J-coordinates and a donor b's I-coordinates; the term is
/// f(a) a^S f(partner) b^S with f(partner) from the oracle. With uniform
/// donors the mean is sum_T fhat(S u T) c(S u T), the full-cube coefficients
/// of the oracle paired with the dataset coefficients, so buckets the oracle
/// gives no weight have mean exactly 0. With dataset donors and data whose
/// coordinates are independent and uniform, the mean tends to sum_T fhat(S u T)^2.
/// Requires an oracle that answers off-dataset.
WeightEstimate bucket_weight_spliced(const ActivationDataset& ds, const PatternOracle& oracle, const SubsetMask& s,
                                     const SubsetMask& i_mask, const EstimatorConfig& cfg);

}  // namespace actspec
