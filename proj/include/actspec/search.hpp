#pragma once

// Goldreich-Levin style branch-and-bound over the subset lattice with a
// redundancy filter.
//
// A bucket (k, S) stands for every subset S u T with T drawn from the
// variables not yet decided. Its weight is the bucket weight of S within the
// decided set I = {v_0, ..., v_{k-1}}. Each depth splits every live bucket on
// v_k; branches below tau^2 are pruned, and an include-branch is also dropped
// when v_k is already explained by parities of S on the data (redundancy
// score above gamma). Survivors at depth n are single subsets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actspec/dataset.hpp"
#include "actspec/estimate.hpp"
#include "actspec/oracle.hpp"

namespace actspec {

class SearchLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Aggregation {
  exact,    // grouped in-distribution weight, one pass per query
  sampled,  // within-group pair statistic over the dataset
  spliced,  // pair statistic with spliced partners evaluated by an oracle
};

/// singleton_weight: descending weight of the bucket ({i}, {i});
/// singleton_weight_last: ascending, so heavy variables are decided last and
/// small buckets face fewer noisy pruning decisions.
enum class VariableOrder { natural, singleton_weight, singleton_weight_last };

std::string to_string(Aggregation a);
std::string to_string(VariableOrder o);
Aggregation parse_aggregation(const std::string& text);
VariableOrder parse_variable_order(const std::string& text);

struct SearchParams {
  /// Acceptance threshold on the normalized coefficient; weights compare against tau^2.
  double tau = 0.3;
  double gamma = 0.5;
  /// Buckets are pruned below prune_fraction * tau^2; leaves must still reach tau^2.
  double prune_fraction = 1.0;
  EstimatorConfig estimator;
  Aggregation aggregation = Aggregation::exact;
  VariableOrder order = VariableOrder::natural;
  /// Frontier size at which the search gives up.
  std::size_t max_buckets = std::size_t{1} << 18;
  unsigned threads = 1;

  void validate() const;
};

struct Bucket {
  std::size_t k = 0;
  SubsetMask s;
  double weight = 0.0;
};

struct AcceptedSubset {
  SubsetMask mask;
  double coefficient = 0.0;
};

enum class RedundancyKind {
  filter,     // include-branch dropped during the search
  duplicate,  // singleton leaf merged into an earlier accepted subset
};

struct RedundancyEntry {
  std::size_t variable = 0;
  /// The subset whose parity best matches x_variable on the data.
  SubsetMask witness;
  /// The subset that was being extended (for duplicates, the kept subset).
  SubsetMask context;
  double score = 0.0;
  RedundancyKind kind = RedundancyKind::filter;
};

/// A non-singleton leaf whose parity agrees with an accepted one on the data.
struct DuplicateSubset {
  SubsetMask mask;
  SubsetMask representative;
  double overlap = 0.0;
};

struct SearchStats {
  std::size_t weight_queries = 0;
  std::size_t redundancy_queries = 0;
  /// Records or oracle evaluations consumed by weight queries.
  std::size_t oracle_calls = 0;
  std::size_t max_frontier = 0;
  std::size_t leaves = 0;
  double max_singleton_fraction = 0.0;
};

struct SpectrumReport {
  std::size_t n = 0;
  std::vector<AcceptedSubset> accepted;
  std::vector<RedundancyEntry> redundancy;
  std::vector<DuplicateSubset> duplicates;
  /// Weighted mean of f^2 over the dataset.
  double total_weight = 0.0;
  double residual = 0.0;
  SearchParams params;
  std::vector<std::size_t> order;
  SearchStats stats;

  const RedundancyEntry* redundancy_for(std::size_t variable) const;
};

struct RedundancyResult {
  double score = 0.0;
  SubsetMask witness;
  /// (E[x_i x^witness])^2, the largest single term.
  double witness_term = 0.0;
};

/// sum_{T within A} (E[x_i x^T])^2 over the dataset's weighted distribution,
/// computed exactly for any |A| as 2^|A| sum_y P(x_A = y)^2 E[x_i | x_A = y]^2.
RedundancyResult redundancy_check(const ActivationDataset& ds, std::size_t i, const SubsetMask& a);
double redundancy_score(const ActivationDataset& ds, std::size_t i, const SubsetMask& a);

/// `oracle` is required for Aggregation::spliced and ignored otherwise.
SpectrumReport actspec_search(const ActivationDataset& ds, const SearchParams& params,
                              const PatternOracle* oracle = nullptr);

/// Binary search on tau for a report with about k accepted subsets.
SpectrumReport actspec_search_top_k(const ActivationDataset& ds, SearchParams params, std::size_t k,
                                    const PatternOracle* oracle = nullptr);

struct InfluenceEstimate {
  std::vector<double> values;
  double residual = 0.0;
  /// Residual was below -slack and clamped to 0.
  bool residual_clamped = false;
  /// Variables that received a share of the residual.
  std::vector<std::size_t> support;
};

/// Inf_i = sum_{accepted S containing i} c(S)^2 + residual / 2 for support
/// variables. The support is the union of accepted subsets (all variables when
/// nothing was accepted); variables filtered as constants never receive a share.
InfluenceEstimate influence_estimate(const SpectrumReport& report, double total_weight);

}  // namespace actspec
