#pragma once

// Exact Fourier machinery for pseudo-Boolean functions.
//
// Coefficients are reported on the normalized (dataset-mean) scale:
//   c(S) = sum_r w_r f(x_r) x_r^S / sum_r w_r.
// For a dataset that covers {-1,1}^n once with unit weights this is the usual
// 2^-n <f, x^S>. For a dataset D that is only part of the cube, the coefficient
// of the zero-extended function is c(S) * projection_scale(D).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "actspec/dataset.hpp"

namespace actspec {

inline constexpr std::size_t kMaxExactDimension = 24;

/// 2^n coefficients indexed by SubsetMask::index().
class FourierTable {
 public:
  FourierTable() = default;
  FourierTable(std::size_t n, std::vector<double> coeffs);

  std::size_t dimension() const { return n_; }
  double operator[](const SubsetMask& s) const;
  double at_index(std::uint64_t index) const { return coeffs_.at(index); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Sum of squared coefficients.
  double total_weight() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> coeffs_;
};

/// In-place butterfly, O(n 2^n). `values[x]` is f at the pattern whose bit i
/// is 1 exactly when x_i = +1.
FourierTable wht_exact(std::span<const double> values);

/// Truth table of a dataset covering every point of the cube (duplicates
/// averaged by weight). Throws when a point is missing or n exceeds the guard.
std::vector<double> cube_values(const ActivationDataset& ds);

double projection_coefficient(const ActivationDataset& ds, const SubsetMask& s);
/// (sum of weights) / 2^n, the factor from normalized to zero-extended coefficients.
double projection_scale(const ActivationDataset& ds);

double influence_exact(const FourierTable& table, std::size_t i);
std::vector<double> influences_exact(const FourierTable& table);

/// In-distribution bucket weight for S within I (J = [n] \ I):
///   sum over J-restriction groups g of  P(g) * (E[f x^S | g])^2.
/// This is the quantity estimated by the restriction/pair statistic. It
/// bounds every member of the bucket, c(S u T)^2 <= weight for T within J, and
/// equals sum_T c(S u T)^2 whenever the J-coordinates are uniform over
/// {-1,1}^J (in particular on full-cube datasets).
double bucket_weight_exact(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask);

/// The literal lattice sum sum_{T within J} c(S u T)^2, computed in one pass as
///   2^|J| * sum_g P(g)^2 (E[f x^S | g])^2.
/// Grows like 2^|J| / |D| on sparse data.
double lattice_weight_exact(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask);

/// CSV with header "mask,coefficient"; mask is a bit string, character i for variable i.
void write_fourier_csv(const FourierTable& table, std::ostream& os);

namespace detail {

/// Records ordered by their coordinates on J. Group g spans
/// order[begin[g] .. begin[g+1]).
struct GroupIndex {
  std::vector<std::size_t> order;
  std::vector<std::size_t> begin;
  std::size_t group_count() const { return begin.empty() ? 0 : begin.size() - 1; }
};

GroupIndex index_groups(const ActivationDataset& ds, const SubsetMask& j);

/// Per-group (sum w, sum w f x^S) in GroupIndex order.
struct GroupSums {
  std::vector<double> weight;
  std::vector<double> signal;
};

GroupSums group_sums(const ActivationDataset& ds, const GroupIndex& groups, const SubsetMask& s);

}  // namespace detail
}  // namespace actspec
