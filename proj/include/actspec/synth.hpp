#pragma once

// Synthetic benchmark functions, ground-truth importance, and the black-box
// attribution baselines (feature ablation, sampled Shapley values).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "actspec/dataset.hpp"
#include "actspec/oracle.hpp"

namespace actspec {

/// +1 iff x3 = x4 = +1, or x1 >= x2 >= x3 >= x4, or x1 <= x2 <= x3 <= x4 (1-based names).
int multitier(std::span<const int> x);
int multitier(int x1, int x2, int x3, int x4);
/// Multi-tier on the first four coordinates of a pattern.
double multitier_of(const BitPattern& p);

enum class SynthKind { base, constant, noise };
SynthKind parse_synth_kind(const std::string& text);

/// base: the 16 points of {-1,1}^4 (count and seed ignored).
/// constant: n = 5, record k has the first four coordinates of cube point
///   k mod 16 and x5 = +1 (count 0 means 16; seed ignored).
/// noise: n = 100, count records with i.i.d. uniform signs; value = multi-tier
///   of the first four coordinates.
ActivationDataset gen_synth_dataset(SynthKind kind, std::size_t count = 0, std::uint64_t seed = 0);

/// Inf_i = E_x[((f(x | x_i=+1) - f(x | x_i=-1)) / 2)^2] over the uniform cube,
/// by enumeration (n <= 24). For +-1 valued f this is Pr[f(x) != f(x with i flipped)].
std::vector<double> influence_by_enumeration(const std::function<double(const BitPattern&)>& f, std::size_t n);

struct ImportanceVector {
  std::vector<double> values;
  bool normalized = false;

  /// Divides by the sum of absolute values; throws on a zero vector.
  ImportanceVector normalize() const;
};

double tv_distance(const ImportanceVector& p, const ImportanceVector& q);

/// Mean over records of |f(x) - f(x with bit i flipped)|, with f queried from the oracle.
ImportanceVector feature_ablation_importance(const PatternOracle& oracle, const ActivationDataset& ds);

/// Permutation-sampled Shapley values against the all -1 baseline. For each
/// record the marginal contributions are averaged over `permutations` random
/// orders; the reported score is the mean over records of their absolute value.
ImportanceVector shapley_sampling_importance(const PatternOracle& oracle, const ActivationDataset& ds,
                                             std::size_t permutations, std::uint64_t seed);

/// Marginal contributions of one permutation for one pattern; they sum to
/// f(x) - f(baseline).
std::vector<double> shapley_marginals(const PatternOracle& oracle, const BitPattern& x,
                                      std::span<const std::size_t> permutation);

}  // namespace actspec
