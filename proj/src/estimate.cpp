#include "actspec/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "actspec/rng.hpp"
#include "actspec/spectrum.hpp"

namespace actspec {

void EstimatorConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("estimator: eta must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("estimator: delta must lie in (0,1)");
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw std::invalid_argument("estimator: bound must be nonnegative");
}

std::size_t sample_size(const EstimatorConfig& cfg) {
  cfg.validate();
  if (!(cfg.bound > 0.0)) throw std::invalid_argument("sample_size: bound must be positive");
  const double m2 = cfg.bound * cfg.bound;
  const double raw = 2.0 * m2 * m2 * std::log(2.0 / cfg.delta) / (cfg.eta * cfg.eta);
  // Absorb representation error so exact integers (e.g. 2.0000000000000004) do not round up.
  const double rounded = std::nearbyint(raw);
  const double count = std::abs(raw - rounded) < 1e-9 * std::max(1.0, raw) ? rounded : std::ceil(raw);
  return static_cast<std::size_t>(std::max(1.0, count));
}

std::uint64_t query_stream(const SubsetMask& s, const SubsetMask& i_mask) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto w : s.words()) h = mix64(h ^ w);
  h = mix64(h ^ 0x13198a2e03707344ULL);
  for (auto w : i_mask.words()) h = mix64(h ^ w);
  return h;
}

namespace {

std::size_t pair_budget(const ActivationDataset& ds, const EstimatorConfig& cfg) {
  if (cfg.pair_count > 0) return cfg.pair_count;
  EstimatorConfig c = cfg;
  if (!(c.bound > 0.0)) c.bound = ds.max_abs_value();
  if (!(c.bound > 0.0)) return 1;  // f == 0: every term is 0
  return sample_size(c);
}

void check_args(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask) {
  if (ds.empty()) throw std::invalid_argument("bucket weight estimate: empty dataset");
  if (s.dimension() != ds.dimension() || i_mask.dimension() != ds.dimension()) {
    throw DimensionError("bucket weight estimate: dimension mismatch");
  }
  if (!s.is_subset_of(i_mask)) throw std::invalid_argument("bucket weight estimate: S must be a subset of I");
}

}  // namespace

WeightEstimate bucket_weight_estimate(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask,
                                      const EstimatorConfig& cfg) {
  cfg.validate();
  check_args(ds, s, i_mask);
  return detail::bucket_weight_estimate_grouped(ds, detail::index_groups(ds, i_mask.complement()), s, i_mask, cfg);
}

namespace detail {

WeightEstimate bucket_weight_estimate_grouped(const ActivationDataset& ds, const GroupIndex& groups,
                                              const SubsetMask& s, const SubsetMask& i_mask,
                                              const EstimatorConfig& cfg) {
  const std::size_t group_count = groups.group_count();

  WeightEstimate out;
  if (cfg.exhaustive) {
    const auto sums = detail::group_sums(ds, groups, s);
    double acc = 0.0;
    std::size_t singletons = 0;
    for (std::size_t g = 0; g < group_count; ++g) {
      if (sums.weight[g] > 0.0) acc += sums.signal[g] * sums.signal[g] / sums.weight[g];
      if (groups.begin[g + 1] - groups.begin[g] == 1) ++singletons;
    }
    out.estimate = acc / ds.total_weight();
    out.samples_used = ds.size();
    out.singleton_fraction = static_cast<double>(singletons) / static_cast<double>(group_count);
    return out;
  }

  // Position of each record in groups.order, and its group.
  std::vector<std::size_t> group_of(ds.size());
  std::vector<double> ordered_weight(ds.size());
  for (std::size_t g = 0; g < group_count; ++g) {
    for (std::size_t k = groups.begin[g]; k < groups.begin[g + 1]; ++k) {
      group_of[groups.order[k]] = g;
      ordered_weight[k] = ds[groups.order[k]].weight;
    }
  }
  // Cumulative weights in group order; partner draws search within the group's slice.
  std::vector<double> cumulative(ds.size());
  {
    double acc = 0.0;
    for (std::size_t k = 0; k < ds.size(); ++k) cumulative[k] = (acc += ordered_weight[k]);
  }
  std::vector<double> record_weights(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) record_weights[r] = ds[r].weight;
  const WeightedSampler anchors(record_weights);

  const auto mask = s.words();
  auto term = [&](std::size_t r) { return ds[r].value * parity_words(ds[r].pattern.words(), mask); };

  StreamRng rng(cfg.seed, query_stream(s, i_mask));
  const std::size_t budget = pair_budget(ds, cfg);
  double acc = 0.0;
  std::size_t singletons = 0;
  for (std::size_t t = 0; t < budget; ++t) {
    const std::size_t a = anchors.sample(rng);
    const std::size_t g = group_of[a];
    const std::size_t lo = groups.begin[g];
    const std::size_t hi = groups.begin[g + 1];
    std::size_t b = a;
    if (hi - lo == 1) {
      ++singletons;
    } else {
      const double base = lo == 0 ? 0.0 : cumulative[lo - 1];
      const double target = base + rng.uniform() * (cumulative[hi - 1] - base);
      auto it = std::upper_bound(cumulative.begin() + static_cast<std::ptrdiff_t>(lo),
                                 cumulative.begin() + static_cast<std::ptrdiff_t>(hi), target);
      if (it == cumulative.begin() + static_cast<std::ptrdiff_t>(hi)) --it;
      b = groups.order[static_cast<std::size_t>(it - cumulative.begin())];
    }
    acc += term(a) * term(b);
  }
  out.estimate = acc / static_cast<double>(budget);
  out.samples_used = budget;
  out.singleton_fraction = static_cast<double>(singletons) / static_cast<double>(budget);
  return out;
}

}  // namespace detail

WeightEstimate bucket_weight_spliced(const ActivationDataset& ds, const PatternOracle& oracle, const SubsetMask& s,
                                     const SubsetMask& i_mask, const EstimatorConfig& cfg) {
  cfg.validate();
  check_args(ds, s, i_mask);
  if (oracle.projection_only) {
    throw std::invalid_argument("spliced estimation needs query access off the dataset; use promote mode");
  }
  std::vector<double> record_weights(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) record_weights[r] = ds[r].weight;
  const WeightedSampler sampler(record_weights);
  const auto mask = s.words();

  const auto free = i_mask.members();
  const auto fixed = i_mask.complement().members();
  BitPattern partner(ds.dimension());

  StreamRng rng(cfg.seed, query_stream(s, i_mask));
  const std::size_t budget = pair_budget(ds, cfg);
  double acc = 0.0;
  for (std::size_t t = 0; t < budget; ++t) {
    const Record& a = ds[sampler.sample(rng)];
    if (cfg.uniform_donor) {
      for (std::size_t i : free) partner.set_sign(i, rng.sign());
      for (std::size_t i : fixed) partner.set_sign(i, a.pattern.sign(i));
      acc += a.value * parity_words(a.pattern.words(), mask) * oracle(partner) *
             parity_words(partner.words(), mask);
    } else {
      const Record& b = ds[sampler.sample(rng)];
      partner = a.pattern.spliced(b.pattern, i_mask);
      acc += a.value * parity_words(a.pattern.words(), mask) * oracle(partner) *
             parity_words(b.pattern.words(), mask);
    }
  }
  WeightEstimate out;
  out.estimate = acc / static_cast<double>(budget);
  out.samples_used = budget;
  return out;
}

}  // namespace actspec
