#include "actspec/synth.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "actspec/rng.hpp"
#include "actspec/spectrum.hpp"

namespace actspec {

int multitier(int x1, int x2, int x3, int x4) {
  const bool top = x3 == 1 && x4 == 1;
  const bool down = x1 >= x2 && x2 >= x3 && x3 >= x4;
  const bool up = x1 <= x2 && x2 <= x3 && x3 <= x4;
  return (top || down || up) ? 1 : -1;
}

int multitier(std::span<const int> x) {
  if (x.size() != 4) throw DimensionError("multitier takes exactly 4 signs");
  for (int v : x) {
    if (v != 1 && v != -1) throw std::invalid_argument("multitier inputs must be +-1");
  }
  return multitier(x[0], x[1], x[2], x[3]);
}

double multitier_of(const BitPattern& p) {
  if (p.dimension() < 4) throw DimensionError("pattern has fewer than 4 coordinates");
  return multitier(p.sign(0), p.sign(1), p.sign(2), p.sign(3));
}

SynthKind parse_synth_kind(const std::string& text) {
  if (text == "base") return SynthKind::base;
  if (text == "constant") return SynthKind::constant;
  if (text == "noise") return SynthKind::noise;
  throw std::invalid_argument("unknown synthetic dataset kind '" + text + "' (base, constant, noise)");
}

ActivationDataset gen_synth_dataset(SynthKind kind, std::size_t count, std::uint64_t seed) {
  std::vector<Record> records;
  switch (kind) {
    case SynthKind::base:
      for (std::uint64_t x = 0; x < 16; ++x) {
        auto p = BitPattern::from_index(4, x);
        const double v = multitier_of(p);
        records.push_back(Record{std::move(p), v, 1.0});
      }
      return ActivationDataset(4, std::move(records));
    case SynthKind::constant: {
      if (count == 0) count = 16;
      for (std::size_t k = 0; k < count; ++k) {
        auto p = BitPattern::from_index(5, (k % 16) | 16u);
        const double v = multitier_of(p);
        records.push_back(Record{std::move(p), v, 1.0});
      }
      return ActivationDataset(5, std::move(records));
    }
    case SynthKind::noise: {
      if (count == 0) throw std::invalid_argument("noise dataset needs a positive record count");
      constexpr std::size_t n = 100;
      StreamRng rng(seed, 0x7015e);
      for (std::size_t k = 0; k < count; ++k) {
        BitPattern p(n);
        for (std::size_t i = 0; i < n; ++i) p.set_sign(i, rng.sign());
        const double v = multitier_of(p);
        records.push_back(Record{std::move(p), v, 1.0});
      }
      return ActivationDataset(n, std::move(records));
    }
  }
  throw std::invalid_argument("unknown synthetic dataset kind");
}

std::vector<double> influence_by_enumeration(const std::function<double(const BitPattern&)>& f, std::size_t n) {
  if (n == 0 || n > kMaxExactDimension) throw DimensionError("influence_by_enumeration: n out of range");
  const std::uint64_t len = std::uint64_t{1} << n;
  std::vector<double> values(len);
  for (std::uint64_t x = 0; x < len; ++x) values[x] = f(BitPattern::from_index(n, x));
  std::vector<double> inf(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double acc = 0.0;
    for (std::uint64_t x = 0; x < len; ++x) {
      if (x & bit) continue;
      const double d = (values[x | bit] - values[x]) / 2.0;
      acc += d * d;
    }
    inf[i] = acc / static_cast<double>(len / 2);
  }
  return inf;
}

ImportanceVector ImportanceVector::normalize() const {
  double total = 0.0;
  for (double v : values) total += std::abs(v);
  if (!(total > 0.0) || !std::isfinite(total)) throw std::invalid_argument("cannot normalize a zero importance vector");
  ImportanceVector out;
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back(std::abs(v) / total);
  out.normalized = true;
  return out;
}

double tv_distance(const ImportanceVector& p, const ImportanceVector& q) {
  if (p.values.size() != q.values.size()) throw DimensionError("tv_distance: length mismatch");
  const auto a = p.normalize();
  const auto b = q.normalize();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::abs(a.values[i] - b.values[i]);
  return std::min(1.0, acc / 2.0);
}

namespace {

void require_queries(const PatternOracle& oracle, const char* who) {
  if (oracle.projection_only) {
    throw std::invalid_argument(std::string(who) +
                                " evaluates patterns outside the dataset; use a promote-mode or exact oracle");
  }
}

}  // namespace

ImportanceVector feature_ablation_importance(const PatternOracle& oracle, const ActivationDataset& ds) {
  require_queries(oracle, "feature ablation");
  const std::size_t n = ds.dimension();
  ImportanceVector out;
  out.values.assign(n, 0.0);
  for (const auto& r : ds.records()) {
    const double base = oracle(r.pattern);
    BitPattern p = r.pattern;
    for (std::size_t i = 0; i < n; ++i) {
      p.flip(i);
      out.values[i] += r.weight * std::abs(base - oracle(p));
      p.flip(i);
    }
  }
  for (double& v : out.values) v /= ds.total_weight();
  return out;
}

std::vector<double> shapley_marginals(const PatternOracle& oracle, const BitPattern& x,
                                      std::span<const std::size_t> permutation) {
  const std::size_t n = x.dimension();
  if (permutation.size() != n) throw DimensionError("permutation length differs from the dimension");
  std::vector<double> phi(n, 0.0);
  BitPattern cur(n);
  double prev = oracle(cur);
  for (std::size_t i : permutation) {
    if (!x.positive(i)) continue;  // already at the baseline value
    cur.set_sign(i, 1);
    const double v = oracle(cur);
    phi[i] = v - prev;
    prev = v;
  }
  return phi;
}

ImportanceVector shapley_sampling_importance(const PatternOracle& oracle, const ActivationDataset& ds,
                                             std::size_t permutations, std::uint64_t seed) {
  require_queries(oracle, "Shapley sampling");
  if (permutations == 0) throw std::invalid_argument("Shapley sampling needs at least one permutation");
  const std::size_t n = ds.dimension();
  ImportanceVector out;
  out.values.assign(n, 0.0);
  std::vector<std::size_t> perm(n);
  std::vector<double> record_phi(n);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    std::fill(record_phi.begin(), record_phi.end(), 0.0);
    for (std::size_t k = 0; k < permutations; ++k) {
      StreamRng rng(seed, (static_cast<std::uint64_t>(r) << 20) ^ k);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      const auto phi = shapley_marginals(oracle, ds[r].pattern, perm);
      for (std::size_t i = 0; i < n; ++i) record_phi[i] += phi[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.values[i] += ds[r].weight * std::abs(record_phi[i] / static_cast<double>(permutations));
    }
  }
  for (double& v : out.values) v /= ds.total_weight();
  return out;
}

}  // namespace actspec
