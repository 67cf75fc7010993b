#include "actspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace actspec {

FourierTable::FourierTable(std::size_t n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  if (n_ > kMaxExactDimension) throw DimensionError("Fourier table dimension over guard rail");
  if (coeffs_.size() != (std::size_t{1} << n_)) throw DimensionError("Fourier table needs exactly 2^n coefficients");
}

double FourierTable::operator[](const SubsetMask& s) const {
  if (s.dimension() != n_) throw DimensionError("mask dimension differs from table dimension");
  return coeffs_[s.index()];
}

double FourierTable::total_weight() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return s;
}

FourierTable wht_exact(std::span<const double> values) {
  const std::size_t len = values.size();
  if (len == 0 || (len & (len - 1)) != 0) throw DimensionError("wht_exact: length must be a power of two");
  const auto n = static_cast<std::size_t>(std::countr_zero(len));
  if (n > kMaxExactDimension) throw DimensionError("wht_exact: n over guard rail of 24; use the estimator");
  std::vector<double> a(values.begin(), values.end());
  // For one coordinate, index 0 holds x_i = -1 and index 1 holds x_i = +1, so
  // the pair (lo, hi) maps to (lo + hi, hi - lo): the coefficients of 1 and x_i.
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t base = 0; base < len; base += h << 1) {
      for (std::size_t j = base; j < base + h; ++j) {
        const double lo = a[j];
        const double hi = a[j + h];
        a[j] = lo + hi;
        a[j + h] = hi - lo;
      }
    }
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  for (double& v : a) v *= scale;
  return FourierTable(n, std::move(a));
}

std::vector<double> cube_values(const ActivationDataset& ds) {
  const std::size_t n = ds.dimension();
  if (n > kMaxExactDimension) throw DimensionError("cube_values: n over guard rail");
  const std::size_t len = std::size_t{1} << n;
  std::vector<double> sum(len, 0.0);
  std::vector<double> weight(len, 0.0);
  for (const auto& r : ds.records()) {
    const auto idx = r.pattern.index();
    sum[idx] += r.weight * r.value;
    weight[idx] += r.weight;
  }
  for (std::size_t x = 0; x < len; ++x) {
    if (!(weight[x] > 0.0)) {
      throw std::invalid_argument("cube_values: dataset does not cover cube point " + std::to_string(x));
    }
    sum[x] /= weight[x];
  }
  return sum;
}

double projection_coefficient(const ActivationDataset& ds, const SubsetMask& s) {
  if (s.dimension() != ds.dimension()) throw DimensionError("projection_coefficient: dimension mismatch");
  if (ds.empty()) throw std::invalid_argument("projection_coefficient: empty dataset");
  const auto mask = s.words();
  double acc = 0.0;
  for (const auto& r : ds.records()) acc += r.weight * r.value * parity_words(r.pattern.words(), mask);
  return acc / ds.total_weight();
}

double projection_scale(const ActivationDataset& ds) {
  return std::ldexp(ds.total_weight(), -static_cast<int>(ds.dimension()));
}

double influence_exact(const FourierTable& table, std::size_t i) {
  if (i >= table.dimension()) throw DimensionError("influence_exact: variable index out of range");
  const std::uint64_t bit = std::uint64_t{1} << i;
  double acc = 0.0;
  const auto& c = table.coefficients();
  for (std::uint64_t s = 0; s < c.size(); ++s) {
    if (s & bit) acc += c[s] * c[s];
  }
  return acc;
}

std::vector<double> influences_exact(const FourierTable& table) {
  std::vector<double> out(table.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = influence_exact(table, i);
  return out;
}

namespace detail {

GroupIndex index_groups(const ActivationDataset& ds, const SubsetMask& j) {
  const std::size_t count = ds.size();
  const auto jw = j.words();
  const std::size_t words = jw.size();
  std::vector<std::uint64_t> keys(count * words);
  for (std::size_t r = 0; r < count; ++r) {
    const auto pw = ds[r].pattern.words();
    for (std::size_t w = 0; w < words; ++w) keys[r * words + w] = pw[w] & jw[w];
  }
  GroupIndex out;
  out.order.resize(count);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  auto key_less = [&](std::size_t a, std::size_t b) {
    for (std::size_t w = 0; w < words; ++w) {
      if (keys[a * words + w] != keys[b * words + w]) return keys[a * words + w] < keys[b * words + w];
    }
    return a < b;
  };
  std::sort(out.order.begin(), out.order.end(), key_less);
  auto same_key = [&](std::size_t a, std::size_t b) {
    return std::equal(keys.begin() + static_cast<std::ptrdiff_t>(a * words),
                      keys.begin() + static_cast<std::ptrdiff_t>((a + 1) * words),
                      keys.begin() + static_cast<std::ptrdiff_t>(b * words));
  };
  for (std::size_t k = 0; k < count; ++k) {
    if (k == 0 || !same_key(out.order[k - 1], out.order[k])) out.begin.push_back(k);
  }
  out.begin.push_back(count);
  return out;
}

GroupSums group_sums(const ActivationDataset& ds, const GroupIndex& groups, const SubsetMask& s) {
  const auto mask = s.words();
  GroupSums out;
  out.weight.assign(groups.group_count(), 0.0);
  out.signal.assign(groups.group_count(), 0.0);
  for (std::size_t g = 0; g < groups.group_count(); ++g) {
    for (std::size_t k = groups.begin[g]; k < groups.begin[g + 1]; ++k) {
      const Record& r = ds[groups.order[k]];
      out.weight[g] += r.weight;
      out.signal[g] += r.weight * r.value * parity_words(r.pattern.words(), mask);
    }
  }
  return out;
}

}  // namespace detail

namespace {

void check_bucket_args(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask) {
  if (s.dimension() != ds.dimension() || i_mask.dimension() != ds.dimension()) {
    throw DimensionError("bucket weight: dimension mismatch");
  }
  if (!s.is_subset_of(i_mask)) throw std::invalid_argument("bucket weight: S must be a subset of I");
}

}  // namespace

double bucket_weight_exact(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask) {
  check_bucket_args(ds, s, i_mask);
  const auto groups = detail::index_groups(ds, i_mask.complement());
  const auto sums = detail::group_sums(ds, groups, s);
  // P(g) m_g^2 = (W_g / W) (G_g / W_g)^2 = G_g^2 / (W_g W)
  double acc = 0.0;
  for (std::size_t g = 0; g < sums.weight.size(); ++g) {
    if (sums.weight[g] > 0.0) acc += sums.signal[g] * sums.signal[g] / sums.weight[g];
  }
  return acc / ds.total_weight();
}

double lattice_weight_exact(const ActivationDataset& ds, const SubsetMask& s, const SubsetMask& i_mask) {
  check_bucket_args(ds, s, i_mask);
  const SubsetMask j = i_mask.complement();
  const auto groups = detail::index_groups(ds, j);
  const auto sums = detail::group_sums(ds, groups, s);
  // P(g)^2 m_g^2 = (G_g / W)^2
  double acc = 0.0;
  for (double g : sums.signal) acc += g * g;
  const double total = ds.total_weight();
  return std::ldexp(acc / (total * total), static_cast<int>(j.cardinality()));
}

void write_fourier_csv(const FourierTable& table, std::ostream& os) {
  os << "mask,coefficient\n";
  const auto prec = os.precision(17);
  for (std::uint64_t s = 0; s < table.coefficients().size(); ++s) {
    os << SubsetMask::from_index(table.dimension(), s).bit_string() << ',' << table.at_index(s) << '\n';
  }
  os.precision(prec);
}

}  // namespace actspec
