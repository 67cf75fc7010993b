#include "actspec/bits.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace actspec {
namespace detail {

std::vector<std::uint8_t> PackedBits::to_bytes() const {
  std::vector<std::uint8_t> out((n_ + 7) / 8, 0);
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = static_cast<std::uint8_t>(words_[b >> 3] >> ((b & 7) * 8));
  }
  return out;
}

void PackedBits::load_bytes(std::span<const std::uint8_t> bytes) {
  std::fill(words_.begin(), words_.end(), 0);
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    words_[b >> 3] |= std::uint64_t{bytes[b]} << ((b & 7) * 8);
  }
}

std::strong_ordering operator<=>(const PackedBits& a, const PackedBits& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  // Lexicographic on coordinates 0, 1, 2, ... with a set bit ordering after a clear one.
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff != 0) {
      const std::uint64_t low = diff & (~diff + 1);
      return (a.words_[w] & low) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

std::uint64_t hash_words(std::span<const std::uint64_t> words) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ words.size();
  for (auto w : words) {
    std::uint64_t z = w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return h;
}

}  // namespace detail

namespace {

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) {
    throw DimensionError("variable index " + std::to_string(i) + " out of range for n=" + std::to_string(n));
  }
}

}  // namespace

SubsetMask::SubsetMask(std::size_t n, std::initializer_list<std::size_t> members) : bits_(n) {
  for (auto i : members) insert(i);
}

SubsetMask SubsetMask::from_members(std::size_t n, std::span<const std::size_t> members) {
  SubsetMask m(n);
  for (auto i : members) m.insert(i);
  return m;
}

SubsetMask SubsetMask::full(std::size_t n) {
  SubsetMask m(n);
  auto words = m.bits_.mutable_words();
  std::fill(words.begin(), words.end(), ~std::uint64_t{0});
  m.bits_.clear_tail();
  return m;
}

SubsetMask SubsetMask::from_index(std::size_t n, std::uint64_t index) {
  if (n > 64) throw DimensionError("SubsetMask::from_index requires n <= 64");
  if (n < 64 && (index >> n) != 0) throw DimensionError("mask index has bits at positions >= n");
  SubsetMask m(n);
  if (n > 0) m.bits_.mutable_words()[0] = index;
  return m;
}

SubsetMask SubsetMask::from_bit_string(std::string_view text) {
  SubsetMask m(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      m.insert(i);
    } else if (text[i] != '0') {
      throw std::invalid_argument("mask bit string may only contain '0' and '1'");
    }
  }
  return m;
}

bool SubsetMask::contains(std::size_t i) const {
  check_index(i, dimension());
  return bits_.test(i);
}

void SubsetMask::insert(std::size_t i) {
  check_index(i, dimension());
  bits_.assign(i, true);
}

void SubsetMask::erase(std::size_t i) {
  check_index(i, dimension());
  bits_.assign(i, false);
}

std::vector<std::size_t> SubsetMask::members() const {
  std::vector<std::size_t> out;
  out.reserve(cardinality());
  const auto words = bits_.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t x = words[w];
    while (x != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

bool SubsetMask::is_subset_of(const SubsetMask& other) const {
  check_dimension(other);
  const auto a = words();
  const auto b = other.words();
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (a[w] & ~b[w]) return false;
  }
  return true;
}

SubsetMask SubsetMask::complement() const {
  SubsetMask m(dimension());
  auto out = m.bits_.mutable_words();
  const auto in = words();
  for (std::size_t w = 0; w < in.size(); ++w) out[w] = ~in[w];
  m.bits_.clear_tail();
  return m;
}

std::uint64_t SubsetMask::index() const {
  if (dimension() > 64) throw DimensionError("SubsetMask::index requires n <= 64");
  return dimension() == 0 ? 0 : words()[0];
}

std::string SubsetMask::bit_string() const {
  std::string s(dimension(), '0');
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (bits_.test(i)) s[i] = '1';
  }
  return s;
}

std::string SubsetMask::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto i : members()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

void SubsetMask::check_dimension(const SubsetMask& other) const {
  if (dimension() != other.dimension()) {
    throw DimensionError("subset masks of different dimension (" + std::to_string(dimension()) + " vs " +
                         std::to_string(other.dimension()) + ")");
  }
}

SubsetMask& SubsetMask::operator^=(const SubsetMask& other) {
  check_dimension(other);
  auto a = bits_.mutable_words();
  const auto b = other.words();
  for (std::size_t w = 0; w < a.size(); ++w) a[w] ^= b[w];
  return *this;
}

SubsetMask& SubsetMask::operator|=(const SubsetMask& other) {
  check_dimension(other);
  auto a = bits_.mutable_words();
  const auto b = other.words();
  for (std::size_t w = 0; w < a.size(); ++w) a[w] |= b[w];
  return *this;
}

SubsetMask& SubsetMask::operator&=(const SubsetMask& other) {
  check_dimension(other);
  auto a = bits_.mutable_words();
  const auto b = other.words();
  for (std::size_t w = 0; w < a.size(); ++w) a[w] &= b[w];
  return *this;
}

BitPattern BitPattern::from_signs(std::span<const int> signs) {
  BitPattern p(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) p.set_sign(i, signs[i]);
  return p;
}

BitPattern BitPattern::from_signs(std::initializer_list<int> signs) {
  return from_signs(std::span<const int>(signs.begin(), signs.size()));
}

BitPattern BitPattern::from_bytes(std::size_t n, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != (n + 7) / 8) {
    throw DimensionError("pattern needs " + std::to_string((n + 7) / 8) + " bytes for n=" + std::to_string(n));
  }
  if (n % 8 != 0 && !bytes.empty() && (bytes.back() >> (n % 8)) != 0) {
    throw std::invalid_argument("pattern has nonzero bits past dimension n");
  }
  BitPattern p(n);
  p.bits_.load_bytes(bytes);
  return p;
}

BitPattern BitPattern::from_index(std::size_t n, std::uint64_t index) {
  if (n > 64) throw DimensionError("BitPattern::from_index requires n <= 64");
  if (n < 64 && (index >> n) != 0) throw DimensionError("pattern index has bits at positions >= n");
  BitPattern p(n);
  if (n > 0) p.bits_.mutable_words()[0] = index;
  return p;
}

void BitPattern::set_sign(std::size_t i, int sign) {
  check_index(i, dimension());
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  bits_.assign(i, sign == 1);
}

std::vector<int> BitPattern::signs() const {
  std::vector<int> out(dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sign(i);
  return out;
}

std::uint64_t BitPattern::index() const {
  if (dimension() > 64) throw DimensionError("BitPattern::index requires n <= 64");
  return dimension() == 0 ? 0 : words()[0];
}

BitPattern BitPattern::spliced(const BitPattern& donor, const SubsetMask& take) const {
  if (donor.dimension() != dimension() || take.dimension() != dimension()) {
    throw DimensionError("splice operands differ in dimension");
  }
  BitPattern out(dimension());
  auto o = out.bits_.mutable_words();
  const auto a = words();
  const auto b = donor.words();
  const auto m = take.words();
  for (std::size_t w = 0; w < o.size(); ++w) o[w] = (b[w] & m[w]) | (a[w] & ~m[w]);
  return out;
}

BitPattern BitPattern::restricted(const SubsetMask& keep) const {
  if (keep.dimension() != dimension()) throw DimensionError("restriction mask differs in dimension");
  BitPattern out(dimension());
  auto o = out.bits_.mutable_words();
  const auto a = words();
  const auto m = keep.words();
  for (std::size_t w = 0; w < o.size(); ++w) o[w] = a[w] & m[w];
  return out;
}

int parity(const BitPattern& pattern, const SubsetMask& s) {
  if (pattern.dimension() != s.dimension()) {
    throw DimensionError("parity: pattern has n=" + std::to_string(pattern.dimension()) + " but mask has n=" +
                         std::to_string(s.dimension()));
  }
  return parity_words(pattern.words(), s.words());
}

}  // namespace actspec
