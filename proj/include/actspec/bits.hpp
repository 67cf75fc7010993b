#pragma once

// Packed sign patterns and subset masks over n Boolean coordinates.
//
// Sign encoding: bit i set means x_i = +1, bit i clear means x_i = -1, bits
// are LSB-first within bytes (and within 64-bit words). With that layout the
// parity of a pattern over a subset S is
//
//     x^S = prod_{i in S} x_i = (-1)^popcount(~bits & mask)
//
// because every coordinate of S that carries a zero bit contributes a -1.

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actspec {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

// Fixed-width bit storage shared by patterns and masks. Bits past n are kept
// zero so that word-wise comparisons and hashing are well defined.
class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(std::size_t n) : n_(n), words_(word_count(n), 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void assign(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::uint64_t tail_mask() const {
    const std::size_t r = n_ & 63;
    return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
  }
  void clear_tail() {
    if (!words_.empty()) words_.back() &= tail_mask();
  }

  std::vector<std::uint8_t> to_bytes() const;
  void load_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const PackedBits&, const PackedBits&) = default;
  friend std::strong_ordering operator<=>(const PackedBits& a, const PackedBits& b);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

std::uint64_t hash_words(std::span<const std::uint64_t> words);

}  // namespace detail

/// A subset S of [n] = {0, ..., n-1}; indexes Fourier coefficients.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(std::size_t n) : bits_(n) {}
  SubsetMask(std::size_t n, std::initializer_list<std::size_t> members);
  static SubsetMask from_members(std::size_t n, std::span<const std::size_t> members);
  static SubsetMask full(std::size_t n);
  /// Low 64 bits as an index; requires n <= 64.
  static SubsetMask from_index(std::size_t n, std::uint64_t index);
  /// Character i is '1' when variable i is a member.
  static SubsetMask from_bit_string(std::string_view text);

  std::size_t dimension() const { return bits_.size(); }
  bool contains(std::size_t i) const;
  void insert(std::size_t i);
  void erase(std::size_t i);
  std::size_t cardinality() const { return bits_.count(); }
  bool empty() const { return cardinality() == 0; }
  std::vector<std::size_t> members() const;
  bool is_subset_of(const SubsetMask& other) const;
  SubsetMask complement() const;
  std::uint64_t index() const;
  std::string bit_string() const;
  /// Members as "{0,3}" using zero-based indices.
  std::string to_string() const;

  SubsetMask& operator^=(const SubsetMask& other);
  SubsetMask& operator|=(const SubsetMask& other);
  SubsetMask& operator&=(const SubsetMask& other);
  friend SubsetMask operator^(SubsetMask a, const SubsetMask& b) { return a ^= b; }
  friend SubsetMask operator|(SubsetMask a, const SubsetMask& b) { return a |= b; }
  friend SubsetMask operator&(SubsetMask a, const SubsetMask& b) { return a &= b; }

  std::span<const std::uint64_t> words() const { return bits_.words(); }

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
  friend std::strong_ordering operator<=>(const SubsetMask& a, const SubsetMask& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  void check_dimension(const SubsetMask& other) const;
  detail::PackedBits bits_;
};

/// A point of {-1,+1}^n.
class BitPattern {
 public:
  BitPattern() = default;
  /// All coordinates -1.
  explicit BitPattern(std::size_t n) : bits_(n) {}
  static BitPattern from_signs(std::span<const int> signs);
  static BitPattern from_signs(std::initializer_list<int> signs);
  /// ceil(n/8) bytes, LSB-first; trailing bits past n must be zero.
  static BitPattern from_bytes(std::size_t n, std::span<const std::uint8_t> bytes);
  /// Table position convention: bit i of index encodes variable i.
  static BitPattern from_index(std::size_t n, std::uint64_t index);

  std::size_t dimension() const { return bits_.size(); }
  int sign(std::size_t i) const { return bits_.test(i) ? 1 : -1; }
  bool positive(std::size_t i) const { return bits_.test(i); }
  void set_sign(std::size_t i, int sign);
  void flip(std::size_t i) { bits_.assign(i, !bits_.test(i)); }
  std::vector<int> signs() const;
  std::size_t byte_size() const { return (dimension() + 7) / 8; }
  std::vector<std::uint8_t> to_bytes() const { return bits_.to_bytes(); }
  std::uint64_t index() const;

  /// Takes coordinates in `take` from `donor` and the rest from *this.
  BitPattern spliced(const BitPattern& donor, const SubsetMask& take) const;
  /// Coordinates outside `keep` are cleared (set to -1).
  BitPattern restricted(const SubsetMask& keep) const;

  std::span<const std::uint64_t> words() const { return bits_.words(); }
  std::size_t hash() const { return static_cast<std::size_t>(detail::hash_words(words())); }

  friend bool operator==(const BitPattern&, const BitPattern&) = default;
  friend std::strong_ordering operator<=>(const BitPattern& a, const BitPattern& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  detail::PackedBits bits_;
};

struct BitPatternHash {
  std::size_t operator()(const BitPattern& p) const { return p.hash(); }
};

/// prod_{i in S} x_i; +1 for the empty set.
int parity(const BitPattern& pattern, const SubsetMask& s);

/// Parity over raw words without dimension checks (hot loops).
inline int parity_words(std::span<const std::uint64_t> pattern, std::span<const std::uint64_t> mask) {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < mask.size(); ++w) acc ^= ~pattern[w] & mask[w];
  return (std::popcount(acc) & 1) ? -1 : 1;
}

}  // namespace actspec
