#ifndef CIEL_BITSET_HPP
#define CIEL_BITSET_HPP

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace ciel {

// Fixed-size dynamic bit set. Used for world sets, agent sets and formula
// membership masks throughout the library.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~0ull : 0ull) {
    trim();
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const {
    assert(i < size_);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value = true) {
    assert(i < size_);
    if (value)
      words_[i >> 6] |= (1ull << (i & 63));
    else
      words_[i >> 6] &= ~(1ull << (i & 63));
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }
  bool all() const { return count() == size_; }

  bool is_subset_of(const Bitset& other) const {
    assert(size_ == other.size_);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    assert(size_ == o.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    assert(size_ == o.size_);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  Bitset complement() const {
    Bitset r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  bool operator==(const Bitset& o) const {
    return size_ == o.size_ && words_ == o.words_;
  }
  bool operator!=(const Bitset& o) const { return !(*this == o); }

  // Lexicographic on the word vector; only used to key ordered maps.
  bool operator<(const Bitset& o) const {
    if (size_ != o.size_) return size_ < o.size_;
    return words_ < o.words_;
  }

  std::size_t hash() const {
    std::size_t h = size_;
    for (auto w : words_) h = h * 1099511628211ull + static_cast<std::size_t>(w);
    return h;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        unsigned b = static_cast<unsigned>(std::countr_zero(w));
        f(k * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (1ull << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ciel

template <>
struct std::hash<ciel::Bitset> {
  std::size_t operator()(const ciel::Bitset& b) const { return b.hash(); }
};

#endif  // CIEL_BITSET_HPP
