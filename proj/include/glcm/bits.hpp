#ifndef GLCM_BITS_HPP_
#define GLCM_BITS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace glcm {

/// Fixed-width bitset sized at construction. Element universes in this
/// library are group carriers or atom sets, so sizes stay small (<= 4096)
/// and everything fits in a few words.
class Bits {
 public:
  Bits() : size_(0) {}
  explicit Bits(int size) : size_(size), words_((size + 63) / 64, 0) {}

  int size() const { return size_; }

  bool test(int i) const {
    return (words_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
  }

  void set(int i) { words_[static_cast<size_t>(i) >> 6] |= uint64_t(1) << (i & 63); }

  void reset(int i) { words_[static_cast<size_t>(i) >> 6] &= ~(uint64_t(1) << (i & 63)); }

  void clear() { std::fill(words_.begin(), words_.end(), uint64_t(0)); }

  int count() const {
    int c = 0;
    for (uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
  }

  bool any() const {
    for (uint64_t w : words_) {
      if (w) return true;
    }
    return false;
  }

  bool none() const { return !any(); }

  bool is_subset_of(Bits const& other) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  bool intersects(Bits const& other) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  Bits& operator|=(Bits const& other) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  Bits& operator&=(Bits const& other) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  /// Removes every member of \p other from this set.
  Bits& operator-=(Bits const& other) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
  }

  friend Bits operator|(Bits a, Bits const& b) { return a |= b; }
  friend Bits operator&(Bits a, Bits const& b) { return a &= b; }
  friend Bits operator-(Bits a, Bits const& b) { return a -= b; }

  Bits complement() const {
    Bits out(size_);
    for (size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }

  bool operator==(Bits const& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }
  bool operator!=(Bits const& other) const { return !(*this == other); }

  /// Lexicographic order on the word representation, used only to keep
  /// collections of sets in a canonical order.
  bool operator<(Bits const& other) const { return words_ < other.words_; }

  int first() const {
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i]) return static_cast<int>(i * 64 + __builtin_ctzll(words_[i]));
    }
    return -1;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < words_.size(); ++i) {
      uint64_t w = words_[i];
      while (w) {
        f(static_cast<int>(i * 64 + __builtin_ctzll(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(count()));
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  static Bits from_vector(int size, std::vector<int> const& elems) {
    Bits out(size);
    for (int e : elems) {
      if (e < 0 || e >= size) throw std::out_of_range("Bits: element out of range");
      out.set(e);
    }
    return out;
  }

  size_t hash() const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : words_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }

 private:
  void trim() {
    int extra = size_ & 63;
    if (extra != 0 && !words_.empty()) {
      words_.back() &= (uint64_t(1) << extra) - 1;
    }
  }

  int size_;
  std::vector<uint64_t> words_;
};

struct BitsHash {
  size_t operator()(Bits const& b) const { return b.hash(); }
};

}  // namespace glcm

#endif  // GLCM_BITS_HPP_
