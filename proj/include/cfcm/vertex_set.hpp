#ifndef CFCM_VERTEX_SET_HPP
#define CFCM_VERTEX_SET_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace cfcm {

using VertexIndex = std::size_t;

/// Dense bitset over vertex indices. Iteration yields indices in increasing order.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<VertexIndex> items) {
    for (VertexIndex v : items) insert(v);
  }
  template <typename Range>
  static VertexSet from(const Range& items) {
    VertexSet s;
    for (auto v : items) s.insert(static_cast<VertexIndex>(v));
    return s;
  }

  bool contains(VertexIndex v) const {
    const std::size_t w = v / 64;
    return w < words_.size() && ((words_[w] >> (v % 64)) & 1u) != 0;
  }
  void insert(VertexIndex v) {
    const std::size_t w = v / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (v % 64);
  }
  void erase(VertexIndex v) {
    const std::size_t w = v / 64;
    if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (v % 64));
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  bool intersects(const VertexSet& other) const {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }
  VertexSet& operator|=(const VertexSet& other) {
    if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
    for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }

  /// Largest index + 1, or 0 when empty.
  std::size_t bound() const {
    for (std::size_t i = words_.size(); i-- > 0;)
      if (words_[i] != 0) return i * 64 + 64 - static_cast<std::size_t>(std::countl_zero(words_[i]));
    return 0;
  }

  std::vector<VertexIndex> to_vector() const {
    std::vector<VertexIndex> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    const std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t x = i < a.words_.size() ? a.words_[i] : 0;
      const std::uint64_t y = i < b.words_.size() ? b.words_[i] : 0;
      if (x != y) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace cfcm

#endif  // CFCM_VERTEX_SET_HPP
