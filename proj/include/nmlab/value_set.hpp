#ifndef NMLAB_VALUE_SET_HPP
#define NMLAB_VALUE_SET_HPP

#include <cassert>
#include <cstdint>
#include <cstring>
#include <memory>
#include <vector>

namespace nmlab {

/// Index of a truth value inside an Nmatrix (position in the value list).
using Value = int;

/// A subset of a fixed finite value universe, stored as a bitset.
///
/// Interpretation cells, designated sets and formula images are all small
/// subsets of the same universe, and the evaluators spend most of their time
/// copying and uniting them, so sets up to 128 values live inline with no
/// heap traffic.
class ValueSet {
public:
  ValueSet() : size_(0), words_(0) { inl_[0] = inl_[1] = 0; }

  explicit ValueSet(int universe, bool full = false)
      : size_(universe), words_((universe + 63) / 64) {
    assert(universe >= 0);
    if (words_ > kInline) heap_.reset(new std::uint64_t[words_]());
    inl_[0] = inl_[1] = 0;
    if (full) fill();
  }

  static ValueSet single(int universe, Value v) {
    ValueSet s(universe);
    s.set(v);
    return s;
  }

  static ValueSet of(int universe, std::initializer_list<Value> vs) {
    ValueSet s(universe);
    for (Value v : vs) s.set(v);
    return s;
  }

  ValueSet(const ValueSet& o) : size_(o.size_), words_(o.words_) {
    if (words_ > kInline) {
      heap_.reset(new std::uint64_t[words_]);
      std::memcpy(heap_.get(), o.heap_.get(), words_ * 8);
    } else {
      inl_[0] = o.inl_[0];
      inl_[1] = o.inl_[1];
    }
  }
  ValueSet(ValueSet&&) noexcept = default;
  ValueSet& operator=(const ValueSet& o) {
    if (this != &o) { ValueSet tmp(o); *this = std::move(tmp); }
    return *this;
  }
  ValueSet& operator=(ValueSet&&) noexcept = default;

  int universe() const { return size_; }

  void set(Value v) {
    assert(v >= 0 && v < size_);
    data()[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void reset(Value v) {
    assert(v >= 0 && v < size_);
    data()[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }
  bool test(Value v) const {
    assert(v >= 0 && v < size_);
    return (data()[v >> 6] >> (v & 63)) & 1;
  }

  void clear() {
    for (int i = 0; i < words_; ++i) data()[i] = 0;
  }
  void fill() {
    for (int i = 0; i < words_; ++i) data()[i] = ~std::uint64_t{0};
    trim();
  }

  int count() const {
    int c = 0;
    for (int i = 0; i < words_; ++i) c += __builtin_popcountll(data()[i]);
    return c;
  }
  bool empty() const {
    for (int i = 0; i < words_; ++i)
      if (data()[i]) return false;
    return true;
  }
  bool is_full() const { return count() == size_; }

  /// True iff the set holds exactly one value; stores it in `out` if given.
  bool is_singleton(Value* out = nullptr) const {
    int seen = -1;
    for (int i = 0; i < words_; ++i) {
      std::uint64_t w = data()[i];
      if (!w) continue;
      if (seen >= 0 || (w & (w - 1))) return false;
      seen = i * 64 + __builtin_ctzll(w);
    }
    if (seen < 0) return false;
    if (out) *out = seen;
    return true;
  }

  void unite(const ValueSet& o) {
    assert(size_ == o.size_);
    for (int i = 0; i < words_; ++i) data()[i] |= o.data()[i];
  }
  void intersect(const ValueSet& o) {
    assert(size_ == o.size_);
    for (int i = 0; i < words_; ++i) data()[i] &= o.data()[i];
  }
  void subtract(const ValueSet& o) {
    assert(size_ == o.size_);
    for (int i = 0; i < words_; ++i) data()[i] &= ~o.data()[i];
  }

  bool subset_of(const ValueSet& o) const {
    assert(size_ == o.size_);
    for (int i = 0; i < words_; ++i)
      if (data()[i] & ~o.data()[i]) return false;
    return true;
  }
  bool intersects(const ValueSet& o) const {
    assert(size_ == o.size_);
    for (int i = 0; i < words_; ++i)
      if (data()[i] & o.data()[i]) return true;
    return false;
  }

  bool operator==(const ValueSet& o) const {
    if (size_ != o.size_) return false;
    for (int i = 0; i < words_; ++i)
      if (data()[i] != o.data()[i]) return false;
    return true;
  }
  bool operator!=(const ValueSet& o) const { return !(*this == o); }

  /// First member, or -1 when empty.
  Value first() const { return next(-1); }

  /// Smallest member greater than `after`, or -1 when exhausted.
  Value next(Value after) const {
    int start = after + 1;
    if (start >= size_) return -1;
    int wi = start >> 6;
    std::uint64_t w = data()[wi] & (~std::uint64_t{0} << (start & 63));
    while (true) {
      if (w) return wi * 64 + __builtin_ctzll(w);
      if (++wi >= words_) return -1;
      w = data()[wi];
    }
  }

  std::vector<Value> members() const {
    std::vector<Value> out;
    out.reserve(count());
    for (Value v = first(); v >= 0; v = next(v)) out.push_back(v);
    return out;
  }

private:
  static constexpr int kInline = 2;

  std::uint64_t* data() { return words_ > kInline ? heap_.get() : inl_; }
  const std::uint64_t* data() const {
    return words_ > kInline ? heap_.get() : inl_;
  }
  void trim() {
    if (words_ == 0) return;
    int used = size_ & 63;
    if (used) data()[words_ - 1] &= (std::uint64_t{1} << used) - 1;
  }

  int size_;
  int words_;
  std::uint64_t inl_[kInline];
  std::unique_ptr<std::uint64_t[]> heap_;
};

} // namespace nmlab

#endif
