#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace ringsat {

// Max-heap of variable indices ordered by score; ties go to the lower index
// so that runs are reproducible.
class ScoreHeap {
public:
  explicit ScoreHeap(const std::vector<double> &scores) : scores_(scores) {}

  void resize(size_t vars) { position_.resize(vars, absent); }
  bool empty() const { return heap_.empty(); }
  size_t size() const { return heap_.size(); }
  bool contains(uint32_t v) const { return v < position_.size() && position_[v] != absent; }

  void push(uint32_t v) {
    if (contains(v))
      return;
    position_[v] = static_cast<uint32_t>(heap_.size());
    heap_.push_back(v);
    up(position_[v]);
  }

  uint32_t top() const { return heap_.front(); }

  uint32_t pop() {
    const uint32_t v = heap_.front();
    const uint32_t last = heap_.back();
    heap_.pop_back();
    position_[v] = absent;
    if (!heap_.empty()) {
      heap_[0] = last;
      position_[last] = 0;
      down(0);
    }
    return v;
  }

  void remove(uint32_t v) {
    if (!contains(v))
      return;
    const uint32_t at = position_[v];
    const uint32_t last = heap_.back();
    heap_.pop_back();
    position_[v] = absent;
    if (at < heap_.size()) {
      heap_[at] = last;
      position_[last] = at;
      up(at);
      down(position_[last]);
    }
  }

  // Call after the score of 'v' increased.
  void increased(uint32_t v) {
    if (contains(v))
      up(position_[v]);
  }

  void clear() {
    for (uint32_t v : heap_)
      position_[v] = absent;
    heap_.clear();
  }

  size_t bytes() const { return heap_.capacity() * sizeof(uint32_t) + position_.capacity() * sizeof(uint32_t); }

private:
  static constexpr uint32_t absent = UINT32_MAX;

  bool before(uint32_t a, uint32_t b) const {
    return scores_[a] > scores_[b] || (scores_[a] == scores_[b] && a < b);
  }

  void up(uint32_t i) {
    const uint32_t v = heap_[i];
    while (i > 0) {
      const uint32_t parent = (i - 1) / 2;
      if (!before(v, heap_[parent]))
        break;
      heap_[i] = heap_[parent];
      position_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    position_[v] = i;
  }

  void down(uint32_t i) {
    const uint32_t v = heap_[i];
    const auto n = static_cast<uint32_t>(heap_.size());
    for (;;) {
      uint32_t child = 2 * i + 1;
      if (child >= n)
        break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child]))
        child++;
      if (!before(heap_[child], v))
        break;
      heap_[i] = heap_[child];
      position_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    position_[v] = i;
  }

  const std::vector<double> &scores_;
  std::vector<uint32_t> heap_;
  std::vector<uint32_t> position_;
};

/*------------------------------------------------------------------------*/

// Exponential moving average with initialization bias correction: after n
// updates the value equals sum_i alpha*beta^(n-i)*x_i / (1 - beta^n).
class Ema {
public:
  Ema() = default;
  explicit Ema(double window) : alpha_(1.0 / window), beta_(1.0 - 1.0 / window) {}

  void update(double x) {
    biased_ += alpha_ * (x - biased_);
    exp_ *= beta_;
  }
  double value() const { return exp_ < 1.0 ? biased_ / (1.0 - exp_) : 0.0; }

private:
  double alpha_ = 1.0;
  double beta_ = 0.0;
  double biased_ = 0.0;
  double exp_ = 1.0;
};

// Reluctant doubling sequence 1 1 2 1 1 2 4 1 1 2 ... (1-based index).
inline uint64_t luby(uint64_t i) {
  assert(i > 0);
  uint64_t k = 1;
  while ((uint64_t{1} << k) - 1 < i)
    k++;
  while (i != (uint64_t{1} << k) - 1) {
    i -= (uint64_t{1} << (k - 1)) - 1;
    k = 1;
    while ((uint64_t{1} << k) - 1 < i)
      k++;
  }
  return uint64_t{1} << (k - 1);
}

} // namespace ringsat
