#pragma once

#include <stdexcept>
#include <vector>

#include "gibbsocc/rational.hpp"

namespace gibbsocc {

// Compositions of k into n non-negative parts, iterated without recursion
// in descending lexicographic order: (k,0,...,0), (k-1,1,0,...), ..., (0,...,0,k).
// The ordering is part of the contract; fixtures depend on it.
class CompositionIter {
 public:
  CompositionIter(int k, int n) : k_(k), n_(n), c_(std::size_t(n), 0), done_(false) {
    if (k < 0 || n < 1) throw std::invalid_argument("CompositionIter: need k >= 0, n >= 1");
    c_[0] = k;
  }

  bool done() const { return done_; }
  const std::vector<int>& value() const { return c_; }

  void next() {
    // move one unit right from the rightmost positive entry before the last,
    // folding everything to its right back onto its successor
    int j = n_ - 2;
    while (j >= 0 && c_[std::size_t(j)] == 0) --j;
    if (j < 0) {
      done_ = true;
      return;
    }
    int suffix = 0;
    for (int i = j + 1; i < n_; ++i) {
      suffix += c_[std::size_t(i)];
      c_[std::size_t(i)] = 0;
    }
    c_[std::size_t(j)] -= 1;
    c_[std::size_t(j) + 1] = suffix + 1;
  }

 private:
  int k_, n_;
  std::vector<int> c_;
  bool done_;
};

// Compositions of k into exactly p positive parts (k >= p >= 1), same order.
class PositiveCompositionIter {
 public:
  PositiveCompositionIter(int k, int p) : inner_(k - p, p), p_(p), out_(std::size_t(p), 0) {
    if (p < 1 || k < p) throw std::invalid_argument("PositiveCompositionIter: need k >= p >= 1");
    refresh();
  }
  bool done() const { return inner_.done(); }
  const std::vector<int>& value() const { return out_; }
  void next() {
    inner_.next();
    if (!inner_.done()) refresh();
  }

 private:
  void refresh() {
    const auto& v = inner_.value();
    for (int i = 0; i < p_; ++i) out_[std::size_t(i)] = v[std::size_t(i)] + 1;
  }
  CompositionIter inner_;
  int p_;
  std::vector<int> out_;
};

inline BigInt composition_count(int k, int n) { return big_binomial(std::uint64_t(k + n - 1), std::uint64_t(n - 1)); }

// Integer partitions of k as non-increasing part lists, iterated in
// descending lexicographic order: (k), (k-1,1), ..., (1,...,1).
// aff() exposes the multiplicity vector a with a[i-1] = #{parts == i}.
class PartitionIter {
 public:
  explicit PartitionIter(int k) : k_(k), parts_{k}, done_(k < 1) {
    if (k < 0) throw std::invalid_argument("PartitionIter: need k >= 0");
    if (k == 0) done_ = true;
  }

  bool done() const { return done_; }
  const std::vector<int>& parts() const { return parts_; }
  int part_count() const { return int(parts_.size()); }

  std::vector<int> aff() const {
    std::vector<int> a(std::size_t(k_), 0);
    for (int part : parts_) a[std::size_t(part) - 1] += 1;
    return a;
  }

  void next() {
    // find the rightmost part greater than 1 and fold the tail after it
    int j = int(parts_.size()) - 1;
    while (j >= 0 && parts_[std::size_t(j)] == 1) --j;
    if (j < 0) {
      done_ = true;
      return;
    }
    int rem = int(parts_.size()) - 1 - j;  // number of trailing 1s
    parts_.resize(std::size_t(j) + 1);
    parts_[std::size_t(j)] -= 1;
    rem += 1;
    const int val = parts_[std::size_t(j)];
    while (rem > val) {
      parts_.push_back(val);
      rem -= val;
    }
    if (rem > 0) parts_.push_back(rem);
  }

 private:
  int k_;
  std::vector<int> parts_;
  bool done_;
};

}  // namespace gibbsocc
