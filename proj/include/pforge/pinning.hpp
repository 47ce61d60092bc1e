#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "pforge/product_shift.hpp"
#include "pforge/rational.hpp"

namespace pforge::pinning {

/// Membership in L(Z) = union over the gamma grid of L(Z_gamma).
class ZOracle {
 public:
  explicit ZOracle(std::vector<std::shared_ptr<product::ZGamma>> members);
  bool contains(const product::Word& word, std::size_t lo, std::size_t hi) const;
  /// Grid indices whose language contains word[lo, hi).
  std::vector<std::size_t> witnesses(const product::Word& word, std::size_t lo, std::size_t hi) const;
  const std::vector<std::shared_ptr<product::ZGamma>>& members() const { return members_; }
  const product::ProductAlphabet& alphabet() const { return members_.front()->alphabet(); }

 private:
  std::vector<std::shared_ptr<product::ZGamma>> members_;
};

struct Segment {
  std::size_t start = 0;
  std::size_t length = 0;
  /// Component weights: x-weight, y0-weight, then y1..ym.
  std::vector<int> weights;
  /// The last segment of a word ends at the word boundary, not at a failure.
  bool terminal = false;
};

struct PinRecord {
  std::size_t word_length = 0;
  std::vector<std::size_t> pins;
  std::vector<Segment> segments;
};

/// Greedy left-to-right pins: k_0 = start, k_{i+1} is the least index with
/// word[k_i..k_{i+1}] (inclusive) outside L(Z).
PinRecord greedy_pins(const product::Word& word, const ZOracle& oracle, std::size_t start = 0);

using WeightKey = std::pair<std::size_t, std::vector<int>>;

struct PartitionStats {
  std::uint64_t segments = 0;
  std::uint64_t pins = 0;
  std::uint64_t total_length = 0;
  std::map<std::size_t, std::uint64_t> q_counts;
  std::map<WeightKey, std::uint64_t> r_counts;

  double q(std::size_t j) const;
  double r(std::size_t j, const std::vector<int>& weights) const;
  double mean_return() const;
};

PartitionStats partition_stats(const std::vector<PinRecord>& records);

struct GammaCell {
  /// Open interval ((n_k - 1)/j, (n_k + 1)/j) for each slope component.
  std::vector<std::pair<Rational, Rational>> cells;
  std::vector<std::size_t> witnesses;
};

GammaCell gamma_locate(const product::Word& segment, const ZOracle& oracle);

}  // namespace pforge::pinning
