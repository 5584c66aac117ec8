#ifndef CHEAPTALK_INDEX_SET_HPP_
#define CHEAPTALK_INDEX_SET_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "cheaptalk/rational.hpp"

namespace cheaptalk {

inline constexpr std::size_t kDefaultMaxIndexSize = 1000000;

// Index set {1..X+b} with b dummy positions. For each key (one rational
// distribution), every non-dummy index is assigned a support position q so
// that exactly p_q * X indices carry q.
class IndexSet {
 public:
  static constexpr int kNull = -1;

  IndexSet() = default;

  std::size_t total() const { return total_; }
  std::size_t non_dummy() const { return x_; }
  std::size_t dummy_count() const { return total_ - x_; }
  std::size_t keys() const { return assign_.size(); }
  bool is_dummy(std::size_t x) const;  // x is 1-based
  // Sorted 1-based dummy indices.
  const std::vector<std::size_t>& dummies() const { return dummies_; }
  // Support position for (x, key) or kNull on a dummy. Throws UsageError when
  // x is outside 1..total or key is unknown.
  int lookup(std::size_t x, std::size_t key) const;
  // Indices per support position for one key.
  std::vector<std::size_t> counts(std::size_t key) const;
  const std::vector<int>& assignment(std::size_t key) const { return assign_.at(key); }

  friend IndexSet build_index_set(const std::vector<RationalVector>&, std::uint64_t,
                                  std::optional<std::uint64_t>, std::uint64_t, std::size_t);

 private:
  std::size_t total_ = 0;
  std::size_t x_ = 0;
  std::vector<std::size_t> dummies_;
  std::vector<bool> dummy_mask_;
  std::vector<std::vector<int>> assign_;  // [key][x - 1]
};

// Default dummy count for X: ceil(X/10), capped at floor(X/5) so a draw
// repeats at most 1.2 times on average.
std::uint64_t default_dummy_count(std::uint64_t x);

// X = multiplier * lcm of all denominators. Dummy positions are sampled
// without replacement; per key the non-dummy positions are shuffled and cut
// into contiguous blocks of the required sizes. Throws UsageError when the
// multiplier is zero, a distribution is invalid, or X + b exceeds max_size.
IndexSet build_index_set(const std::vector<RationalVector>& distributions,
                         std::uint64_t multiplier, std::optional<std::uint64_t> dummy_count,
                         std::uint64_t seed, std::size_t max_size = kDefaultMaxIndexSize);

}  // namespace cheaptalk

#endif  // CHEAPTALK_INDEX_SET_HPP_
