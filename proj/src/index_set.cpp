#include "cheaptalk/index_set.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

bool IndexSet::is_dummy(std::size_t x) const {
  if (x < 1 || x > total_) throw UsageError("index " + std::to_string(x) + " out of range");
  return dummy_mask_[x - 1];
}

int IndexSet::lookup(std::size_t x, std::size_t key) const {
  if (x < 1 || x > total_) throw UsageError("index " + std::to_string(x) + " out of range");
  if (key >= assign_.size()) throw UsageError("unknown index-set key " + std::to_string(key));
  return assign_[key][x - 1];
}

std::vector<std::size_t> IndexSet::counts(std::size_t key) const {
  const auto& row = assign_.at(key);
  int width = 0;
  for (int q : row) width = std::max(width, q + 1);
  std::vector<std::size_t> out(width, 0);
  for (int q : row) {
    if (q != kNull) ++out[q];
  }
  return out;
}

std::uint64_t default_dummy_count(std::uint64_t x) {
  return std::min((x + 9) / 10, x / 5);
}

IndexSet build_index_set(const std::vector<RationalVector>& distributions,
                         std::uint64_t multiplier, std::optional<std::uint64_t> dummy_count,
                         std::uint64_t seed, std::size_t max_size) {
  if (multiplier < 1) throw UsageError("index set multiplier must be at least 1");
  if (distributions.empty()) throw UsageError("index set needs at least one distribution");
  RationalVector all;
  for (const auto& dist : distributions) {
    if (dist.empty()) throw UsageError("index set: empty distribution");
    ExactRational total = 0;
    for (const auto& v : dist) {
      if (v.sign() < 0) throw UsageError("index set: negative probability");
      total += v;
    }
    if (total != ExactRational(1)) throw UsageError("index set: distribution does not sum to 1");
    all.insert(all.end(), dist.begin(), dist.end());
  }
  const BigInt x_big = lcm_denominators(all) * multiplier;
  if (x_big > max_size) {
    throw UsageError("index set size X = " + x_big.str() + " exceeds the cap " +
                     std::to_string(max_size));
  }
  const auto x = x_big.convert_to<std::uint64_t>();
  const std::uint64_t b = dummy_count ? *dummy_count : default_dummy_count(x);
  if (x + b > max_size) {
    throw UsageError("index set size X + b = " + std::to_string(x + b) + " exceeds the cap " +
                     std::to_string(max_size));
  }

  IndexSet ix;
  ix.total_ = x + b;
  ix.x_ = x;
  Rng rng(derive_seed(seed, "index-set"));

  std::vector<std::size_t> positions(ix.total_);
  std::iota(positions.begin(), positions.end(), std::size_t{1});
  rng.shuffle(positions);
  ix.dummies_.assign(positions.begin(), positions.begin() + b);
  std::sort(ix.dummies_.begin(), ix.dummies_.end());
  ix.dummy_mask_.assign(ix.total_, false);
  for (std::size_t d : ix.dummies_) ix.dummy_mask_[d - 1] = true;

  std::vector<std::size_t> live;
  for (std::size_t i = 1; i <= ix.total_; ++i) {
    if (!ix.dummy_mask_[i - 1]) live.push_back(i);
  }
  for (const auto& dist : distributions) {
    std::vector<int> row(ix.total_, IndexSet::kNull);
    rng.shuffle(live);
    std::size_t next = 0;
    for (std::size_t q = 0; q < dist.size(); ++q) {
      const ExactRational count = dist[q] * ExactRational(x_big);
      const auto n = count.numerator().convert_to<std::size_t>();
      for (std::size_t k = 0; k < n; ++k) row[live[next++] - 1] = static_cast<int>(q);
    }
    ix.assign_.push_back(std::move(row));
  }
  return ix;
}

}  // namespace cheaptalk
