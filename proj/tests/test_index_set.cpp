#include <doctest.h>

#include <random>
#include <set>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/index_set.hpp"
#include "oracles.hpp"

using namespace cheaptalk;

namespace {

ExactRational q(long n, long d = 1) { return ExactRational(BigInt(n), BigInt(d)); }

// Exhaustive tally of support positions per key.
std::vector<std::size_t> tally(const IndexSet& ix, std::size_t key, std::size_t support) {
  std::vector<std::size_t> out(support, 0);
  for (std::size_t x = 1; x <= ix.total(); ++x) {
    const int pos = ix.lookup(x, key);
    if (pos != IndexSet::kNull) ++out.at(pos);
  }
  return out;
}

}  // namespace

TEST_CASE("two-distribution example") {
  const auto ix = build_index_set({{q(1, 3), q(1, 3), q(1, 3)}, {q(1, 2), q(1, 3), q(1, 6)}}, 1, 2, 7);
  CHECK(ix.non_dummy() == 6);
  CHECK(ix.total() == 8);
  CHECK(ix.dummy_count() == 2);
  CHECK(tally(ix, 0, 3) == std::vector<std::size_t>{2, 2, 2});
  CHECK(tally(ix, 1, 3) == std::vector<std::size_t>{3, 2, 1});
  CHECK(ix.counts(1) == std::vector<std::size_t>{3, 2, 1});
}

TEST_CASE("typed example with 420 live indices") {
  const auto ix = build_index_set({{q(1, 3), q(1, 3), q(1, 3)},
                                   {q(1, 2), q(1, 3), q(1, 6)},
                                   {q(1, 7), q(1, 4), q(17, 28)},
                                   {q(1, 5), q(1, 2), q(3, 10)}},
                                  1, 77, 3);
  CHECK(ix.non_dummy() == 420);
  CHECK(ix.total() == 497);
  CHECK(tally(ix, 2, 3) == std::vector<std::size_t>{60, 105, 255});
  CHECK(tally(ix, 3, 3) == std::vector<std::size_t>{84, 210, 126});
}

TEST_CASE("trivial index sets") {
  const auto ix = build_index_set({{q(1)}}, 1, 0, 1);
  CHECK(ix.total() == 1);
  CHECK(ix.lookup(1, 0) == 0);
  const auto wide = build_index_set({{q(1)}}, 5, 0, 1);
  for (std::size_t x = 1; x <= wide.total(); ++x) CHECK(wide.lookup(x, 0) == 0);
}

TEST_CASE("dummy indices map to null for every key") {
  const auto ix = build_index_set({{q(1, 4), q(3, 4)}, {q(1, 2), q(1, 2)}}, 2, 3, 11);
  CHECK(ix.dummies().size() == 3);
  for (std::size_t x : ix.dummies()) {
    CHECK(ix.is_dummy(x));
    for (std::size_t key = 0; key < ix.keys(); ++key) CHECK(ix.lookup(x, key) == IndexSet::kNull);
  }
  CHECK_THROWS_AS(ix.lookup(0, 0), UsageError);
  CHECK_THROWS_AS(ix.lookup(ix.total() + 1, 0), UsageError);
  CHECK_THROWS_AS(ix.lookup(1, 9), UsageError);
}

TEST_CASE("default dummy count") {
  CHECK(default_dummy_count(6) == 1);
  CHECK(default_dummy_count(420) == 42);
  CHECK(default_dummy_count(4) == 0);
  for (std::uint64_t x = 1; x < 2000; ++x) {
    const auto b = default_dummy_count(x);
    CHECK(b * 5 <= x);  // expected draws per play (X + b) / X stay at or below 1.2
    CHECK(b <= (x + 9) / 10);
  }
}

TEST_CASE("exact counts on random instances") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<RationalVector> dists;
    for (int k = 0; k < 1 + trial % 4; ++k) {
      dists.push_back(oracle::random_distribution(gen, 1 + gen() % 4, 4 + static_cast<long>(gen() % 12)));
    }
    const std::uint64_t mult = 1 + trial % 3;
    const auto ix = build_index_set(dists, mult, std::nullopt, gen());
    const BigInt x = BigInt(mult) * lcm_denominators([&] {
      RationalVector all;
      for (const auto& d : dists) all.insert(all.end(), d.begin(), d.end());
      return all;
    }());
    CHECK(BigInt(ix.non_dummy()) == x);
    CHECK(ix.dummy_count() == default_dummy_count(ix.non_dummy()));
    for (std::size_t key = 0; key < dists.size(); ++key) {
      const auto counts = tally(ix, key, dists[key].size());
      for (std::size_t p = 0; p < counts.size(); ++p) {
        // Uniform over live indices hits p with probability exactly p_q.
        CHECK(ExactRational(BigInt(counts[p]), BigInt(ix.non_dummy())) == dists[key][p]);
      }
    }
    // Dummy share of a uniform draw is b / (X + b) by construction.
    std::size_t dummies = 0;
    for (std::size_t xi = 1; xi <= ix.total(); ++xi) dummies += ix.is_dummy(xi);
    CHECK(dummies == ix.dummy_count());
  }
}

TEST_CASE("seeds move indices but never counts") {
  const std::vector<RationalVector> dists{{q(1, 2), q(1, 3), q(1, 6)}};
  const auto a = build_index_set(dists, 4, 5, 1);
  const auto b = build_index_set(dists, 4, 5, 2);
  const auto a2 = build_index_set(dists, 4, 5, 1);
  CHECK(a.assignment(0) == a2.assignment(0));
  CHECK(a.dummies() == a2.dummies());
  CHECK(a.assignment(0) != b.assignment(0));
  CHECK(tally(a, 0, 3) == tally(b, 0, 3));
}

TEST_CASE("size guard and argument checks") {
  CHECK_THROWS_AS(build_index_set({{q(1, 1000), q(999, 1000)}}, 1000, 0, 1, 100000), UsageError);
  CHECK_THROWS_AS(build_index_set({{q(1)}}, 0, 0, 1), UsageError);
  CHECK_THROWS_AS(build_index_set({}, 1, 0, 1), UsageError);
  CHECK_THROWS_AS(build_index_set({{q(1, 2), q(1, 3)}}, 1, 0, 1), UsageError);
}
