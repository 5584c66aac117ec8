#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/expression.hpp"
#include "cheaptalk/partition.hpp"
#include "cheaptalk/rng.hpp"

using namespace cheaptalk;

namespace {

ExactReal r(long n, long d = 1) { return ExactReal::from_rational(ExactRational(BigInt(n), BigInt(d))); }

LabeledPartition from_bounds(const std::vector<ExactReal>& inner) {
  LabeledPartition p;
  ExactReal lo = r(0);
  LabelGenerator labels(1);
  std::vector<ExactReal> ends = inner;
  ends.push_back(r(1));
  for (std::size_t k = 0; k < ends.size(); ++k) {
    p.cells.push_back(Cell{labels.next(), lo, ends[k], static_cast<int>(k)});
    lo = ends[k];
  }
  return p;
}

std::size_t linear_scan(const std::vector<Cell>& cells, const ExactReal& d) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].lo <= d && d < cells[k].hi) return k;
  }
  return cells.size();
}

void check_tiling(const std::vector<Cell>& cells) {
  REQUIRE_FALSE(cells.empty());
  CHECK(cells.front().lo.is_zero());
  CHECK(cells.back().hi == r(1));
  for (std::size_t k = 0; k + 1 < cells.size(); ++k) CHECK(cells[k].hi == cells[k + 1].lo);
  for (const auto& c : cells) CHECK(c.measure().sign() > 0);
}

}  // namespace

TEST_CASE("build_partition") {
  SUBCASE("one component, one fragment") {
    const auto p = build_partition({r(1)}, 1, 3);
    REQUIRE(p.size() == 1);
    CHECK(p.cells[0].lo.is_zero());
    CHECK(p.cells[0].hi == r(1));
  }
  SUBCASE("two halves") {
    const auto p = build_partition({r(1, 2), r(1, 2)}, 1, 3);
    REQUIRE(p.size() == 2);
    CHECK(p.cells[0].measure() == r(1, 2));
    CHECK(p.cells[1].measure() == r(1, 2));
    CHECK(p.cells[0].target != p.cells[1].target);
  }
  SUBCASE("introduction weights, four fragments each") {
    const std::vector<ExactReal> alphas{eval_expression("(2*sqrt(2)-1)/2"), eval_expression("(3-2*sqrt(2))/2")};
    const auto p = build_partition(alphas, 4, 9);
    CHECK(p.size() == 8);
    check_tiling(p.cells);
    const auto m = p.target_measures(2);
    for (int j = 0; j < 2; ++j) CHECK((m[j] - alphas[j]).abs() <= ExactReal::pow2(8 - 128) * r(8));
  }
  SUBCASE("random weights conserve every component") {
    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 50; ++trial) {
      Rng rng(gen());
      const std::size_t count = 1 + trial % 7;
      std::vector<ExactReal> alphas;
      for (std::size_t j = 0; j < count; ++j) alphas.push_back(rng.open_unit() + r(1, 100));
      const ExactReal total = sum(alphas);
      for (auto& a : alphas) a = a / total;
      const int frag = 1 + trial % 4;
      const auto p = build_partition(alphas, frag, gen());
      CHECK(p.size() == count * frag);
      check_tiling(p.cells);
      const auto m = p.target_measures(count);
      const ExactReal bound = ExactReal::pow2(8 - 128) * r(static_cast<long>(p.size()));
      for (std::size_t j = 0; j < count; ++j) CHECK((m[j] - alphas[j]).abs() <= bound);
    }
  }
  SUBCASE("determinism") {
    const auto a = build_partition({r(1, 3), r(2, 3)}, 3, 5);
    const auto b = build_partition({r(1, 3), r(2, 3)}, 3, 5);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a.cells[k].label == b.cells[k].label);
      CHECK(a.cells[k].hi == b.cells[k].hi);
    }
  }
  CHECK_THROWS_AS(build_partition({r(1)}, 0, 1), UsageError);
  CHECK_THROWS_AS(build_partition({}, 1, 1), UsageError);
  CHECK_THROWS_AS(build_partition({r(1), r(0)}, 1, 1), UsageError);
}

TEST_CASE("locate") {
  const auto single = build_partition({r(1)}, 1, 1);
  CHECK(single.locate_index(eval_expression("3/10")) == 0);
  const auto halves = from_bounds({r(1, 2)});
  CHECK(halves.locate_index(r(1, 2)) == 1);
  CHECK(halves.locate_index(r(1, 4)) == 0);
  CHECK_THROWS_AS(halves.locate_index(r(0)), UsageError);
  CHECK_THROWS_AS(halves.locate_index(r(1)), UsageError);
  CHECK_THROWS_AS(halves.locate_index(r(3, 2)), UsageError);

  SUBCASE("binary search agrees with a linear scan") {
    const auto p = build_partition({r(1, 5), r(3, 10), r(1, 2)}, 5, 17);
    Rng rng(4);
    for (int k = 0; k < 10000; ++k) {
      const ExactReal d = rng.open_unit();
      CHECK(p.locate_index(d) == linear_scan(p.cells, d));
    }
    for (std::size_t k = 1; k < p.size(); ++k) CHECK(p.locate_index(p.cells[k].lo) == k);
  }
  SUBCASE("uniform points reproduce the weights") {
    const std::vector<double> alpha{0.2, 0.3, 0.5};
    const auto p = build_partition({r(1, 5), r(3, 10), r(1, 2)}, 3, 23);
    Rng rng(8);
    std::vector<long> hits(3, 0);
    const long draws = 1000000;
    for (long k = 0; k < draws; ++k) ++hits[p.locate(rng.open_unit(64)).target];
    for (int j = 0; j < 3; ++j) {
      const double sigma = std::sqrt(draws * alpha[j] * (1 - alpha[j]));
      CHECK(std::abs(hits[j] - draws * alpha[j]) <= 4 * sigma);
    }
  }
}

TEST_CASE("label order says nothing about the component") {
  // Across seeds, the cell with the smaller label belongs to component 0 about
  // half of the time, and so does the leftmost cell.
  const int runs = 4000;
  int smaller = 0, leftmost = 0;
  for (int s = 0; s < runs; ++s) {
    const auto p = build_partition({r(1, 2), r(1, 2)}, 1, static_cast<std::uint64_t>(s));
    const bool first_smaller = p.cells[0].label < p.cells[1].label;
    smaller += (first_smaller ? p.cells[0].target : p.cells[1].target) == 0;
    leftmost += p.cells[0].target == 0;
  }
  const double sigma = std::sqrt(runs * 0.25);
  CHECK(std::abs(smaller - runs / 2) <= 4 * sigma);
  CHECK(std::abs(leftmost - runs / 2) <= 4 * sigma);
}

TEST_CASE("common refinement") {
  SUBCASE("one partition") {
    const auto p = build_partition({r(1, 4), r(3, 4)}, 2, 2);
    const auto c = build_common_refinement({p}, 5);
    REQUIRE(c.size() == p.size());
    for (std::size_t m = 0; m < c.size(); ++m) {
      CHECK(c.cells[m].lo == p.cells[m].lo);
      CHECK(c.cells[m].hi == p.cells[m].hi);
      CHECK(c.target[m][0] == p.cells[m].target);
    }
  }
  SUBCASE("boundary union") {
    const auto c = build_common_refinement({from_bounds({r(1, 2)}), from_bounds({r(1, 3)})}, 1);
    REQUIRE(c.size() == 3);
    CHECK(c.cells[0].hi == r(1, 3));
    CHECK(c.cells[1].lo == r(1, 3));
    CHECK(c.cells[1].hi == r(1, 2));
    CHECK(c.cells[2].hi == r(1));
    CHECK(c.target[0] == std::vector<int>{0, 0});
    CHECK(c.target[1] == std::vector<int>{0, 1});
    CHECK(c.target[2] == std::vector<int>{1, 1});
    CHECK(c.locate_index(r(2, 5)) == 1);
  }
  SUBCASE("random partitions keep every source cell's measure") {
    std::mt19937_64 gen(44);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<LabeledPartition> parts;
      for (int s = 0; s < 3; ++s) {
        Rng rng(gen());
        std::vector<ExactReal> alphas;
        for (int j = 0; j < 3; ++j) alphas.push_back(rng.open_unit() + r(1, 50));
        const ExactReal total = sum(alphas);
        for (auto& a : alphas) a = a / total;
        parts.push_back(build_partition(alphas, 2, gen()));
      }
      const auto c = build_common_refinement(parts, gen());
      check_tiling(c.cells);
      for (std::size_t s = 0; s < parts.size(); ++s) {
        std::vector<ExactReal> measure(parts[s].size(), r(0));
        for (std::size_t m = 0; m < c.size(); ++m) {
          CHECK(c.target[m][s] == parts[s].cells[c.source[m][s]].target);
          measure[c.source[m][s]] += c.cells[m].measure();
        }
        for (std::size_t k = 0; k < parts[s].size(); ++k) CHECK(measure[k] == parts[s].cells[k].measure());
      }
    }
  }
}
