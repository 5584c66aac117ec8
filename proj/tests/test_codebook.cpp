#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cheaptalk/codebook.hpp"
#include "cheaptalk/errors.hpp"
#include "cheaptalk/partition.hpp"
#include "fixtures.hpp"

using namespace cheaptalk;

namespace {

ExactRational q(long n, long d = 1) { return ExactRational(BigInt(n), BigInt(d)); }

// Small domain: `cells` cells cycling over the keys of a random index set.
struct Setup {
  Game game;
  IndexSet index;
  std::vector<std::vector<std::size_t>> support;
  RecommendationDomain domain;
  std::size_t cells = 0;
  std::size_t key_of(std::size_t m) const { return m % index.keys(); }
};

Setup random_setup(std::uint64_t seed, int players = 5) {
  std::mt19937_64 gen(seed);
  Setup s;
  s.game = fixtures::coordination(players, 3);
  std::vector<RationalVector> dists;
  for (int k = 0; k < 3; ++k) {
    const std::size_t size = 1 + gen() % 4;
    dists.push_back(oracle::random_distribution(gen, size, 6 + static_cast<long>(gen() % 6)));
    std::vector<std::size_t> sup;
    for (std::size_t p = 0; p < size; ++p) sup.push_back(gen() % s.game.num_profiles());
    s.support.push_back(sup);
  }
  s.index = build_index_set(dists, 1, 3, gen());
  s.cells = 7;
  s.domain = build_domain(s.cells, 1, s.index, [&s](std::size_t m, std::size_t) { return s.key_of(m); },
                          s.support);
  return s;
}

// s_i(z(x, key)) recomputed without the domain.
int expected_action(const Setup& s, std::size_t m, std::size_t x, int player) {
  const int pos = s.index.lookup(x, s.key_of(m));
  if (pos == IndexSet::kNull) return kNullAction;
  return s.game.profiles().decode(s.support[s.key_of(m)][pos])[player];
}

}  // namespace

TEST_CASE("table subjects") {
  CHECK(table_subjects(6, 0, 3) == std::vector<int>{1, 2, 4, 5});
  CHECK(table_subjects(5, 2, 4) == std::vector<int>{0, 1, 3});
  CHECK(table_subjects(5, 0, 3) == std::vector<int>{1, 2, 4});
}

TEST_CASE("one cell, one index") {
  const Game game = fixtures::coordination(5, 2);
  const IndexSet ix = build_index_set({{q(1)}}, 1, 0, 1);
  const auto domain = build_domain(1, 1, ix, [](std::size_t, std::size_t) { return 0; }, {{31}});
  const auto books = generate_strategy_codebooks(game, domain, 0, 9, 3);
  CHECK(books.size() == 4);
  CHECK_FALSE(books.count(0));
  for (const auto& [subject, book] : books) {
    REQUIRE(book.encrypt.size() == 1);
    CHECK(book.decode(book.encrypt[0]) == 1);
    CHECK(book.decoys.size() == 3);
    for (const auto& d : book.decoys) {
      CHECK(d != book.encrypt[0]);
      CHECK(book.decode(d) >= 0);
      CHECK(book.decode(d) < 2);
    }
  }
  CHECK_THROWS_AS(books.at(1).decode(Label{1, 2}), ProtocolError);
}

TEST_CASE("codebooks decrypt to the recomputed recommendation") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Setup s = random_setup(seed);
    std::set<Label> all;
    std::size_t total = 0;
    for (int owner = 0; owner < 3; ++owner) {
      const auto books = generate_strategy_codebooks(s.game, s.domain, owner, seed * 10 + owner, 3);
      for (const auto& [subject, book] : books) {
        CHECK(subject != owner);
        REQUIRE(book.encrypt.size() == s.domain.size());
        for (std::size_t m = 0; m < s.cells; ++m) {
          for (std::size_t x = 1; x <= s.index.total(); ++x) {
            const Label& l = book.encrypt[s.domain.position(m, x)];
            CHECK(book.decode(l) == expected_action(s, m, x, subject));
          }
        }
        CHECK(book.decoys.size() == 3 * s.domain.size());
        for (const auto& l : book.encrypt) all.insert(l);
        for (const auto& l : book.decoys) all.insert(l);
        total += book.encrypt.size() + book.decoys.size();
      }
    }
    // One-time use: no label serves two domain points anywhere.
    CHECK(all.size() == total);
  }
}

TEST_CASE("recommendation tables") {
  const Setup s = random_setup(4);
  const auto books = generate_strategy_codebooks(s.game, s.domain, 1, 5, 0);
  for (int relayer : {3, 4}) {
    for (int subject : table_subjects(5, 1, relayer)) {
      const auto t = build_recommendation_table(books.at(subject), s.domain, 1, relayer);
      CHECK(t.subject == subject);
      CHECK(t.relayer == relayer);
      for (std::size_t m = 0; m < s.cells; ++m) {
        for (std::size_t x = 1; x <= s.index.total(); ++x) {
          CHECK(t.lookup(m, x) == books.at(subject).encrypt[s.domain.position(m, x)]);
        }
      }
      CHECK_THROWS_AS(t.lookup(s.cells, 1), ProtocolError);
      CHECK_THROWS_AS(t.lookup(0, 0), ProtocolError);
    }
    const int other = relayer == 3 ? 4 : 3;
    CHECK_THROWS_AS(build_recommendation_table(books.at(relayer), s.domain, 1, relayer), UsageError);
    CHECK_NOTHROW(build_recommendation_table(books.at(other), s.domain, 1, relayer));
  }
  CHECK_THROWS_AS(build_recommendation_table(books.at(3), s.domain, 0, 4), UsageError);
}

TEST_CASE("ciphertext bits are independent of the action") {
  const Setup s = random_setup(6);
  std::vector<long> ones(3, 0), seen(3, 0);
  for (int owner = 0; owner < 3; ++owner) {
    for (const auto& [subject, book] : generate_strategy_codebooks(s.game, s.domain, owner, 70 + owner, 0)) {
      for (const auto& l : book.encrypt) {
        const int a = book.decode(l);
        if (a == kNullAction) continue;
        ones[a] += static_cast<long>(l.hi >> 63);
        ++seen[a];
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    if (seen[a] < 50) continue;
    CHECK(std::abs(ones[a] - seen[a] / 2.0) <= 4 * std::sqrt(seen[a] / 4.0));
  }
}

TEST_CASE("type codebooks and typed tables") {
  const Game base = fixtures::coordination(5, 2);
  std::vector<ExactReal> prior(32, ExactReal::from_rational(q(1, 32)));
  const BayesianGame bg(base, std::vector<std::vector<std::string>>(5, {"lo", "hi"}), prior, {});
  const IndexSet ix = build_index_set({{q(1, 2), q(1, 2)}, {q(1, 4), q(3, 4)}}, 1, 1, 2);
  const std::vector<std::vector<std::size_t>> support{{0, 31}, {31, 0}};
  auto key_of = [](std::size_t m, std::size_t t) { return (m + t) % 2; };
  const auto domain = build_domain(3, 32, ix, key_of, support);
  CHECK(domain.size() == 3 * ix.total() * 32);

  const auto types = generate_type_codebooks(bg, 0, 5);
  REQUIRE(types.size() == 5);
  for (const auto& tc : types) {
    CHECK(tc.encrypt.size() == 2);
    CHECK(tc.encrypt[0] != tc.encrypt[1]);
    for (int t = 0; t < 2; ++t) CHECK(tc.decrypt.at(tc.encrypt[t]) == t);
  }
  const auto books = generate_strategy_codebooks(base, domain, 0, 8, 1);
  const auto table = build_typed_recommendation_table(books.at(2), domain, bg.type_profiles(), types, 0, 3, 4);
  CHECK(table.type_profiles() == 32);
  for (const auto& keys : table.type_keys) CHECK(keys.size() == 2);
  for (std::size_t t = 0; t < 32; ++t) {
    const Profile tp = bg.type_profiles().decode(t);
    std::vector<Label> enc;
    for (int i = 0; i < 5; ++i) enc.push_back(types[i].encrypt[tp[i]]);
    for (std::size_t m = 0; m < 3; ++m) {
      for (std::size_t x = 1; x <= ix.total(); ++x) {
        const Label& l = table.lookup(m, x, enc);
        CHECK(l == books.at(2).encrypt[domain.position(m, x, t)]);
        const int pos = ix.lookup(x, key_of(m, t));
        CHECK(books.at(2).decode(l) == (pos == IndexSet::kNull ? kNullAction : base.profiles().decode(support[key_of(m, t)][pos])[2]));
      }
    }
  }
  std::vector<Label> unknown(5, Label{7, 7});
  CHECK_THROWS_AS(table.lookup(0, 1, unknown), ProtocolError);
  CHECK_THROWS_AS(table.lookup(0, 1, std::vector<Label>(2)), ProtocolError);
}

TEST_CASE("single-type tables match the plain tables") {
  const Game base = fixtures::coordination(5, 2);
  const BayesianGame bg(base, std::vector<std::vector<std::string>>(5, {"-"}), {ExactReal::from_int(1)}, {});
  const IndexSet ix = build_index_set({{q(1, 3), q(2, 3)}}, 1, 1, 2);
  const auto domain = build_domain(2, 1, ix, [](std::size_t, std::size_t) { return 0; }, {{0, 31}});
  const auto books = generate_strategy_codebooks(base, domain, 1, 3, 0);
  const auto types = generate_type_codebooks(bg, 1, 4);
  const auto typed = build_typed_recommendation_table(books.at(0), domain, bg.type_profiles(), types, 1, 4, 2);
  const auto plain = build_recommendation_table(books.at(0), domain, 1, 4);
  std::vector<Label> enc;
  for (const auto& tc : types) enc.push_back(tc.encrypt[0]);
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t x = 1; x <= ix.total(); ++x) CHECK(typed.lookup(m, x, enc) == plain.lookup(m, x));
  }
}

TEST_CASE("domain size guard") {
  const IndexSet ix = build_index_set({{q(1, 2), q(1, 2)}}, 50, 0, 1);
  CHECK_THROWS_AS(build_domain(100, 1, ix, [](std::size_t, std::size_t) { return 0; }, {{0, 1}}, 1000),
                  ProtocolError);
}
