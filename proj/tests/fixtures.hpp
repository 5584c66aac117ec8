#ifndef CHEAPTALK_TESTS_FIXTURES_HPP_
#define CHEAPTALK_TESTS_FIXTURES_HPP_

// Builders shared by the unit tests and the acceptance runner.

#include <random>
#include <string>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/protocol.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace cheaptalk;

inline std::vector<std::string> names(int n, const std::string& prefix) {
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

inline Game to_game(const oracle::RationalGame& g) {
  std::vector<std::vector<std::string>> actions;
  for (int a : g.actions) actions.push_back(names(a, "a"));
  std::vector<std::vector<ExactReal>> pay;
  for (const auto& row : g.pay) pay.push_back(to_reals(row));
  return Game(names(static_cast<int>(g.actions.size()), "P"), actions, pay);
}

inline ProfileDistribution to_dist(const oracle::RationalGame& g, const std::vector<ExactRational>& p) {
  ProfileDistribution d;
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p[q].is_zero()) continue;
    d.support.push_back(g.decode(q));
    d.probs.push_back(ExactReal::from_rational(p[q]));
  }
  return d;
}

inline BayesianGame to_bayes(const oracle::RationalBayesGame& g) {
  oracle::RationalGame base{g.actions, g.pay[0]};
  std::vector<std::vector<std::string>> types;
  for (int t : g.types) types.push_back(names(t, "t"));
  std::vector<std::vector<std::vector<ExactReal>>> pay;
  for (const auto& table : g.pay) {
    std::vector<std::vector<ExactReal>> rows;
    for (const auto& row : table) rows.push_back(to_reals(row));
    pay.push_back(rows);
  }
  return BayesianGame(to_game(base), types, to_reals(g.prior), pay);
}

inline oracle::RationalGame random_payoffs(std::mt19937_64& gen, std::vector<int> actions, int span = 5) {
  oracle::RationalGame g;
  g.actions = std::move(actions);
  const int n = static_cast<int>(g.actions.size());
  g.pay.resize(g.profiles());
  for (auto& row : g.pay) {
    for (int i = 0; i < n; ++i) row.emplace_back(static_cast<long long>(gen() % (2 * span + 1)) - span);
  }
  return g;
}

inline oracle::RationalGame random_game(std::mt19937_64& gen, int n, int max_actions, int span = 5) {
  std::vector<int> actions;
  for (int i = 0; i < n; ++i) actions.push_back(1 + static_cast<int>(gen() % max_actions));
  return random_payoffs(gen, actions, span);
}

// Dense random distribution with some zero entries.
inline std::vector<ExactRational> random_dense(std::mt19937_64& gen, std::size_t size, long den = 12) {
  std::vector<long> w(size, 0);
  for (long k = 0; k < den; ++k) w[gen() % size] += 1;
  std::vector<ExactRational> out;
  for (long k : w) out.emplace_back(BigInt(k), BigInt(den));
  return out;
}

// n-player coordination game: everyone earns 1 when all actions agree.
inline Game coordination(int n, int actions) {
  std::vector<std::vector<std::string>> labels(n, names(actions, "c"));
  ProductSpace space(std::vector<int>(n, actions));
  std::vector<std::vector<ExactReal>> pay;
  for (std::size_t q = 0; q < space.size(); ++q) {
    const Profile a = space.decode(q);
    bool same = true;
    for (int x : a) same = same && x == a[0];
    pay.emplace_back(n, ExactReal::from_int(same ? 1 : 0));
  }
  return Game(names(n, "R"), labels, pay);
}

// Target on the diagonal profiles (k, k, ..., k).
inline Target diagonal_target(int n, const std::vector<ExactReal>& probs,
                              std::optional<RationalVector> exact = std::nullopt) {
  Target t;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    t.dist.support.push_back(Profile(n, static_cast<int>(k)));
    t.dist.probs.push_back(probs[k]);
  }
  t.exact = std::move(exact);
  return t;
}

}  // namespace fixtures

#endif  // CHEAPTALK_TESTS_FIXTURES_HPP_
