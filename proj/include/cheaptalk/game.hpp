#ifndef CHEAPTALK_GAME_HPP_
#define CHEAPTALK_GAME_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cheaptalk/real.hpp"

namespace cheaptalk {

// A pure strategy profile: one action index per player.
using Profile = std::vector<int>;

// Mixed-radix enumeration of a product space, first coordinate most
// significant (profile-major order of the game file).
class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<int> radices);

  std::size_t size() const { return size_; }
  std::size_t dims() const { return radices_.size(); }
  int radix(std::size_t i) const { return radices_[i]; }
  std::size_t encode(const Profile& p) const;  // UsageError when out of range
  Profile decode(std::size_t index) const;
  // Index of the profile that differs from `index` only in coordinate i.
  std::size_t replace(std::size_t index, std::size_t i, int value) const;
  int component(std::size_t index, std::size_t i) const;

 private:
  std::vector<int> radices_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

// Finite normal-form game. payoff(i, q) is u_i at the q-th profile of the
// product enumeration.
class Game {
 public:
  Game() = default;
  // payoffs[q][i]; throws UsageError on inconsistent dimensions or n < 2.
  Game(std::vector<std::string> player_names,
       std::vector<std::vector<std::string>> action_labels,
       std::vector<std::vector<ExactReal>> payoffs);

  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const { return static_cast<int>(actions_[player].size()); }
  std::size_t num_profiles() const { return space_.size(); }
  const ProductSpace& profiles() const { return space_; }
  const std::string& player_name(int player) const { return names_[player]; }
  const std::string& action_label(int player, int action) const {
    return actions_[player][action];
  }
  const std::vector<std::vector<std::string>>& action_labels() const { return actions_; }
  // Action index for a label, or -1.
  int find_action(int player, const std::string& label) const;
  const ExactReal& payoff(int player, std::size_t profile) const {
    return payoffs_[profile][player];
  }
  const std::vector<std::vector<ExactReal>>& payoff_table() const { return payoffs_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> actions_;
  ProductSpace space_;
  std::vector<std::vector<ExactReal>> payoffs_;
};

// Distribution over pure profiles given by its support enumeration a(q) and
// the probabilities p_q.
struct ProfileDistribution {
  std::vector<Profile> support;
  std::vector<ExactReal> probs;

  std::size_t size() const { return support.size(); }
  // Dense vector over the game's profile enumeration; repeated support entries
  // accumulate. Throws UsageError on dimension mismatch.
  std::vector<ExactReal> dense(const Game& game) const;
  // Checks dimensions, p_q >= 0 and |sum - 1| <= 2^(8-P). Throws UsageError.
  void validate(const Game& game) const;
  // Drops zero-probability entries.
  ProfileDistribution without_zeros() const;
};

bool operator==(const ProfileDistribution& a, const ProfileDistribution& b);

// Game of incomplete information: per-type-profile payoffs u_i(t, a) over a
// common action space, plus a prior over type profiles (first player's type
// most significant).
class BayesianGame {
 public:
  BayesianGame() = default;
  // type_payoffs[t][q][i]. A single table is broadcast to all type profiles.
  BayesianGame(Game base, std::vector<std::vector<std::string>> type_labels,
               std::vector<ExactReal> prior,
               std::vector<std::vector<std::vector<ExactReal>>> type_payoffs);

  const Game& base() const { return base_; }
  int num_players() const { return base_.num_players(); }
  const ProductSpace& type_profiles() const { return types_; }
  int num_types(int player) const { return types_.radix(player); }
  const std::string& type_label(int player, int type) const { return type_labels_[player][type]; }
  const std::vector<std::vector<std::string>>& type_labels() const { return type_labels_; }
  int find_type(int player, const std::string& label) const;
  const ExactReal& prior(std::size_t t) const { return prior_[t]; }
  const std::vector<ExactReal>& prior() const { return prior_; }
  bool full_support() const;
  const ExactReal& payoff(std::size_t t, int player, std::size_t profile) const {
    return payoffs_[payoffs_.size() == 1 ? 0 : t][profile][player];
  }
  // The type-t game as a complete-information game.
  Game game_at(std::size_t t) const;

 private:
  Game base_;
  std::vector<std::vector<std::string>> type_labels_;
  ProductSpace types_;
  std::vector<ExactReal> prior_;
  std::vector<std::vector<std::vector<ExactReal>>> payoffs_;
};

// p[t] per type-profile index.
using TypeConditionalPolicy = std::map<std::size_t, ProfileDistribution>;

}  // namespace cheaptalk

#endif  // CHEAPTALK_GAME_HPP_
