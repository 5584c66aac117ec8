#include "cheaptalk/game.hpp"

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

ProductSpace::ProductSpace(std::vector<int> radices) : radices_(std::move(radices)) {
  strides_.assign(radices_.size(), 1);
  size_ = 1;
  for (std::size_t i = radices_.size(); i-- > 0;) {
    if (radices_[i] <= 0) throw UsageError("product space with an empty factor");
    strides_[i] = size_;
    size_ *= static_cast<std::size_t>(radices_[i]);
  }
}

std::size_t ProductSpace::encode(const Profile& p) const {
  if (p.size() != radices_.size()) throw UsageError("profile has the wrong number of entries");
  std::size_t index = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || p[i] >= radices_[i]) throw UsageError("profile entry out of range");
    index += strides_[i] * static_cast<std::size_t>(p[i]);
  }
  return index;
}

Profile ProductSpace::decode(std::size_t index) const {
  Profile p(radices_.size());
  for (std::size_t i = 0; i < radices_.size(); ++i) p[i] = component(index, i);
  return p;
}

int ProductSpace::component(std::size_t index, std::size_t i) const {
  return static_cast<int>((index / strides_[i]) % static_cast<std::size_t>(radices_[i]));
}

std::size_t ProductSpace::replace(std::size_t index, std::size_t i, int value) const {
  int current = component(index, i);
  return index - strides_[i] * static_cast<std::size_t>(current) +
         strides_[i] * static_cast<std::size_t>(value);
}

Game::Game(std::vector<std::string> player_names,
           std::vector<std::vector<std::string>> action_labels,
           std::vector<std::vector<ExactReal>> payoffs)
    : names_(std::move(player_names)), actions_(std::move(action_labels)),
      payoffs_(std::move(payoffs)) {
  if (actions_.size() < 2) throw UsageError("a game needs at least two players");
  if (names_.size() != actions_.size()) throw UsageError("player name count mismatch");
  std::vector<int> radices;
  for (const auto& a : actions_) {
    if (a.empty()) throw UsageError("every player needs at least one action");
    radices.push_back(static_cast<int>(a.size()));
  }
  space_ = ProductSpace(std::move(radices));
  if (payoffs_.size() != space_.size()) {
    throw UsageError("payoff table has " + std::to_string(payoffs_.size()) +
                     " rows, expected " + std::to_string(space_.size()));
  }
  for (const auto& row : payoffs_) {
    if (row.size() != actions_.size()) throw UsageError("payoff row has the wrong width");
  }
}

int Game::find_action(int player, const std::string& label) const {
  const auto& a = actions_[player];
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == label) return static_cast<int>(k);
  }
  return -1;
}

std::vector<ExactReal> ProfileDistribution::dense(const Game& game) const {
  if (support.size() != probs.size()) throw UsageError("support/probability length mismatch");
  int precision = probs.empty() ? kDefaultPrecision : probs.front().precision();
  std::vector<ExactReal> out(game.num_profiles(), ExactReal::from_int(0, precision));
  for (std::size_t q = 0; q < support.size(); ++q) {
    out[game.profiles().encode(support[q])] += probs[q];
  }
  return out;
}

void ProfileDistribution::validate(const Game& game) const {
  if (support.empty()) throw UsageError("empty profile distribution");
  if (support.size() != probs.size()) throw UsageError("support/probability length mismatch");
  for (const auto& a : support) game.profiles().encode(a);
  ExactReal total = sum(probs);
  for (const auto& p : probs) {
    if (p.sign() < 0) throw UsageError("negative probability " + p.to_decimal(12));
  }
  int precision = probs.front().precision();
  ExactReal err = (total - ExactReal::from_int(1, precision)).abs();
  if (err > ExactReal::pow2(8 - precision, precision)) {
    throw UsageError("probabilities sum to " + total.to_decimal(20) + ", not 1");
  }
}

ProfileDistribution ProfileDistribution::without_zeros() const {
  ProfileDistribution out;
  for (std::size_t q = 0; q < support.size(); ++q) {
    if (!probs[q].is_zero()) {
      out.support.push_back(support[q]);
      out.probs.push_back(probs[q]);
    }
  }
  return out;
}

bool operator==(const ProfileDistribution& a, const ProfileDistribution& b) {
  return a.support == b.support && a.probs == b.probs;
}

BayesianGame::BayesianGame(Game base, std::vector<std::vector<std::string>> type_labels,
                           std::vector<ExactReal> prior,
                           std::vector<std::vector<std::vector<ExactReal>>> type_payoffs)
    : base_(std::move(base)), type_labels_(std::move(type_labels)),
      prior_(std::move(prior)), payoffs_(std::move(type_payoffs)) {
  if (static_cast<int>(type_labels_.size()) != base_.num_players()) {
    throw UsageError("type lists must be given for every player");
  }
  std::vector<int> radices;
  for (const auto& t : type_labels_) {
    if (t.empty()) throw UsageError("every player needs at least one type");
    radices.push_back(static_cast<int>(t.size()));
  }
  types_ = ProductSpace(std::move(radices));
  if (prior_.size() != types_.size()) throw UsageError("prior length does not match type space");
  ExactReal total = sum(prior_);
  for (const auto& p : prior_) {
    if (p.sign() < 0) throw UsageError("negative prior probability");
  }
  int precision = prior_.front().precision();
  if ((total - ExactReal::from_int(1, precision)).abs() > ExactReal::pow2(8 - precision, precision)) {
    throw UsageError("prior does not sum to 1");
  }
  if (payoffs_.empty()) payoffs_.push_back(base_.payoff_table());
  if (payoffs_.size() != 1 && payoffs_.size() != types_.size()) {
    throw UsageError("type payoff tables must be given for every type profile");
  }
  for (const auto& table : payoffs_) {
    if (table.size() != base_.num_profiles()) throw UsageError("type payoff table has wrong size");
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != base_.num_players()) {
        throw UsageError("type payoff row has the wrong width");
      }
    }
  }
}

int BayesianGame::find_type(int player, const std::string& label) const {
  const auto& t = type_labels_[player];
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] == label) return static_cast<int>(k);
  }
  return -1;
}

bool BayesianGame::full_support() const {
  for (const auto& p : prior_) {
    if (p.sign() <= 0) return false;
  }
  return true;
}

Game BayesianGame::game_at(std::size_t t) const {
  std::vector<std::string> names;
  for (int i = 0; i < num_players(); ++i) names.push_back(base_.player_name(i));
  return Game(names, base_.action_labels(), payoffs_[payoffs_.size() == 1 ? 0 : t]);
}

}  // namespace cheaptalk
