#ifndef CHEAPTALK_CODEBOOK_HPP_
#define CHEAPTALK_CODEBOOK_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/index_set.hpp"
#include "cheaptalk/label.hpp"

namespace cheaptalk {

inline constexpr int kNullAction = -1;
inline constexpr std::size_t kDefaultMaxTableEntries = 4000000;

// Plaintext recommendation grid over (cell m, index x, type profile t). Entry
// is a game profile index, or -1 for the null profile.
struct RecommendationDomain {
  std::size_t cells = 0;
  std::size_t indices = 0;
  std::size_t type_profiles = 1;
  std::vector<long long> profile;

  std::size_t size() const { return profile.size(); }
  // x is 1-based.
  std::size_t position(std::size_t m, std::size_t x, std::size_t t = 0) const {
    return ((m * indices) + (x - 1)) * type_profiles + t;
  }
};

// key_of(m, t) names the index-set key used by cell m under type profile t;
// support[key][q] is the game profile index of support position q.
RecommendationDomain build_domain(std::size_t cells, std::size_t type_profiles,
                                  const IndexSet& index_set,
                                  const std::function<std::size_t(std::size_t, std::size_t)>& key_of,
                                  const std::vector<std::vector<std::size_t>>& support,
                                  std::size_t max_entries = kDefaultMaxTableEntries);

// C_i^(r) and E_i^(r): one fresh label per domain point plus decoys.
struct StrategyCodebook {
  int owner = 0;
  int subject = 0;
  std::vector<Label> encrypt;                         // by domain position
  std::unordered_map<Label, int, LabelHash> decrypt;  // action or kNullAction
  std::vector<Label> decoys;

  // Throws ProtocolError on a label outside the codebook.
  int decode(const Label& label) const;
};

// Codebooks of owner r for every subject i != r. Labels come from one
// collision-checked generator per owner, so they are unique across subjects.
std::map<int, StrategyCodebook> generate_strategy_codebooks(const Game& game,
                                                            const RecommendationDomain& domain,
                                                            int owner, std::uint64_t seed,
                                                            int redundancy);

// F_i^(r): injective type encryption.
struct TypeCodebook {
  int owner = 0;
  int subject = 0;
  std::vector<Label> encrypt;  // by type
  std::unordered_map<Label, int, LabelHash> decrypt;
};

// Type codebooks of owner r for every player, the owner included (the owner
// encrypts its own type like everyone else).
std::vector<TypeCodebook> generate_type_codebooks(const BayesianGame& game, int owner,
                                                  std::uint64_t seed);

// v_i^(r) (complete information) or w_i^(r) (types) held by relayer l. In the
// typed form the type coordinate is addressed by encrypted type labels; each
// player's labels appear in a shuffled order that says nothing about the
// plaintext type.
struct RecommendationTable {
  int owner = 0;
  int subject = 0;
  int relayer = 0;
  std::size_t cells = 0;
  std::size_t indices = 0;
  std::vector<std::vector<Label>> type_keys;  // per player; empty without types
  std::vector<Label> entries;

  std::size_t type_profiles() const;
  // Complete-information lookup; x is 1-based.
  const Label& lookup(std::size_t m, std::size_t x) const;
  // Typed lookup by the encrypted type profile. Throws ProtocolError on an
  // unknown encrypted type.
  const Label& lookup(std::size_t m, std::size_t x, const std::vector<Label>& encrypted_types) const;
};

// Throws UsageError when subject is the owner or the relayer.
RecommendationTable build_recommendation_table(const StrategyCodebook& codebook,
                                               const RecommendationDomain& domain, int owner,
                                               int relayer);

RecommendationTable build_typed_recommendation_table(const StrategyCodebook& codebook,
                                                     const RecommendationDomain& domain,
                                                     const ProductSpace& types,
                                                     const std::vector<TypeCodebook>& type_codebooks,
                                                     int owner, int relayer, std::uint64_t seed);

// Subjects of the tables owner r hands to relayer l: N \ {r, l}.
std::vector<int> table_subjects(int players, int owner, int relayer);

}  // namespace cheaptalk

#endif  // CHEAPTALK_CODEBOOK_HPP_
