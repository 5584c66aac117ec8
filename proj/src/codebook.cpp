#include "cheaptalk/codebook.hpp"

#include <numeric>
#include <string>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

RecommendationDomain build_domain(std::size_t cells, std::size_t type_profiles,
                                  const IndexSet& index_set,
                                  const std::function<std::size_t(std::size_t, std::size_t)>& key_of,
                                  const std::vector<std::vector<std::size_t>>& support,
                                  std::size_t max_entries) {
  RecommendationDomain d;
  d.cells = cells;
  d.indices = index_set.total();
  d.type_profiles = type_profiles;
  const std::size_t size = cells * d.indices * type_profiles;
  if (size > max_entries) {
    throw ProtocolError("recommendation domain has " + std::to_string(size) +
                        " points, above the cap " + std::to_string(max_entries));
  }
  d.profile.assign(size, -1);
  for (std::size_t m = 0; m < cells; ++m) {
    for (std::size_t t = 0; t < type_profiles; ++t) {
      const std::size_t key = key_of(m, t);
      for (std::size_t x = 1; x <= d.indices; ++x) {
        const int q = index_set.lookup(x, key);
        if (q != IndexSet::kNull) {
          d.profile[d.position(m, x, t)] = static_cast<long long>(support.at(key).at(q));
        }
      }
    }
  }
  return d;
}

int StrategyCodebook::decode(const Label& label) const {
  auto it = decrypt.find(label);
  if (it == decrypt.end()) {
    throw ProtocolError("label " + label.hex() + " is not in codebook E_" +
                        std::to_string(subject) + "^(" + std::to_string(owner) + ")");
  }
  return it->second;
}

std::map<int, StrategyCodebook> generate_strategy_codebooks(const Game& game,
                                                            const RecommendationDomain& domain,
                                                            int owner, std::uint64_t seed,
                                                            int redundancy) {
  if (owner < 0 || owner > 2) throw UsageError("codebook owner must be one of the setup trio");
  if (redundancy < 0) throw UsageError("redundancy must be non-negative");
  LabelGenerator labels(derive_seed(seed, "strategy-labels", owner));
  Rng decoy_rng(derive_seed(seed, "decoy-actions", owner));
  const auto& space = game.profiles();
  std::map<int, StrategyCodebook> out;
  for (int i = 0; i < game.num_players(); ++i) {
    if (i == owner) continue;
    StrategyCodebook book;
    book.owner = owner;
    book.subject = i;
    book.encrypt.reserve(domain.size());
    book.decrypt.reserve(domain.size() * (1 + redundancy));
    for (long long profile : domain.profile) {
      Label label = labels.next();
      book.encrypt.push_back(label);
      book.decrypt.emplace(label, profile < 0 ? kNullAction
                                              : space.component(static_cast<std::size_t>(profile), i));
    }
    const std::size_t decoys = domain.size() * static_cast<std::size_t>(redundancy);
    for (std::size_t k = 0; k < decoys; ++k) {
      Label label = labels.next();
      book.decoys.push_back(label);
      book.decrypt.emplace(label, static_cast<int>(decoy_rng.below(game.num_actions(i))));
    }
    out.emplace(i, std::move(book));
  }
  return out;
}

std::vector<TypeCodebook> generate_type_codebooks(const BayesianGame& game, int owner,
                                                  std::uint64_t seed) {
  if (owner < 0 || owner > 2) throw UsageError("codebook owner must be one of the setup trio");
  LabelGenerator labels(derive_seed(seed, "type-labels", owner));
  std::vector<TypeCodebook> out;
  for (int i = 0; i < game.num_players(); ++i) {
    TypeCodebook book;
    book.owner = owner;
    book.subject = i;
    for (int t = 0; t < game.num_types(i); ++t) {
      Label label = labels.next();
      book.encrypt.push_back(label);
      book.decrypt.emplace(label, t);
    }
    out.push_back(std::move(book));
  }
  return out;
}

std::vector<int> table_subjects(int players, int owner, int relayer) {
  std::vector<int> out;
  for (int i = 0; i < players; ++i) {
    if (i != owner && i != relayer) out.push_back(i);
  }
  return out;
}

std::size_t RecommendationTable::type_profiles() const {
  std::size_t n = 1;
  for (const auto& keys : type_keys) n *= keys.size();
  return n;
}

const Label& RecommendationTable::lookup(std::size_t m, std::size_t x) const {
  if (m >= cells || x < 1 || x > indices) throw ProtocolError("table lookup outside its domain");
  return entries[(m * indices + (x - 1)) * type_profiles()];
}

const Label& RecommendationTable::lookup(std::size_t m, std::size_t x,
                                         const std::vector<Label>& encrypted_types) const {
  if (m >= cells || x < 1 || x > indices) throw ProtocolError("table lookup outside its domain");
  if (encrypted_types.size() != type_keys.size()) {
    throw ProtocolError("encrypted type profile has the wrong length");
  }
  std::size_t coord = 0;
  for (std::size_t k = 0; k < type_keys.size(); ++k) {
    std::size_t c = 0;
    while (c < type_keys[k].size() && type_keys[k][c] != encrypted_types[k]) ++c;
    if (c == type_keys[k].size()) {
      throw ProtocolError("unknown encrypted type " + encrypted_types[k].hex() + " for player " +
                          std::to_string(k));
    }
    coord = coord * type_keys[k].size() + c;
  }
  return entries[(m * indices + (x - 1)) * type_profiles() + coord];
}

RecommendationTable build_recommendation_table(const StrategyCodebook& codebook,
                                               const RecommendationDomain& domain, int owner,
                                               int relayer) {
  if (codebook.subject == owner || codebook.subject == relayer) {
    throw UsageError("no table for player " + std::to_string(codebook.subject) + " from owner " +
                     std::to_string(owner) + " via relayer " + std::to_string(relayer));
  }
  if (codebook.owner != owner) throw UsageError("codebook belongs to a different owner");
  if (domain.type_profiles != 1) throw UsageError("typed domain needs a typed table");
  RecommendationTable table;
  table.owner = owner;
  table.subject = codebook.subject;
  table.relayer = relayer;
  table.cells = domain.cells;
  table.indices = domain.indices;
  table.entries = codebook.encrypt;
  return table;
}

RecommendationTable build_typed_recommendation_table(const StrategyCodebook& codebook,
                                                     const RecommendationDomain& domain,
                                                     const ProductSpace& types,
                                                     const std::vector<TypeCodebook>& type_codebooks,
                                                     int owner, int relayer, std::uint64_t seed) {
  if (codebook.subject == owner || codebook.subject == relayer) {
    throw UsageError("no table for player " + std::to_string(codebook.subject) + " from owner " +
                     std::to_string(owner) + " via relayer " + std::to_string(relayer));
  }
  if (codebook.owner != owner) throw UsageError("codebook belongs to a different owner");
  if (types.size() != domain.type_profiles || type_codebooks.size() != types.dims()) {
    throw UsageError("typed table: type space does not match the domain");
  }
  RecommendationTable table;
  table.owner = owner;
  table.subject = codebook.subject;
  table.relayer = relayer;
  table.cells = domain.cells;
  table.indices = domain.indices;

  Rng rng(derive_seed(seed, "table-order",
                      static_cast<std::uint64_t>(owner * 64 + relayer * 8) * 1024 +
                          static_cast<std::uint64_t>(codebook.subject)));
  // order[k][c] = plaintext type of player k at key position c.
  std::vector<std::vector<int>> order(types.dims());
  for (std::size_t k = 0; k < types.dims(); ++k) {
    order[k].resize(types.radix(k));
    std::iota(order[k].begin(), order[k].end(), 0);
    rng.shuffle(order[k]);
    std::vector<Label> keys;
    for (int t : order[k]) keys.push_back(type_codebooks[k].encrypt.at(t));
    table.type_keys.push_back(std::move(keys));
  }
  const std::size_t tp = types.size();
  table.entries.resize(domain.size());
  Profile plain(types.dims());
  for (std::size_t coord = 0; coord < tp; ++coord) {
    std::size_t rest = coord;
    for (std::size_t k = types.dims(); k-- > 0;) {
      const std::size_t c = rest % order[k].size();
      rest /= order[k].size();
      plain[k] = order[k][c];
    }
    const std::size_t t = types.encode(plain);
    for (std::size_t m = 0; m < domain.cells; ++m) {
      for (std::size_t x = 1; x <= domain.indices; ++x) {
        table.entries[(m * domain.indices + (x - 1)) * tp + coord] =
            codebook.encrypt[domain.position(m, x, t)];
      }
    }
  }
  return table;
}

}  // namespace cheaptalk
