#include "cheaptalk/protocol.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

namespace {

constexpr std::array<const char*, 10> kKindNames = {
    "setup",      "index-size",  "codebook",        "type-codebook",  "table",
    "d-share",    "x-share",     "relayer-confirm", "encrypted-type", "recommendation"};

std::string player_tag(char prefix, int player) { return prefix + std::to_string(player); }

std::string owned_tag(char prefix, int subject, int owner) {
  return prefix + std::to_string(subject) + "^" + std::to_string(owner);
}

// Payload value after the first ':'.
std::string payload_value(const std::string& item) {
  auto pos = item.find(':');
  if (pos == std::string::npos) throw ProtocolError("malformed payload item '" + item + "'");
  return item.substr(pos + 1);
}

Target drop_zeros(const Target& target) {
  Target out;
  for (std::size_t q = 0; q < target.dist.size(); ++q) {
    const bool zero = target.exact ? target.exact->at(q).is_zero() : target.dist.probs[q].is_zero();
    if (zero) continue;
    out.dist.support.push_back(target.dist.support[q]);
    out.dist.probs.push_back(target.dist.probs[q]);
    if (target.exact) {
      if (!out.exact) out.exact.emplace();
      out.exact->push_back(target.exact->at(q));
    }
  }
  return out;
}

bool same_target(const Target& a, const Target& b) {
  if (!(a.dist == b.dist)) return false;
  return a.exact.has_value() == b.exact.has_value() && (!a.exact || *a.exact == *b.exact);
}

TargetGroup make_group(const ProtocolConfig& config, const Game& game, const Target& raw,
                       std::size_t group) {
  TargetGroup g;
  g.target = drop_zeros(raw);
  if (g.target.dist.size() == 0) throw UsageError("target distribution has empty support");
  if (g.target.exact && g.target.exact->size() != g.target.dist.size()) {
    throw UsageError("exact target does not match the support");
  }
  for (const auto& profile : g.target.dist.support) {
    g.support_index.push_back(game.profiles().encode(profile));
  }
  DecompositionOptions opts = config.decomposition;
  opts.seed = derive_seed(config.seed, "decomposition", group);
  g.decomposition = decompose(g.target.dist.probs, g.target.exact, opts);
  std::vector<ExactReal> alphas;
  for (const auto& c : g.decomposition.flat) alphas.push_back(c.alpha);
  g.partition = build_partition(alphas, config.fragmentation,
                                derive_seed(config.seed, "partition", group));
  return g;
}

void build_index_and_offsets(ProtocolInstance& inst) {
  std::vector<RationalVector> dists;
  for (auto& g : inst.groups) {
    g.key_offset = dists.size();
    for (const auto& c : g.decomposition.flat) dists.push_back(c.dist);
  }
  inst.index = build_index_set(dists, inst.config.multiplier, inst.config.dummy_count,
                               derive_seed(inst.config.seed, "index"), inst.config.max_index_size);
}

std::vector<std::vector<std::size_t>> supports_by_key(const ProtocolInstance& inst) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& g : inst.groups) {
    for (std::size_t j = 0; j < g.decomposition.flat.size(); ++j) out.push_back(g.support_index);
  }
  return out;
}

void log_setup(ProtocolInstance& inst) {
  const int n = inst.config.players;
  auto& log = inst.setup_log;
  for (int r : kTrio) {
    for (int s : kTrio) {
      if (s == r) continue;
      log.push_back({r, s, 0, MessageKind::kSetup, r, -1,
                     {"decomposition", "partition", "index-set"}});
    }
  }
  for (int r : kTrio) {
    for (int i = 3; i < n; ++i) {
      log.push_back({r, i, 0, MessageKind::kIndexSize, r, -1,
                     {"|X|:" + std::to_string(inst.index.total())}});
    }
  }
  for (int r : kTrio) {
    for (const auto& [i, book] : inst.codebooks[r]) {
      log.push_back({r, i, 0, MessageKind::kCodebook, r, i,
                     {owned_tag('E', i, r) + ":" + std::to_string(book.decrypt.size())}});
    }
    if (inst.bayesian()) {
      for (int i = 0; i < n; ++i) {
        if (i == r) continue;
        log.push_back({r, i, 0, MessageKind::kTypeCodebook, r, i,
                       {owned_tag('F', i, r) + ":" +
                        std::to_string(inst.type_codebooks[r][i].encrypt.size())}});
      }
    }
    for (int k = 0; k < 2; ++k) {
      for (const auto& [i, table] : inst.tables[r][k]) {
        log.push_back({r, kRelayers[k], 0, MessageKind::kTable, r, i,
                       {owned_tag(inst.bayesian() ? 'w' : 'v', i, r) + ":" +
                        std::to_string(table.entries.size())}});
      }
    }
  }
}

void build_codebooks(ProtocolInstance& inst) {
  const int n = inst.config.players;
  for (int r : kTrio) {
    inst.codebooks[r] = generate_strategy_codebooks(inst.game, inst.domain, r,
                                                    derive_seed(inst.config.seed, "codebooks"),
                                                    inst.config.redundancy);
    if (inst.bayesian()) {
      inst.type_codebooks[r] =
          generate_type_codebooks(*inst.bayes, r, derive_seed(inst.config.seed, "type-codebooks"));
    }
    for (int k = 0; k < 2; ++k) {
      const int l = kRelayers[k];
      for (int i : table_subjects(n, r, l)) {
        const auto& book = inst.codebooks[r].at(i);
        inst.tables[r][k].emplace(
            i, inst.bayesian()
                   ? build_typed_recommendation_table(book, inst.domain, inst.bayes->type_profiles(),
                                                      inst.type_codebooks[r], r, l,
                                                      derive_seed(inst.config.seed, "tables"))
                   : build_recommendation_table(book, inst.domain, r, l));
      }
    }
  }
}

class Network {
 public:
  Network(int players, bool record, std::vector<Message>* log)
      : record_(record), log_(log), inbox_(players) {}

  void send(Message m) {
    if (record_) log_->push_back(m);
    inbox_[m.receiver].push_back(std::move(m));
  }

  // Removes and returns the player's pending messages of one kind.
  std::vector<Message> take(int player, MessageKind kind) {
    std::vector<Message> out;
    auto& box = inbox_[player];
    auto keep = std::stable_partition(box.begin(), box.end(),
                                      [kind](const Message& m) { return m.kind != kind; });
    out.assign(std::make_move_iterator(keep), std::make_move_iterator(box.end()));
    box.erase(keep, box.end());
    return out;
  }

 private:
  bool record_;
  std::vector<Message>* log_;
  std::vector<std::vector<Message>> inbox_;
};

struct RelayerView {
  ExactReal d_star;
  std::size_t x_star = 0;
  std::size_t cell = 0;
  std::array<std::vector<Label>, 3> encrypted_types;  // per owner
};

std::size_t sample_type_profile(const BayesianGame& game, Rng& rng, int precision) {
  const ExactReal u = rng.unit(precision);
  ExactReal acc = ExactReal::from_int(0, precision);
  std::size_t last = 0;
  for (std::size_t t = 0; t < game.prior().size(); ++t) {
    if (game.prior(t).sign() <= 0) continue;
    last = t;
    acc += game.prior(t);
    if (u < acc) return t;
  }
  return last;
}

}  // namespace

const char* to_string(MessageKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

MessageKind parse_message_kind(const std::string& text) {
  for (std::size_t k = 0; k < kKindNames.size(); ++k) {
    if (text == kKindNames[k]) return static_cast<MessageKind>(k);
  }
  throw ParseError("unknown message kind '" + text + "'");
}

const char* to_string(RoundStatus status) {
  switch (status) {
    case RoundStatus::kDelivered: return "delivered";
    case RoundStatus::kAbortedDummy: return "aborted-dummy";
    case RoundStatus::kFailedConsistency: return "failed-consistency";
  }
  return "unknown";
}

std::vector<Message> transcript_of(const std::vector<Message>& log, int player) {
  std::vector<Message> out;
  for (const auto& m : log) {
    if (m.sender == player || m.receiver == player) out.push_back(m);
  }
  return out;
}

void ProtocolConfig::validate() const {
  if (players < 5) throw UsageError("the protocol needs at least five players");
  if (precision < 64) throw UsageError("precision must be at least 64 bits");
  if (fragmentation < 1) throw UsageError("fragmentation must be at least 1");
  if (multiplier < 1) throw UsageError("multiplier must be at least 1");
  if (redundancy < 0) throw UsageError("redundancy must be non-negative");
  if (max_retries < 0) throw UsageError("max_retries must be non-negative");
}

const Label& ProtocolInstance::cell_label(std::size_t m) const {
  return refinement ? refinement->cells.at(m).label : groups.front().partition.cells.at(m).label;
}

std::size_t ProtocolInstance::key_of(std::size_t m, std::size_t t) const {
  if (!refinement) return groups.front().partition.cells.at(m).target;
  const int g = group_of.at(t);
  return groups[g].key_offset + refinement->target.at(m).at(g);
}

ProtocolInstance setup_protocol(const ProtocolConfig& config, const Game& game,
                                const Target& target) {
  config.validate();
  if (game.num_players() != config.players) {
    throw UsageError("game has " + std::to_string(game.num_players()) +
                     " players but the configuration expects " + std::to_string(config.players));
  }
  target.dist.validate(game);
  ProtocolInstance inst;
  inst.config = config;
  inst.game = game;
  inst.groups.push_back(make_group(config, game, target, 0));
  inst.group_of = {0};
  build_index_and_offsets(inst);
  inst.domain = build_domain(
      inst.groups.front().partition.size(), 1, inst.index,
      [&inst](std::size_t m, std::size_t t) { return inst.key_of(m, t); }, supports_by_key(inst),
      config.max_table_entries);
  build_codebooks(inst);
  log_setup(inst);
  return inst;
}

ProtocolInstance setup_bayesian_protocol(const ProtocolConfig& config, const BayesianGame& game,
                                         const std::map<std::size_t, Target>& policy) {
  config.validate();
  if (game.num_players() != config.players) {
    throw UsageError("game has " + std::to_string(game.num_players()) +
                     " players but the configuration expects " + std::to_string(config.players));
  }
  const std::size_t type_count = game.type_profiles().size();
  ProtocolInstance inst;
  inst.config = config;
  inst.game = game.base();
  inst.bayes = game;
  inst.group_of.assign(type_count, 0);
  std::vector<Target> distinct;
  for (std::size_t t = 0; t < type_count; ++t) {
    auto it = policy.find(t);
    if (it == policy.end()) {
      if (game.prior(t).sign() > 0) {
        throw UsageError("policy is missing p[t] for type profile " + std::to_string(t));
      }
      continue;  // never realized; routed to group 0
    }
    it->second.dist.validate(game.base());
    std::size_t g = 0;
    while (g < distinct.size() && !same_target(distinct[g], it->second)) ++g;
    if (g == distinct.size()) distinct.push_back(it->second);
    inst.group_of[t] = static_cast<int>(g);
  }
  if (distinct.empty()) throw UsageError("policy is empty");
  for (std::size_t g = 0; g < distinct.size(); ++g) {
    inst.groups.push_back(make_group(config, game.base(), distinct[g], g));
  }
  for (std::size_t t = 0; t < type_count; ++t) {
    if (policy.count(t)) inst.groups[inst.group_of[t]].type_profiles.push_back(t);
  }
  std::vector<LabeledPartition> partitions;
  for (const auto& g : inst.groups) partitions.push_back(g.partition);
  inst.refinement = build_common_refinement(partitions, derive_seed(config.seed, "refinement"));
  build_index_and_offsets(inst);
  inst.domain = build_domain(
      inst.refinement->size(), type_count, inst.index,
      [&inst](std::size_t m, std::size_t t) { return inst.key_of(m, t); }, supports_by_key(inst),
      config.max_table_entries);
  build_codebooks(inst);
  log_setup(inst);
  return inst;
}

ExactReal joint_random_unit(const std::vector<std::optional<ExactReal>>& shares) {
  if (shares.empty()) throw ProtocolError("no randomness shares");
  ExactReal total;
  bool first = true;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!shares[i]) throw ProtocolError("missing randomness share from player " + std::to_string(i));
    total = first ? *shares[i] : total + *shares[i];
    first = false;
  }
  return total.fractional_part();
}

std::size_t joint_random_index(const std::vector<std::optional<std::size_t>>& shares,
                               std::size_t total) {
  if (total == 0) throw ProtocolError("empty index set");
  if (shares.empty()) throw ProtocolError("no index shares");
  std::size_t acc = 0;  // (sum - n) mod total, accumulated without overflow
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (!shares[i]) throw ProtocolError("missing index share from player " + std::to_string(i));
    if (*shares[i] < 1 || *shares[i] > total) {
      throw ProtocolError("index share from player " + std::to_string(i) + " out of range");
    }
    acc = (acc + (*shares[i] - 1)) % total;
  }
  // sum - 1 = (sum - n) + (n - 1)
  acc = (acc + (shares.size() - 1) % total) % total;
  return 1 + acc;
}

RoundOutcome play_round(const ProtocolInstance& inst, std::uint64_t seed,
                        const PlayOptions& options) {
  const int n = inst.config.players;
  const int precision = inst.config.precision;
  const std::size_t total = inst.index.total();
  const auto& space = inst.game.profiles();
  RoundOutcome out;
  Network net(n, options.record, &out.transcript);
  std::vector<Rng> rng;
  for (int i = 0; i < n; ++i) rng.emplace_back(derive_seed(seed, "player", i));

  // Nature draws the type profile.
  std::size_t t_star = 0;
  Profile types;
  if (inst.bayesian()) {
    if (options.type_profile) {
      t_star = *options.type_profile;
      if (t_star >= inst.bayes->type_profiles().size()) throw UsageError("unknown type profile");
    } else {
      Rng nature(derive_seed(seed, "nature"));
      t_star = sample_type_profile(*inst.bayes, nature, precision);
    }
    out.type_profile = t_star;
    types = inst.bayes->type_profiles().decode(t_star);
    if (options.record) {
      for (int i = 0; i < n; ++i) {
        out.secrets.push_back({player_tag('t', i) + ":" + inst.bayes->type_label(i, types[i]), {i}});
      }
    }
  }

  std::array<RelayerView, 2> view;
  std::set<std::pair<std::size_t, std::size_t>> used;  // (cell, x) pairs of this play
  bool types_sent = false;

  for (int attempt = 0; attempt <= inst.config.max_retries; ++attempt) {
    Attempt at;
    // Joint randomness, redrawn on d* = 0 or a (cell, x) pair already used.
    for (;;) {
      for (int i = 0; i < n; ++i) {
        const ExactReal d = rng[i].open_unit(precision);
        const std::size_t x = 1 + static_cast<std::size_t>(rng[i].below(total));
        for (int l : kRelayers) {
          if (l == i) continue;
          net.send({i, l, attempt, MessageKind::kRandomShare, -1, -1,
                    {player_tag('d', i) + ":" + d.to_hex()}});
          net.send({i, l, attempt, MessageKind::kIndexShare, -1, -1,
                    {player_tag('x', i) + ":" + std::to_string(x)}});
        }
        if (is_relayer(i)) {
          auto& v = view[i - 3];
          v.d_star = d;  // own share, completed below
          v.x_star = x;
        }
      }
      for (int k = 0; k < 2; ++k) {
        const int l = kRelayers[k];
        std::vector<std::optional<ExactReal>> d_shares(n);
        std::vector<std::optional<std::size_t>> x_shares(n);
        d_shares[l] = view[k].d_star;
        x_shares[l] = view[k].x_star;
        for (const auto& m : net.take(l, MessageKind::kRandomShare)) {
          d_shares[m.sender] = ExactReal::parse_hex(payload_value(m.items.at(0)));
        }
        for (const auto& m : net.take(l, MessageKind::kIndexShare)) {
          x_shares[m.sender] = std::stoull(payload_value(m.items.at(0)));
        }
        view[k].d_star = joint_random_unit(d_shares);
        view[k].x_star = joint_random_index(x_shares, total);
      }
      // The relayers cross-check their results.
      for (int k = 0; k < 2; ++k) {
        net.send({kRelayers[k], kRelayers[1 - k], attempt, MessageKind::kRelayerConfirm, -1, -1,
                  {"d*:" + view[k].d_star.to_hex(), "x*:" + std::to_string(view[k].x_star)}});
      }
      for (int k = 0; k < 2; ++k) {
        auto confirm = net.take(kRelayers[k], MessageKind::kRelayerConfirm);
        if (confirm.size() != 1 ||
            confirm[0].items.at(0) != "d*:" + view[k].d_star.to_hex() ||
            confirm[0].items.at(1) != "x*:" + std::to_string(view[k].x_star)) {
          throw ProtocolError("relayers disagree on the joint draw");
        }
      }
      if (view[0].d_star.is_zero()) {
        ++at.redraws;
        continue;
      }
      const std::size_t cell = inst.refinement ? inst.refinement->locate_index(view[0].d_star)
                                               : inst.groups.front().partition.locate_index(view[0].d_star);
      if (!used.insert({cell, view[0].x_star}).second) {
        ++at.redraws;
        continue;
      }
      view[0].cell = view[1].cell = cell;
      break;
    }
    at.d_star = view[0].d_star;
    at.x_star = view[0].x_star;
    at.cell = view[0].cell;
    at.key = inst.key_of(at.cell, t_star);
    at.support_position = inst.index.lookup(at.x_star, at.key);
    if (options.record) {
      out.secrets.push_back({"d*:" + at.d_star.to_hex(), {kRelayers[0], kRelayers[1]}});
      out.secrets.push_back({"x*:" + std::to_string(at.x_star), {kRelayers[0], kRelayers[1]}});
    }

    // Encrypted types go to both relayers once per play.
    if (inst.bayesian() && !types_sent) {
      for (int i = 0; i < n; ++i) {
        std::vector<std::string> items;
        for (int r : kTrio) {
          items.push_back(owned_tag('t', i, r) + ":" +
                          inst.type_codebooks[r][i].encrypt.at(types[i]).hex());
        }
        for (int l : kRelayers) {
          if (l != i) net.send({i, l, attempt, MessageKind::kEncryptedType, -1, i, items});
        }
      }
      for (int k = 0; k < 2; ++k) {
        const int l = kRelayers[k];
        for (int r : kTrio) view[k].encrypted_types[r].assign(n, Label{});
        for (int r : kTrio) view[k].encrypted_types[r][l] = inst.type_codebooks[r][l].encrypt.at(types[l]);
        for (const auto& m : net.take(l, MessageKind::kEncryptedType)) {
          for (int r : kTrio) {
            view[k].encrypted_types[r][m.sender] = Label::parse(payload_value(m.items.at(r)));
          }
        }
      }
      types_sent = true;
    }

    // Delivery of ciphertext recommendations.
    for (int k = 0; k < 2; ++k) {
      const int l = kRelayers[k];
      for (int r : kTrio) {
        for (const auto& [i, table] : inst.tables[r][k]) {
          const Label& label = inst.bayesian()
                                   ? table.lookup(view[k].cell, view[k].x_star, view[k].encrypted_types[r])
                                   : table.lookup(view[k].cell, view[k].x_star);
          net.send({l, i, attempt, MessageKind::kRecommendation, r, i,
                    {owned_tag('v', i, r) + ":" + label.hex()}});
        }
      }
    }

    // Local decryption.
    out.copies.clear();
    std::vector<int> decided(n, kNullAction);
    std::string failure;
    std::set<Label> emitted;
    for (int i = 0; i < n; ++i) {
      auto inbox = net.take(i, MessageKind::kRecommendation);
      std::vector<Copy> mine;
      for (const auto& m : inbox) {
        Copy c;
        c.player = i;
        c.owner = m.owner;
        c.relayer = m.sender;
        c.label = Label::parse(payload_value(m.items.at(0)));
        mine.push_back(c);
      }
      if (options.corrupt_player && *options.corrupt_player == i && !mine.empty()) {
        const auto& book = inst.codebooks[mine.front().owner].at(i);
        const int truth = book.decode(mine.front().label);
        for (const auto& label : book.encrypt) {
          if (book.decode(label) != truth) {
            mine.front().label = label;
            break;
          }
        }
      }
      std::map<int, std::size_t> tally;
      for (auto& c : mine) {
        emitted.insert(c.label);
        try {
          c.action = inst.codebooks[c.owner].at(i).decode(c.label);
        } catch (const ProtocolError& e) {
          failure = e.what();
          c.action = kNullAction;
        }
        ++tally[c.action];
      }
      if (mine.empty()) {
        failure = "player " + std::to_string(i) + " received no recommendation";
      } else if (tally.size() == 1) {
        decided[i] = tally.begin()->first;
      } else {
        int best = kNullAction;
        std::size_t best_count = 0;
        for (const auto& [action, count] : tally) {
          if (count > best_count) best = action, best_count = count;
        }
        if (inst.config.majority_decode && 2 * best_count > mine.size()) {
          decided[i] = best;
        } else if (failure.empty()) {
          failure = "player " + std::to_string(i) + " decrypted disagreeing copies";
        }
      }
      out.copies.insert(out.copies.end(), mine.begin(), mine.end());
    }
    out.emitted.emplace_back(emitted.begin(), emitted.end());
    const bool all_null = std::all_of(decided.begin(), decided.end(),
                                      [](int a) { return a == kNullAction; });
    const bool any_null = std::any_of(decided.begin(), decided.end(),
                                      [](int a) { return a == kNullAction; });
    if (failure.empty() && any_null && !all_null) failure = "null and non-null recommendations mixed";
    at.dummy = failure.empty() && all_null;
    out.attempts.push_back(at);
    out.actions = decided;
    if (!failure.empty()) {
      out.status = RoundStatus::kFailedConsistency;
      out.failure = failure;
      return out;
    }
    if (at.dummy) continue;
    out.status = RoundStatus::kDelivered;
    out.profile = space.encode(decided);
    if (options.record) {
      for (int i = 0; i < n; ++i) {
        out.secrets.push_back({player_tag('a', i) + ":" + inst.game.action_label(i, decided[i]), {i}});
      }
    }
    return out;
  }
  out.status = RoundStatus::kAbortedDummy;
  out.failure = "retries exhausted";
  return out;
}

ProtocolRun run_protocol(const ProtocolInstance& inst, std::size_t trials, std::size_t sample) {
  if (trials < 1) throw UsageError("trials must be at least 1");
  ProtocolRun run;
  run.trials = trials;
  run.counts.assign(inst.game.num_profiles(), 0);
  if (inst.bayesian()) {
    run.type_counts.assign(inst.bayes->type_profiles().size(),
                           std::vector<std::uint64_t>(inst.game.num_profiles(), 0));
  }
  for (std::size_t k = 0; k < trials; ++k) {
    PlayOptions opts;
    opts.record = k < sample;
    RoundOutcome o = play_round(inst, derive_seed(inst.config.seed, "play", k), opts);
    run.attempts += o.attempts.size();
    for (const auto& a : o.attempts) {
      run.dummy_attempts += a.dummy ? 1 : 0;
      run.redraws += static_cast<std::uint64_t>(a.redraws);
    }
    ++run.retry_histogram[o.attempts.size() - 1];
    switch (o.status) {
      case RoundStatus::kDelivered:
        ++run.delivered;
        ++run.counts[*o.profile];
        if (o.type_profile) ++run.type_counts[*o.type_profile][*o.profile];
        break;
      case RoundStatus::kAbortedDummy: ++run.aborted; break;
      case RoundStatus::kFailedConsistency: ++run.failed; break;
    }
    if (opts.record) run.sample.push_back(std::move(o));
  }
  return run;
}

}  // namespace cheaptalk
