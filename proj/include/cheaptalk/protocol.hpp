#ifndef CHEAPTALK_PROTOCOL_HPP_
#define CHEAPTALK_PROTOCOL_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cheaptalk/codebook.hpp"
#include "cheaptalk/decomposition.hpp"
#include "cheaptalk/game.hpp"
#include "cheaptalk/index_set.hpp"
#include "cheaptalk/partition.hpp"

namespace cheaptalk {

// Players are 0-based: the setup trio is {0, 1, 2} and the relayers {3, 4}.
inline constexpr std::array<int, 3> kTrio = {0, 1, 2};
inline constexpr std::array<int, 2> kRelayers = {3, 4};

inline bool is_trio(int player) { return player >= 0 && player < 3; }
inline bool is_relayer(int player) { return player == 3 || player == 4; }

struct ProtocolConfig {
  int players = 5;
  int precision = kDefaultPrecision;
  int fragmentation = 2;
  std::uint64_t multiplier = 1;
  std::optional<std::uint64_t> dummy_count;
  int redundancy = 3;
  int max_retries = 16;
  std::uint64_t seed = 0;
  bool majority_decode = false;
  DecompositionOptions decomposition;  // its seed is derived from `seed`
  std::size_t max_index_size = kDefaultMaxIndexSize;
  std::size_t max_table_entries = kDefaultMaxTableEntries;

  // Throws UsageError unless players >= 5 and the numeric fields are sane.
  void validate() const;
};

// Target distribution with its exact rational form when there is one.
struct Target {
  ProfileDistribution dist;
  std::optional<RationalVector> exact;
};

enum class MessageKind {
  kSetup,
  kIndexSize,
  kCodebook,
  kTypeCodebook,
  kTable,
  kRandomShare,
  kIndexShare,
  kRelayerConfirm,
  kEncryptedType,
  kRecommendation,
};

const char* to_string(MessageKind kind);
MessageKind parse_message_kind(const std::string& text);

// Point-to-point message. Payload items are compared whole by the privacy
// audit, never by substring.
struct Message {
  int sender = 0;
  int receiver = 0;
  int attempt = 0;
  MessageKind kind = MessageKind::kSetup;
  int owner = -1;
  int subject = -1;
  std::vector<std::string> items;
};

// Secret token and the players allowed to see it.
struct Secret {
  std::string token;
  std::vector<int> authorized;
};

// Messages sent or received by one player, in order.
std::vector<Message> transcript_of(const std::vector<Message>& log, int player);

// Type profiles sharing one target share one decomposition and partition.
struct TargetGroup {
  Target target;
  std::vector<std::size_t> support_index;  // game profile index per support position
  Decomposition decomposition;
  LabeledPartition partition;
  std::size_t key_offset = 0;             // first index-set key of this group
  std::vector<std::size_t> type_profiles;  // empty without types
};

struct ProtocolInstance {
  ProtocolConfig config;
  Game game;
  std::optional<BayesianGame> bayes;
  std::vector<TargetGroup> groups;
  std::vector<int> group_of;  // per type profile; one entry without types
  std::optional<CommonRefinement> refinement;
  IndexSet index;
  RecommendationDomain domain;
  std::array<std::map<int, StrategyCodebook>, 3> codebooks;
  std::array<std::vector<TypeCodebook>, 3> type_codebooks;
  // tables[r][k] are owner r's tables held by relayer kRelayers[k], by subject.
  std::array<std::array<std::map<int, RecommendationTable>, 2>, 3> tables;
  std::vector<Message> setup_log;

  bool bayesian() const { return bayes.has_value(); }
  std::size_t cells() const { return domain.cells; }
  const Label& cell_label(std::size_t m) const;
  // Index-set key behind (cell m, type profile t).
  std::size_t key_of(std::size_t m, std::size_t t) const;
};

// Steps 1-5 for a complete-information target. Throws UsageError on bad
// configuration and ProtocolError / NumericError when construction fails.
ProtocolInstance setup_protocol(const ProtocolConfig& config, const Game& game,
                                const Target& target);
// Steps 1-6 for a type-conditional policy (one target per type profile with
// positive prior).
ProtocolInstance setup_bayesian_protocol(const ProtocolConfig& config, const BayesianGame& game,
                                         const std::map<std::size_t, Target>& policy);

// d* = (sum of shares) mod 1. Throws ProtocolError on a missing share.
ExactReal joint_random_unit(const std::vector<std::optional<ExactReal>>& shares);
// x* = 1 + (sum - 1) mod total. Throws ProtocolError on a missing or
// out-of-range share.
std::size_t joint_random_index(const std::vector<std::optional<std::size_t>>& shares,
                               std::size_t total);

struct Attempt {
  ExactReal d_star;
  std::size_t x_star = 0;
  std::size_t cell = 0;
  int redraws = 0;  // joint draws discarded for d* = 0 or a repeated (cell, x)
  bool dummy = false;
  // Ground truth for tests and audits; no player computes these.
  std::size_t key = 0;
  int support_position = -1;
};

struct Copy {
  int player = 0;
  int owner = 0;
  int relayer = 0;
  Label label;
  int action = kNullAction;
};

enum class RoundStatus { kDelivered, kAbortedDummy, kFailedConsistency };
const char* to_string(RoundStatus status);

struct RoundOutcome {
  RoundStatus status = RoundStatus::kAbortedDummy;
  std::vector<Attempt> attempts;
  std::optional<std::size_t> type_profile;
  std::optional<std::size_t> profile;  // game profile index when delivered
  std::vector<int> actions;            // decided action per player
  std::vector<Copy> copies;            // copies of the final attempt
  std::vector<std::vector<Label>> emitted;  // distinct ciphertext labels per attempt
  std::vector<Message> transcript;
  std::vector<Secret> secrets;
  std::string failure;
};

struct PlayOptions {
  std::optional<std::size_t> type_profile;  // otherwise drawn from the prior
  std::optional<int> corrupt_player;        // replace one copy with a wrong label
  bool record = true;                       // keep transcript and secrets
};

// Step 6 (Step 7 with types): joint randomness, encrypted types, delivery and
// local decryption, repeated on dummy draws up to max_retries times.
RoundOutcome play_round(const ProtocolInstance& instance, std::uint64_t seed,
                        const PlayOptions& options = {});

struct ProtocolRun {
  std::size_t trials = 0;
  std::vector<std::uint64_t> counts;                    // per game profile
  std::vector<std::vector<std::uint64_t>> type_counts;  // [t][profile]
  std::uint64_t delivered = 0;
  std::uint64_t aborted = 0;  // plays that ran out of retries
  std::uint64_t failed = 0;   // consistency failures
  std::uint64_t attempts = 0;
  std::uint64_t dummy_attempts = 0;
  std::uint64_t redraws = 0;
  std::map<std::size_t, std::uint64_t> retry_histogram;
  std::vector<RoundOutcome> sample;  // first plays, with transcripts
};

// Plays `trials` independent rounds over one instance with seeds derived from
// the configured seed.
ProtocolRun run_protocol(const ProtocolInstance& instance, std::size_t trials,
                         std::size_t sample = 8);

}  // namespace cheaptalk

#endif  // CHEAPTALK_PROTOCOL_HPP_
