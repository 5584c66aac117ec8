#ifndef CHEAPTALK_AUDIT_HPP_
#define CHEAPTALK_AUDIT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cheaptalk/game.hpp"
#include "cheaptalk/protocol.hpp"

namespace cheaptalk {

struct Finding {
  std::string check;
  std::string detail;
};

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  double alpha = 0.001;
  std::size_t bins = 0;  // after pooling
  bool pass = true;
};

// Pearson goodness of fit of counts against probs. Bins with expected count
// below 5 are pooled; observations in a zero-probability bin fail outright.
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                               const std::vector<ExactReal>& probs, double alpha = 0.001);

// Reorders per-game-profile counts into the target's support order, with one
// trailing bin for every profile outside the support.
std::vector<std::uint64_t> support_counts(const Game& game, const ProfileDistribution& target,
                                          const std::vector<std::uint64_t>& profile_counts);

struct AbortRateResult {
  std::uint64_t attempts = 0;
  std::uint64_t aborts = 0;
  double expected = 0;
  double observed = 0;
  double lower = 0;
  double upper = 0;
  double sigmas = 4;
  bool pass = true;
};

// Two-sided binomial check of the attempt-level dummy rate against
// b / (X + b). Throws UsageError below 1000 attempts.
AbortRateResult abort_rate_check(std::uint64_t attempts, std::uint64_t aborts, std::uint64_t b,
                                 std::uint64_t x, double sigmas = 4);

struct DeviationEntry {
  int player = 0;
  int recommended = 0;
  int alternative = 0;
  ExactReal delta;  // gain from switching; <= tol for every entry iff CE
};

std::vector<DeviationEntry> deviation_table(const Game& game, const ProfileDistribution& p);

struct CodebookDump {
  int owner = 0;
  int subject = 0;
  std::vector<Label> encrypt;
  std::vector<Label> decoys;
};

struct FitInput {
  std::optional<std::size_t> type_profile;
  std::vector<ExactReal> probs;        // support order
  std::vector<std::uint64_t> counts;   // support order plus the outside bin
};

// Everything an offline audit needs from a run.
struct RunArtifact {
  bool bayesian = false;
  int players = 0;
  std::uint64_t seed = 0;
  std::size_t index_total = 0;
  std::size_t index_non_dummy = 0;
  std::uint64_t declared_dummy = 0;
  bool codebooks_dumped = true;  // false when the run kept its codebooks private
  std::vector<CodebookDump> codebooks;
  std::uint64_t trials = 0;
  std::uint64_t attempts = 0;
  std::uint64_t dummy_attempts = 0;
  std::vector<FitInput> fits;
  std::vector<RoundOutcome> plays;
};

RunArtifact make_artifact(const ProtocolInstance& instance, const ProtocolRun& run);

// No ciphertext label serves two domain points, no decoy or unknown label is
// ever emitted, and no label is emitted in two attempts of one play.
std::vector<Finding> check_label_single_use(const RunArtifact& artifact);
std::vector<Finding> check_label_single_use(const ProtocolInstance& instance,
                                            const RoundOutcome& outcome);

// Secret tokens only in transcripts of authorized players.
std::vector<Finding> check_transcript_privacy(const RoundOutcome& outcome);

// Every play message follows the routing pattern: shares and encrypted types
// go to relayers, recommendations for subject i from owner r travel through a
// relayer l with i not in {r, l} and reach i.
std::vector<Finding> check_routing(const RoundOutcome& outcome, int players);

struct AuditReport {
  bool labels_checked = true;
  std::vector<Finding> label_findings;
  std::vector<Finding> privacy_findings;
  std::vector<Finding> routing_findings;
  std::vector<ChiSquareResult> fits;
  std::vector<std::optional<std::size_t>> fit_types;
  std::optional<AbortRateResult> abort_rate;  // absent below 1000 attempts

  bool labels_pass() const { return label_findings.empty(); }
  bool privacy_pass() const { return privacy_findings.empty(); }
  bool routing_pass() const { return routing_findings.empty(); }
  bool fit_pass() const;
  bool abort_pass() const { return !abort_rate || abort_rate->pass; }
  bool pass() const {
    return labels_pass() && privacy_pass() && routing_pass() && fit_pass() && abort_pass();
  }
};

AuditReport audit_artifact(const RunArtifact& artifact, double alpha = 0.001);

enum class FaultKind { kDuplicateLabel, kPlaintextLeak, kWrongDummyCount, kMisroutedMessage };

const char* to_string(FaultKind kind);
FaultKind parse_fault_kind(const std::string& text);
// Audit check expected to catch the fault.
const char* targeted_check(FaultKind kind);

// Corrupts an honest artifact in place. Throws UsageError when the artifact
// lacks the material the fault needs (for example no recorded transcript).
void inject_fault(RunArtifact& artifact, FaultKind kind, std::uint64_t seed);

}  // namespace cheaptalk

#endif  // CHEAPTALK_AUDIT_HPP_
