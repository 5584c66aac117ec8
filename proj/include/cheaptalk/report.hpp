#ifndef CHEAPTALK_REPORT_HPP_
#define CHEAPTALK_REPORT_HPP_

#include <string>

#include "cheaptalk/audit.hpp"
#include "cheaptalk/decomposition.hpp"
#include "cheaptalk/game_io.hpp"
#include "cheaptalk/protocol.hpp"
#include "cheaptalk/verify.hpp"

namespace cheaptalk {

inline constexpr int kReportVersion = 1;

// {"decimal": ..., "hex": ...}
Json real_json(const ExactReal& value);
ExactReal real_from_json(const Json& value, const std::string& where);

Json config_json(const ProtocolConfig& config);

Json verification_json(const VerificationReport& report, const Game& game,
                       const BayesianGame* bayes = nullptr);

Json decomposition_json(const Decomposition& d, const std::vector<ExactReal>& target);

Json partition_json(const LabeledPartition& partition);

Json index_summary_json(const IndexSet& index, bool full);

Json chi_square_json(const ChiSquareResult& r);
Json abort_rate_json(const AbortRateResult& r);
Json findings_json(const std::vector<Finding>& findings);
Json audit_json(const AuditReport& report);

// Empirical frequencies, retry statistics and abort counts of a run.
Json run_summary_json(const ProtocolInstance& instance, const ProtocolRun& run);

Json outcome_json(const RoundOutcome& outcome);

// Run artifact with the embedded game document and configuration. Throws
// ParseError when reading an artifact with missing or malformed sections.
Json artifact_to_json(const RunArtifact& artifact, const Json& game_source, const Json& config);
RunArtifact artifact_from_json(const Json& doc);

// Two-space indented rendering with a trailing newline.
std::string render(const Json& doc);

}  // namespace cheaptalk

#endif  // CHEAPTALK_REPORT_HPP_
