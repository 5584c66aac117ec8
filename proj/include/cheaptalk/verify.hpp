#ifndef CHEAPTALK_VERIFY_HPP_
#define CHEAPTALK_VERIFY_HPP_

#include <optional>
#include <vector>

#include "cheaptalk/game.hpp"

namespace cheaptalk {

// One incentive inequality, oriented so that slack >= -tolerance passes.
//
// Obedience constraints (CE, and truthful reports in the Bayesian case) carry
// one recommended/alternative pair. Misreport constraints carry the reported
// type and the best response deviation map delta: A_i -> A_i; their slack is
// truthful-obedient value minus the best misreport-and-deviate value.
struct IncentiveConstraint {
  int player = 0;
  int recommended = -1;
  int alternative = -1;
  int true_type = -1;
  int reported_type = -1;
  std::vector<int> deviation;
  ExactReal slack;

  bool is_misreport() const { return true_type != reported_type; }
};

struct VerificationReport {
  bool pass = true;
  ExactReal tolerance;
  std::size_t constraints_checked = 0;
  std::vector<IncentiveConstraint> violations;
  std::optional<IncentiveConstraint> worst;  // smallest slack seen
};

// Checks every (i, a_i, a_i') correlated-equilibrium inequality.
// Throws UsageError when p does not fit the game.
VerificationReport verify_correlated_equilibrium(const Game& game,
                                                 const ProfileDistribution& p,
                                                 const ExactReal& tolerance);
VerificationReport verify_correlated_equilibrium(const Game& game,
                                                 const ProfileDistribution& p);

// Communication-equilibrium check in revelation form: for every player, true
// type t_i and report t_i', no deviation map improves the interim expected
// payoff by more than the tolerance. Truthful reports reduce to per-pair
// obedience constraints, so with single-type players the report matches
// verify_correlated_equilibrium exactly. Conditional expectations are compared
// in unconditional form (both sides scaled by P(t_i)); types with zero marginal
// are skipped. Throws UsageError when a needed p[t] is missing.
VerificationReport verify_communication_equilibrium(const BayesianGame& game,
                                                    const TypeConditionalPolicy& policy,
                                                    const ExactReal& tolerance);
VerificationReport verify_communication_equilibrium(const BayesianGame& game,
                                                    const TypeConditionalPolicy& policy);

std::vector<ExactReal> expected_payoffs(const Game& game, const ProfileDistribution& p);

}  // namespace cheaptalk

#endif  // CHEAPTALK_VERIFY_HPP_
