#include "cheaptalk/verify.hpp"

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

namespace {

int precision_of(const ProfileDistribution& p) {
  return p.probs.empty() ? kDefaultPrecision : p.probs.front().precision();
}

void record(VerificationReport& report, IncentiveConstraint c, const ExactReal& bound) {
  ++report.constraints_checked;
  if (!report.worst || c.slack < report.worst->slack) report.worst = c;
  if (c.slack < -bound) {
    report.pass = false;
    report.violations.push_back(std::move(c));
  }
}

}  // namespace

VerificationReport verify_correlated_equilibrium(const Game& game,
                                                 const ProfileDistribution& p,
                                                 const ExactReal& tolerance) {
  std::vector<ExactReal> dense = p.dense(game);
  const int precision = precision_of(p);
  const auto& space = game.profiles();
  VerificationReport report;
  report.tolerance = tolerance;
  for (int i = 0; i < game.num_players(); ++i) {
    const int k = game.num_actions(i);
    std::vector<std::vector<ExactReal>> slack(
        k, std::vector<ExactReal>(k, ExactReal::from_int(0, precision)));
    for (std::size_t q = 0; q < dense.size(); ++q) {
      if (dense[q].is_zero()) continue;
      const int rec = space.component(q, i);
      for (int alt = 0; alt < k; ++alt) {
        if (alt == rec) continue;
        slack[rec][alt] +=
            dense[q] * (game.payoff(i, q) - game.payoff(i, space.replace(q, i, alt)));
      }
    }
    for (int rec = 0; rec < k; ++rec) {
      for (int alt = 0; alt < k; ++alt) {
        if (alt == rec) continue;
        IncentiveConstraint c;
        c.player = i;
        c.recommended = rec;
        c.alternative = alt;
        c.slack = slack[rec][alt];
        record(report, std::move(c), tolerance);
      }
    }
  }
  return report;
}

VerificationReport verify_correlated_equilibrium(const Game& game,
                                                 const ProfileDistribution& p) {
  return verify_correlated_equilibrium(game, p, default_tolerance(precision_of(p)));
}

VerificationReport verify_communication_equilibrium(const BayesianGame& game,
                                                    const TypeConditionalPolicy& policy,
                                                    const ExactReal& tolerance) {
  const auto& types = game.type_profiles();
  const auto& space = game.base().profiles();
  const int n = game.num_players();
  int precision = tolerance.precision();

  // Dense p[t] for every type profile that has a policy entry.
  std::vector<std::optional<std::vector<ExactReal>>> dense(types.size());
  for (const auto& [t, dist] : policy) {
    if (t >= types.size()) throw UsageError("policy refers to an unknown type profile");
    dense[t] = dist.dense(game.base());
    precision = std::max(precision, precision_of(dist));
  }
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (game.prior(t).sign() > 0 && !dense[t]) {
      throw UsageError("policy is missing p[t] for type profile " + std::to_string(t));
    }
  }
  auto policy_at = [&](std::size_t t) -> const std::vector<ExactReal>& {
    if (!dense[t]) {
      throw UsageError("policy is missing p[t] for type profile " + std::to_string(t) +
                       " (reachable by misreporting)");
    }
    return *dense[t];
  };
  const ExactReal zero = ExactReal::from_int(0, precision);

  VerificationReport report;
  report.tolerance = tolerance;
  for (int i = 0; i < n; ++i) {
    const int k = game.base().num_actions(i);
    for (int ti = 0; ti < game.num_types(i); ++ti) {
      // Type profiles consistent with t_i, with positive prior.
      std::vector<std::size_t> others;
      ExactReal marginal = zero;
      for (std::size_t t = 0; t < types.size(); ++t) {
        if (types.component(t, i) != ti || game.prior(t).sign() <= 0) continue;
        others.push_back(t);
        marginal += game.prior(t);
      }
      if (marginal.sign() <= 0) continue;
      const ExactReal bound = tolerance * marginal;

      for (int report_type = 0; report_type < game.num_types(i); ++report_type) {
        if (report_type == ti) {
          std::vector<std::vector<ExactReal>> slack(k, std::vector<ExactReal>(k, zero));
          for (std::size_t t : others) {
            const auto& pt = policy_at(t);
            for (std::size_t q = 0; q < pt.size(); ++q) {
              if (pt[q].is_zero()) continue;
              const int rec = space.component(q, i);
              const ExactReal w = game.prior(t) * pt[q];
              for (int alt = 0; alt < k; ++alt) {
                if (alt == rec) continue;
                slack[rec][alt] += w * (game.payoff(t, i, q) -
                                        game.payoff(t, i, space.replace(q, i, alt)));
              }
            }
          }
          for (int rec = 0; rec < k; ++rec) {
            for (int alt = 0; alt < k; ++alt) {
              if (alt == rec) continue;
              IncentiveConstraint c;
              c.player = i;
              c.recommended = rec;
              c.alternative = alt;
              c.true_type = ti;
              c.reported_type = ti;
              ++report.constraints_checked;
              const bool violated = slack[rec][alt] < -bound;
              c.slack = slack[rec][alt] / marginal;
              if (!report.worst || c.slack < report.worst->slack) report.worst = c;
              if (violated) {
                report.pass = false;
                report.violations.push_back(std::move(c));
              }
            }
          }
          continue;
        }
        // Misreport: truthful value against the best deviation map.
        ExactReal truthful = zero;
        std::vector<std::vector<ExactReal>> gain(k, std::vector<ExactReal>(k, zero));
        for (std::size_t t : others) {
          const auto& pt = policy_at(t);
          for (std::size_t q = 0; q < pt.size(); ++q) {
            if (!pt[q].is_zero()) truthful += game.prior(t) * pt[q] * game.payoff(t, i, q);
          }
          const auto& pr = policy_at(types.replace(t, i, report_type));
          for (std::size_t q = 0; q < pr.size(); ++q) {
            if (pr[q].is_zero()) continue;
            const int rec = space.component(q, i);
            const ExactReal w = game.prior(t) * pr[q];
            for (int alt = 0; alt < k; ++alt) {
              gain[rec][alt] += w * game.payoff(t, i, space.replace(q, i, alt));
            }
          }
        }
        IncentiveConstraint c;
        c.player = i;
        c.true_type = ti;
        c.reported_type = report_type;
        c.deviation.assign(k, 0);
        ExactReal deviating = zero;
        for (int rec = 0; rec < k; ++rec) {
          int best = rec;
          for (int alt = 0; alt < k; ++alt) {
            if (gain[rec][alt] > gain[rec][best]) best = alt;
          }
          c.deviation[rec] = best;
          deviating += gain[rec][best];
        }
        const ExactReal raw = truthful - deviating;
        ++report.constraints_checked;
        const bool violated = raw < -bound;
        c.slack = raw / marginal;
        if (!report.worst || c.slack < report.worst->slack) report.worst = c;
        if (violated) {
          report.pass = false;
          report.violations.push_back(std::move(c));
        }
      }
    }
  }
  return report;
}

VerificationReport verify_communication_equilibrium(const BayesianGame& game,
                                                    const TypeConditionalPolicy& policy) {
  int precision = game.prior().front().precision();
  return verify_communication_equilibrium(game, policy, default_tolerance(precision));
}

std::vector<ExactReal> expected_payoffs(const Game& game, const ProfileDistribution& p) {
  const int precision = precision_of(p);
  std::vector<ExactReal> out(game.num_players(), ExactReal::from_int(0, precision));
  for (std::size_t q = 0; q < p.support.size(); ++q) {
    std::size_t idx = game.profiles().encode(p.support[q]);
    for (int i = 0; i < game.num_players(); ++i) out[i] += p.probs[q] * game.payoff(i, idx);
  }
  return out;
}

}  // namespace cheaptalk
