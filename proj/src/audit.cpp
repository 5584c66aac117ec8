#include "cheaptalk/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include <boost/math/distributions/chi_squared.hpp>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

namespace {

struct LabelSite {
  std::size_t book = 0;
  std::size_t position = 0;
  bool decoy = false;
};

std::string describe(const std::vector<CodebookDump>& books, const LabelSite& s) {
  const auto& b = books[s.book];
  return "C_" + std::to_string(b.subject) + "^(" + std::to_string(b.owner) + ")" +
         (s.decoy ? " decoy " : " point ") + std::to_string(s.position);
}

std::vector<Finding> label_findings(const std::vector<CodebookDump>& books,
                                    const std::vector<RoundOutcome>& plays) {
  std::vector<Finding> out;
  std::unordered_map<Label, LabelSite, LabelHash> seen;
  for (std::size_t b = 0; b < books.size(); ++b) {
    auto visit = [&](const std::vector<Label>& labels, bool decoy) {
      for (std::size_t k = 0; k < labels.size(); ++k) {
        LabelSite site{b, k, decoy};
        auto [it, fresh] = seen.emplace(labels[k], site);
        if (!fresh) {
          out.push_back({"label-single-use", "label " + labels[k].hex() + " serves both " +
                                                 describe(books, it->second) + " and " +
                                                 describe(books, site)});
        }
      }
    };
    visit(books[b].encrypt, false);
    visit(books[b].decoys, true);
  }
  for (std::size_t p = 0; p < plays.size(); ++p) {
    std::unordered_map<Label, std::size_t, LabelHash> first_attempt;
    for (std::size_t a = 0; a < plays[p].emitted.size(); ++a) {
      for (const auto& label : plays[p].emitted[a]) {
        auto it = seen.find(label);
        if (it == seen.end()) {
          out.push_back({"label-single-use", "play " + std::to_string(p) + " attempt " +
                                                 std::to_string(a) + " emitted unknown label " +
                                                 label.hex()});
        } else if (it->second.decoy) {
          out.push_back({"label-single-use", "play " + std::to_string(p) + " attempt " +
                                                 std::to_string(a) + " emitted decoy " + label.hex()});
        }
        auto [prev, fresh] = first_attempt.emplace(label, a);
        if (!fresh) {
          out.push_back({"label-single-use", "play " + std::to_string(p) + " emitted " +
                                                 label.hex() + " in attempts " +
                                                 std::to_string(prev->second) + " and " +
                                                 std::to_string(a)});
        }
      }
    }
  }
  return out;
}

std::vector<CodebookDump> dump_codebooks(const ProtocolInstance& inst) {
  std::vector<CodebookDump> out;
  for (int r : kTrio) {
    for (const auto& [i, book] : inst.codebooks[r]) {
      out.push_back({r, i, book.encrypt, book.decoys});
    }
  }
  return out;
}

std::string message_coordinates(const Message& m) {
  return "attempt " + std::to_string(m.attempt) + ", " + to_string(m.kind) + " " +
         std::to_string(m.sender) + "->" + std::to_string(m.receiver);
}

}  // namespace

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                               const std::vector<ExactReal>& probs, double alpha) {
  if (counts.size() < probs.size() || counts.size() > probs.size() + 1) {
    throw UsageError("chi-square: counts and probabilities disagree in length");
  }
  ChiSquareResult res;
  res.alpha = alpha;
  double n = 0;
  for (auto c : counts) n += static_cast<double>(c);
  if (n == 0) throw UsageError("chi-square: no observations");

  struct Bin {
    double expected;
    double observed;
  };
  std::vector<Bin> bins;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double p = k < probs.size() ? probs[k].to_double() : 0.0;
    const double obs = static_cast<double>(counts[k]);
    if (p <= 0) {
      if (obs > 0) {
        res.statistic = std::numeric_limits<double>::infinity();
        res.p_value = 0;
        res.pass = false;
        res.bins = counts.size();
        res.dof = static_cast<int>(counts.size()) - 1;
        return res;
      }
      continue;
    }
    bins.push_back({p * n, obs});
  }
  std::sort(bins.begin(), bins.end(),
            [](const Bin& a, const Bin& b) { return a.expected < b.expected; });
  while (bins.size() > 1 && bins.front().expected < 5) {
    Bin merged{bins[0].expected + bins[1].expected, bins[0].observed + bins[1].observed};
    bins.erase(bins.begin(), bins.begin() + 2);
    auto pos = std::lower_bound(bins.begin(), bins.end(), merged,
                                [](const Bin& a, const Bin& b) { return a.expected < b.expected; });
    bins.insert(pos, merged);
  }
  res.bins = bins.size();
  res.dof = static_cast<int>(bins.size()) - 1;
  for (const auto& b : bins) {
    const double diff = b.observed - b.expected;
    res.statistic += diff * diff / b.expected;
  }
  if (res.dof < 1) {
    res.p_value = 1;
  } else {
    boost::math::chi_squared_distribution<double> dist(res.dof);
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  }
  res.pass = res.p_value >= alpha;
  return res;
}

std::vector<std::uint64_t> support_counts(const Game& game, const ProfileDistribution& target,
                                          const std::vector<std::uint64_t>& profile_counts) {
  if (profile_counts.size() != game.num_profiles()) {
    throw UsageError("profile counts do not match the game");
  }
  std::vector<std::uint64_t> out(target.size() + 1, 0);
  std::vector<long long> position(game.num_profiles(), -1);
  for (std::size_t q = 0; q < target.size(); ++q) {
    position[game.profiles().encode(target.support[q])] = static_cast<long long>(q);
  }
  for (std::size_t k = 0; k < profile_counts.size(); ++k) {
    out[position[k] < 0 ? target.size() : static_cast<std::size_t>(position[k])] += profile_counts[k];
  }
  return out;
}

AbortRateResult abort_rate_check(std::uint64_t attempts, std::uint64_t aborts, std::uint64_t b,
                                 std::uint64_t x, double sigmas) {
  if (attempts < 1000) throw UsageError("abort-rate check needs at least 1000 attempts");
  if (x == 0) throw UsageError("abort-rate check needs X > 0");
  AbortRateResult r;
  r.attempts = attempts;
  r.aborts = aborts;
  r.sigmas = sigmas;
  r.expected = static_cast<double>(b) / static_cast<double>(x + b);
  r.observed = static_cast<double>(aborts) / static_cast<double>(attempts);
  const double sd = std::sqrt(r.expected * (1 - r.expected) / static_cast<double>(attempts));
  r.lower = r.expected - sigmas * sd;
  r.upper = r.expected + sigmas * sd;
  r.pass = r.observed >= r.lower && r.observed <= r.upper;
  return r;
}

std::vector<DeviationEntry> deviation_table(const Game& game, const ProfileDistribution& p) {
  const std::vector<ExactReal> dense = p.dense(game);
  const int precision = p.probs.empty() ? kDefaultPrecision : p.probs.front().precision();
  const auto& space = game.profiles();
  std::vector<DeviationEntry> out;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int rec = 0; rec < game.num_actions(i); ++rec) {
      for (int alt = 0; alt < game.num_actions(i); ++alt) {
        if (alt == rec) continue;
        ExactReal delta = ExactReal::from_int(0, precision);
        for (std::size_t q = 0; q < dense.size(); ++q) {
          if (space.component(q, i) != rec || dense[q].is_zero()) continue;
          delta += dense[q] * (game.payoff(i, space.replace(q, i, alt)) - game.payoff(i, q));
        }
        out.push_back({i, rec, alt, delta});
      }
    }
  }
  return out;
}

RunArtifact make_artifact(const ProtocolInstance& inst, const ProtocolRun& run) {
  RunArtifact a;
  a.bayesian = inst.bayesian();
  a.players = inst.config.players;
  a.seed = inst.config.seed;
  a.index_total = inst.index.total();
  a.index_non_dummy = inst.index.non_dummy();
  a.declared_dummy = inst.index.dummy_count();
  a.codebooks = dump_codebooks(inst);
  a.trials = run.trials;
  a.attempts = run.attempts;
  a.dummy_attempts = run.dummy_attempts;
  if (inst.bayesian()) {
    for (std::size_t t = 0; t < run.type_counts.size(); ++t) {
      std::uint64_t seen = 0;
      for (auto c : run.type_counts[t]) seen += c;
      if (seen == 0) continue;
      const auto& target = inst.groups[inst.group_of[t]].target.dist;
      a.fits.push_back({t, target.probs, support_counts(inst.game, target, run.type_counts[t])});
    }
  } else if (run.delivered > 0) {
    const auto& target = inst.groups.front().target.dist;
    a.fits.push_back({std::nullopt, target.probs, support_counts(inst.game, target, run.counts)});
  }
  a.plays = run.sample;
  return a;
}

std::vector<Finding> check_label_single_use(const RunArtifact& artifact) {
  return label_findings(artifact.codebooks, artifact.plays);
}

std::vector<Finding> check_label_single_use(const ProtocolInstance& instance,
                                            const RoundOutcome& outcome) {
  return label_findings(dump_codebooks(instance), {outcome});
}

std::vector<Finding> check_transcript_privacy(const RoundOutcome& outcome) {
  std::vector<Finding> out;
  for (const auto& secret : outcome.secrets) {
    auto allowed = [&secret](int player) {
      return std::find(secret.authorized.begin(), secret.authorized.end(), player) !=
             secret.authorized.end();
    };
    for (const auto& m : outcome.transcript) {
      if (std::find(m.items.begin(), m.items.end(), secret.token) == m.items.end()) continue;
      for (int player : {m.sender, m.receiver}) {
        if (!allowed(player)) {
          out.push_back({"transcript-privacy", "secret '" + secret.token +
                                                   "' in transcript of player " +
                                                   std::to_string(player) + " (" +
                                                   message_coordinates(m) + ")"});
        }
      }
    }
  }
  return out;
}

std::vector<Finding> check_routing(const RoundOutcome& outcome, int players) {
  std::vector<Finding> out;
  auto bad = [&out](const Message& m, const std::string& why) {
    out.push_back({"routing", message_coordinates(m) + ": " + why});
  };
  for (const auto& m : outcome.transcript) {
    if (m.sender < 0 || m.sender >= players || m.receiver < 0 || m.receiver >= players ||
        m.sender == m.receiver) {
      bad(m, "invalid endpoints");
      continue;
    }
    switch (m.kind) {
      case MessageKind::kRandomShare:
      case MessageKind::kIndexShare:
        if (!is_relayer(m.receiver)) bad(m, "share sent to a non-relayer");
        break;
      case MessageKind::kRelayerConfirm:
        if (!is_relayer(m.sender) || !is_relayer(m.receiver)) bad(m, "confirmation outside the relayers");
        break;
      case MessageKind::kEncryptedType:
        if (!is_relayer(m.receiver)) bad(m, "encrypted type sent to a non-relayer");
        if (m.subject != m.sender) bad(m, "encrypted type sent on behalf of another player");
        break;
      case MessageKind::kRecommendation:
        if (!is_relayer(m.sender)) bad(m, "recommendation from a non-relayer");
        else if (!is_trio(m.owner)) bad(m, "recommendation from an unknown owner");
        else if (m.subject == m.owner || m.subject == m.sender) bad(m, "subject excluded from this table");
        else if (m.receiver != m.subject) bad(m, "recommendation for player " + std::to_string(m.subject) +
                                                     " delivered to player " + std::to_string(m.receiver));
        break;
      default:
        bad(m, "setup message inside a play");
        break;
    }
  }
  return out;
}

bool AuditReport::fit_pass() const {
  return std::all_of(fits.begin(), fits.end(), [](const ChiSquareResult& r) { return r.pass; });
}

AuditReport audit_artifact(const RunArtifact& artifact, double alpha) {
  AuditReport report;
  report.labels_checked = artifact.codebooks_dumped;
  if (artifact.codebooks_dumped) report.label_findings = check_label_single_use(artifact);
  for (const auto& play : artifact.plays) {
    auto p = check_transcript_privacy(play);
    report.privacy_findings.insert(report.privacy_findings.end(), p.begin(), p.end());
    auto r = check_routing(play, artifact.players);
    report.routing_findings.insert(report.routing_findings.end(), r.begin(), r.end());
  }
  for (const auto& fit : artifact.fits) {
    report.fits.push_back(chi_square_gof(fit.counts, fit.probs, alpha));
    report.fit_types.push_back(fit.type_profile);
  }
  if (artifact.attempts >= 1000) {
    report.abort_rate = abort_rate_check(artifact.attempts, artifact.dummy_attempts,
                                         artifact.declared_dummy, artifact.index_non_dummy);
  }
  return report;
}

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::kDuplicateLabel: return "duplicate-label";
    case FaultKind::kPlaintextLeak: return "plaintext-leak";
    case FaultKind::kWrongDummyCount: return "wrong-dummy-count";
    case FaultKind::kMisroutedMessage: return "misrouted-message";
  }
  return "unknown";
}

FaultKind parse_fault_kind(const std::string& text) {
  for (FaultKind k : {FaultKind::kDuplicateLabel, FaultKind::kPlaintextLeak,
                      FaultKind::kWrongDummyCount, FaultKind::kMisroutedMessage}) {
    if (text == to_string(k)) return k;
  }
  throw UsageError("unknown fault kind '" + text + "'");
}

const char* targeted_check(FaultKind kind) {
  switch (kind) {
    case FaultKind::kDuplicateLabel: return "label-single-use";
    case FaultKind::kPlaintextLeak: return "transcript-privacy";
    case FaultKind::kWrongDummyCount: return "abort-rate";
    case FaultKind::kMisroutedMessage: return "routing";
  }
  return "unknown";
}

void inject_fault(RunArtifact& artifact, FaultKind kind, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "fault", static_cast<std::uint64_t>(kind)));
  switch (kind) {
    case FaultKind::kDuplicateLabel: {
      if (!artifact.codebooks_dumped) {
        throw UsageError("duplicate-label needs an artifact written with --debug-dump");
      }
      std::unordered_map<Label, int, LabelHash> emitted;
      for (const auto& play : artifact.plays) {
        for (const auto& attempt : play.emitted) {
          for (const auto& l : attempt) emitted[l] = 1;
        }
      }
      std::vector<std::pair<std::size_t, std::size_t>> spare;  // (book, position)
      for (std::size_t b = 0; b < artifact.codebooks.size(); ++b) {
        const auto& enc = artifact.codebooks[b].encrypt;
        for (std::size_t k = 0; k < enc.size(); ++k) {
          if (!emitted.count(enc[k])) spare.emplace_back(b, k);
        }
      }
      if (spare.size() < 2) throw UsageError("artifact has too few unused labels to duplicate");
      const auto src = spare[rng.below(spare.size())];
      auto dst = src;
      while (dst == src) dst = spare[rng.below(spare.size())];
      artifact.codebooks[dst.first].encrypt[dst.second] =
          artifact.codebooks[src.first].encrypt[src.second];
      return;
    }
    case FaultKind::kPlaintextLeak: {
      std::vector<std::pair<std::size_t, std::size_t>> candidates;  // (play, secret)
      for (std::size_t p = 0; p < artifact.plays.size(); ++p) {
        const auto& secrets = artifact.plays[p].secrets;
        for (std::size_t s = 0; s < secrets.size(); ++s) {
          if (secrets[s].token.rfind('a', 0) == 0 && secrets[s].authorized.size() == 1) {
            candidates.emplace_back(p, s);
          }
        }
      }
      if (candidates.empty()) throw UsageError("artifact has no delivered play with secrets");
      const auto [p, s] = candidates[rng.below(candidates.size())];
      auto& play = artifact.plays[p];
      const int owner = play.secrets[s].authorized.front();
      std::vector<std::size_t> outgoing;
      for (std::size_t k = 0; k < play.transcript.size(); ++k) {
        if (play.transcript[k].sender == owner) outgoing.push_back(k);
      }
      if (outgoing.empty()) throw UsageError("player sent no message to leak through");
      play.transcript[outgoing[rng.below(outgoing.size())]].items.push_back(play.secrets[s].token);
      return;
    }
    case FaultKind::kWrongDummyCount: {
      artifact.declared_dummy = artifact.declared_dummy > 0 ? 0 : artifact.index_non_dummy;
      return;
    }
    case FaultKind::kMisroutedMessage: {
      std::vector<std::pair<std::size_t, std::size_t>> candidates;
      for (std::size_t p = 0; p < artifact.plays.size(); ++p) {
        const auto& log = artifact.plays[p].transcript;
        for (std::size_t k = 0; k < log.size(); ++k) {
          if (log[k].kind == MessageKind::kRecommendation) candidates.emplace_back(p, k);
        }
      }
      if (candidates.empty()) throw UsageError("artifact has no recorded recommendation");
      const auto [p, k] = candidates[rng.below(candidates.size())];
      auto& m = artifact.plays[p].transcript[k];
      int to = m.receiver;
      while (to == m.receiver || to == m.sender) {
        to = static_cast<int>(rng.below(static_cast<std::uint64_t>(artifact.players)));
      }
      m.receiver = to;
      return;
    }
  }
}

}  // namespace cheaptalk
