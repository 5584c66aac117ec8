#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cheaptalk/audit.hpp"
#include "cheaptalk/errors.hpp"
#include "cheaptalk/expression.hpp"
#include "cheaptalk/protocol.hpp"
#include "cheaptalk/report.hpp"
#include "cheaptalk/rng.hpp"
#include "fixtures.hpp"

using namespace cheaptalk;

namespace {

ExactReal r(long n, long d = 1) { return ExactReal::from_rational(ExactRational(BigInt(n), BigInt(d))); }
ExactRational q(long n, long d = 1) { return ExactRational(BigInt(n), BigInt(d)); }

Target sqrt_target(int n) {
  return fixtures::diagonal_target(n, {eval_expression("sqrt(2)/2"), eval_expression("1 - sqrt(2)/2")});
}

ProtocolConfig config(std::uint64_t seed, int players = 5) {
  ProtocolConfig c;
  c.players = players;
  c.seed = seed;
  return c;
}

// Copies each player should receive: from every owner other than itself,
// through every relayer other than itself.
std::size_t expected_copies(int player) {
  std::size_t count = 0;
  for (int owner : kTrio) {
    for (int relayer : kRelayers) count += owner != player && relayer != player;
  }
  return count;
}

}  // namespace

TEST_CASE("joint random unit") {
  const std::vector<std::optional<ExactReal>> quarters(5, r(1, 4));
  CHECK(joint_random_unit(quarters) == r(1, 4));
  // Shares summing to exactly 1 land on the excluded point 0.
  CHECK(joint_random_unit({r(1, 4), r(1, 4), r(1, 4), r(1, 8), r(1, 8)}).is_zero());
  // Five rounded copies of 1/5 land within a few ulps of that point.
  const ExactReal d = joint_random_unit(std::vector<std::optional<ExactReal>>(5, r(1, 5)));
  CHECK((d.is_zero() || d > r(1) - ExactReal::pow2(-120) || d < ExactReal::pow2(-120)));
  std::vector<std::optional<ExactReal>> missing = quarters;
  missing[2].reset();
  CHECK_THROWS_AS(joint_random_unit(missing), ProtocolError);

  SUBCASE("one uniform share makes the sum uniform") {
    Rng rng(12);
    std::vector<std::uint64_t> bins(10, 0);
    for (int k = 0; k < 100000; ++k) {
      std::vector<std::optional<ExactReal>> shares{r(9, 10), r(7, 10), rng.open_unit(), r(1, 3), r(2, 3)};
      const ExactReal d = joint_random_unit(shares);
      ++bins[static_cast<std::size_t>(d.to_double() * 10)];
    }
    const auto fit = chi_square_gof(bins, std::vector<ExactReal>(10, r(1, 10)));
    CHECK(fit.pass);
  }
}

TEST_CASE("joint random index") {
  CHECK(joint_random_index(std::vector<std::optional<std::size_t>>(5, 1), 8) == 5);
  CHECK(joint_random_index({2, 2, 2, 2, 1}, 8) == 1);
  CHECK(joint_random_index({8, 8, 8, 8, 8}, 8) == 8);
  CHECK_THROWS_AS(joint_random_index({1, 2, std::nullopt, 1, 1}, 8), ProtocolError);
  CHECK_THROWS_AS(joint_random_index({1, 9, 1, 1, 1}, 8), ProtocolError);
}

TEST_CASE("configuration checks") {
  ProtocolConfig c;
  c.players = 4;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = ProtocolConfig{};
  c.fragmentation = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = ProtocolConfig{};
  c.max_retries = -1;
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK(parse_message_kind(to_string(MessageKind::kRecommendation)) == MessageKind::kRecommendation);
  CHECK_THROWS_AS(parse_message_kind("nonsense"), ParseError);
}

TEST_CASE("setup builds one table per owner, relayer and subject") {
  const Game game = fixtures::coordination(6, 2);
  const auto inst = setup_protocol(config(3, 6), game, sqrt_target(6));
  for (int owner : kTrio) {
    CHECK(inst.codebooks[owner].size() == 5);
    for (int k = 0; k < 2; ++k) {
      std::vector<int> subjects;
      for (const auto& [subject, table] : inst.tables[owner][k]) subjects.push_back(subject);
      CHECK(subjects == table_subjects(6, owner, kRelayers[k]));
    }
  }
  CHECK(inst.cells() == inst.groups.front().partition.size());
  CHECK_FALSE(inst.setup_log.empty());
}

TEST_CASE("exact law by enumeration over cells and indices") {
  const Game game = fixtures::coordination(5, 2);
  const Target target = sqrt_target(5);
  const auto inst = setup_protocol(config(5), game, target);
  const auto& part = inst.groups.front().partition;
  std::vector<ExactReal> mass(game.num_profiles(), r(0));
  for (std::size_t m = 0; m < inst.cells(); ++m) {
    for (std::size_t x = 1; x <= inst.index.total(); ++x) {
      const long long prof = inst.domain.profile[inst.domain.position(m, x)];
      if (prof >= 0) mass[prof] += part.cells[m].measure() / r(static_cast<long>(inst.index.non_dummy()));
    }
  }
  const ExactReal bound = ExactReal::pow2(8 - 128) * r(static_cast<long>(inst.cells() + 2));
  CHECK((mass[0] - target.dist.probs[0]).abs() <= bound);
  CHECK((mass[31] - target.dist.probs[1]).abs() <= bound);
}

TEST_CASE("point-mass target delivers its profile every time") {
  const Game game = fixtures::coordination(5, 3);
  Target t = fixtures::diagonal_target(5, {r(1)}, RationalVector{q(1)});
  t.dist.support[0] = Profile(5, 2);
  const auto inst = setup_protocol(config(8), game, t);
  const auto run = run_protocol(inst, 300);
  CHECK(run.delivered == 300);
  CHECK(run.counts[game.profiles().encode(Profile(5, 2))] == 300);
}

TEST_CASE("no dummies, no aborts") {
  ProtocolConfig c = config(2);
  c.dummy_count = 0;
  c.max_retries = 0;
  const auto inst = setup_protocol(c, fixtures::coordination(5, 2), sqrt_target(5));
  const auto run = run_protocol(inst, 500);
  CHECK(run.dummy_attempts == 0);
  CHECK(run.aborted == 0);
  CHECK(run.delivered == 500);
}

TEST_CASE("copies agree and follow the routing pattern") {
  for (int n : {5, 6}) {
    const auto inst = setup_protocol(config(10 + n, n), fixtures::coordination(n, 2), sqrt_target(n));
    for (std::uint64_t s = 0; s < 300; ++s) {
      const auto out = play_round(inst, s);
      REQUIRE(out.status == RoundStatus::kDelivered);
      std::map<int, std::size_t> copies;
      for (const auto& c : out.copies) {
        ++copies[c.player];
        CHECK(c.action == out.actions[c.player]);
        CHECK(c.owner != c.player);
        CHECK(c.relayer != c.player);
      }
      for (int i = 0; i < n; ++i) CHECK(copies[i] == expected_copies(i));
      CHECK(check_routing(out, n).empty());
      CHECK(check_transcript_privacy(out).empty());
      CHECK(check_label_single_use(inst, out).empty());
    }
  }
  CHECK(expected_copies(0) == 4);
  CHECK(expected_copies(3) == 3);
  CHECK(expected_copies(5) == 6);
}

TEST_CASE("transcripts") {
  const auto inst = setup_protocol(config(4), fixtures::coordination(5, 2), sqrt_target(5));
  const auto out = play_round(inst, 1);
  for (int i = 0; i < 5; ++i) {
    for (const auto& m : transcript_of(out.transcript, i)) CHECK((m.sender == i || m.receiver == i));
  }
  // Relayers see the joint randomness; nobody else does.
  bool relayer_saw_d = false;
  for (const auto& secret : out.secrets) {
    if (secret.token.rfind("d*:", 0) == 0) {
      CHECK(secret.authorized == std::vector<int>{3, 4});
      for (const auto& m : transcript_of(out.transcript, 3)) {
        relayer_saw_d |= std::find(m.items.begin(), m.items.end(), secret.token) != m.items.end();
      }
    }
  }
  CHECK(relayer_saw_d);
  PlayOptions quiet;
  quiet.record = false;
  const auto bare = play_round(inst, 1, quiet);
  CHECK(bare.transcript.empty());
  CHECK(bare.profile == out.profile);
}

TEST_CASE("dummy draws retry, and exhaustion aborts") {
  ProtocolConfig c = config(6);
  c.dummy_count = 40;
  c.max_retries = 0;
  const auto inst = setup_protocol(c, fixtures::coordination(5, 2), sqrt_target(5));
  const auto run = run_protocol(inst, 400);
  CHECK(run.aborted > 0);
  CHECK(run.aborted + run.delivered == 400);
  CHECK(run.dummy_attempts == run.aborted);

  c.max_retries = 200;
  const auto patient = setup_protocol(c, fixtures::coordination(5, 2), sqrt_target(5));
  const auto ok = run_protocol(patient, 400);
  CHECK(ok.delivered == 400);
  CHECK(ok.attempts == 400 + ok.dummy_attempts);
  std::uint64_t hist = 0;
  for (const auto& [retries, plays] : ok.retry_histogram) hist += retries * plays;
  CHECK(hist == ok.dummy_attempts);
}

TEST_CASE("aborts are independent of the delivered profile") {
  ProtocolConfig c = config(21);
  c.dummy_count = 4;
  c.max_retries = 100;
  const auto inst = setup_protocol(c, fixtures::coordination(5, 2), sqrt_target(5));
  // 2x2 table: (first attempt was a dummy) x (delivered profile).
  double table[2][2] = {{0, 0}, {0, 0}};
  PlayOptions quiet;
  quiet.record = false;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    const auto out = play_round(inst, derive_seed(77, "play", s), quiet);
    REQUIRE(out.status == RoundStatus::kDelivered);
    table[out.attempts.size() > 1][*out.profile == 0 ? 0 : 1] += 1;
  }
  double total = 0, rows[2] = {0, 0}, cols[2] = {0, 0};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rows[a] += table[a][b];
      cols[b] += table[a][b];
      total += table[a][b];
    }
  }
  double stat = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double e = rows[a] * cols[b] / total;
      stat += (table[a][b] - e) * (table[a][b] - e) / e;
    }
  }
  CHECK(rows[1] > 100);
  CHECK(stat < 10.828);  // chi-square, one degree of freedom, alpha = 0.001
}

TEST_CASE("consistency faults") {
  ProtocolConfig c = config(9);
  const auto inst = setup_protocol(c, fixtures::coordination(5, 2), sqrt_target(5));
  PlayOptions bad;
  bad.corrupt_player = 2;
  const auto out = play_round(inst, 4, bad);
  CHECK(out.status == RoundStatus::kFailedConsistency);
  CHECK_FALSE(out.failure.empty());

  c.majority_decode = true;
  const auto voting = setup_protocol(c, fixtures::coordination(5, 2), sqrt_target(5));
  const auto fixed = play_round(voting, 4, bad);
  CHECK(fixed.status == RoundStatus::kDelivered);
  CHECK(fixed.profile == play_round(voting, 4).profile);
}

TEST_CASE("determinism") {
  const auto a = setup_protocol(config(15), fixtures::coordination(5, 2), sqrt_target(5));
  const auto b = setup_protocol(config(15), fixtures::coordination(5, 2), sqrt_target(5));
  const auto ra = run_protocol(a, 200, 3);
  const auto rb = run_protocol(b, 200, 3);
  CHECK(ra.counts == rb.counts);
  CHECK(render(run_summary_json(a, ra)) == render(run_summary_json(b, rb)));
  for (std::size_t k = 0; k < ra.sample.size(); ++k) {
    CHECK(render(outcome_json(ra.sample[k])) == render(outcome_json(rb.sample[k])));
  }
  const auto single = run_protocol(a, 1);
  CHECK(single.trials == 1);
  CHECK(single.sample.size() == 1);
}

TEST_CASE("Bayesian rounds") {
  const Game base = fixtures::coordination(5, 2);
  SUBCASE("disjoint supports reveal the sampled type profile") {
    // Player 0's type decides which diagonal profile is recommended.
    std::vector<ExactReal> prior(2, r(1, 2));
    std::vector<std::vector<std::string>> types(5, {"-"});
    types[0] = {"lo", "hi"};
    const BayesianGame bg(base, types, prior, {});
    std::map<std::size_t, Target> policy;
    policy[0] = fixtures::diagonal_target(5, {r(1)}, RationalVector{q(1)});
    Target hi = policy[0];
    hi.dist.support[0] = Profile(5, 1);
    policy[1] = hi;
    const auto inst = setup_bayesian_protocol(config(3), bg, policy);
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto out = play_round(inst, s);
      REQUIRE(out.status == RoundStatus::kDelivered);
      REQUIRE(out.type_profile.has_value());
      CHECK(*out.profile == (*out.type_profile == 0 ? 0u : 31u));
      CHECK(check_routing(out, 5).empty());
      CHECK(check_transcript_privacy(out).empty());
      CHECK(check_label_single_use(inst, out).empty());
    }
  }
  SUBCASE("single type profile behaves like the complete-information protocol") {
    const BayesianGame bg(base, std::vector<std::vector<std::string>>(5, {"-"}), {r(1)}, {});
    const auto inst = setup_bayesian_protocol(config(4), bg, {{0, sqrt_target(5)}});
    const auto run = run_protocol(inst, 3000);
    CHECK(run.delivered == 3000);
    const auto fit = chi_square_gof(support_counts(base, sqrt_target(5).dist, run.counts),
                                    sqrt_target(5).dist.probs);
    CHECK(fit.pass);
  }
  SUBCASE("forced type profile") {
    std::vector<std::vector<std::string>> types(5, {"a", "b"});
    std::vector<ExactReal> prior(32, r(1, 32));
    const BayesianGame bg(base, types, prior, {});
    std::map<std::size_t, Target> policy;
    for (std::size_t t = 0; t < 32; ++t) policy[t] = sqrt_target(5);
    const auto inst = setup_bayesian_protocol(config(5), bg, policy);
    CHECK(inst.groups.size() == 1);
    PlayOptions opts;
    opts.type_profile = 17;
    const auto out = play_round(inst, 2, opts);
    CHECK(out.type_profile == 17u);
    // Each player sees its own type as a secret it alone may hold.
    int type_secrets = 0;
    for (const auto& s : out.secrets) type_secrets += s.token.rfind("t", 0) == 0 && s.authorized.size() == 1;
    CHECK(type_secrets == 5);
    CHECK(check_transcript_privacy(out).empty());
  }
  SUBCASE("policy gaps") {
    std::vector<std::vector<std::string>> types(5, {"-"});
    types[1] = {"a", "b"};
    const BayesianGame bg(base, types, {r(1, 2), r(1, 2)}, {});
    CHECK_THROWS_AS(setup_bayesian_protocol(config(1), bg, {{0, sqrt_target(5)}}), UsageError);
  }
}
