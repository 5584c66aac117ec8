#include "cheaptalk/report.hpp"

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

namespace {

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing \"" + key + "\"");
  }
  return obj[key];
}

template <typename T>
T get(const Json& obj, const char* key, const std::string& where) {
  try {
    return field(obj, key, where).get<T>();
  } catch (const Json::type_error& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

Json labels_json(const std::vector<Label>& labels) {
  Json out = Json::array();
  for (const auto& l : labels) out.push_back(l.hex());
  return out;
}

std::vector<Label> labels_from_json(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of labels");
  std::vector<Label> out;
  out.reserve(v.size());
  for (const auto& s : v) {
    if (!s.is_string()) throw ParseError(where + ": expected label strings");
    out.push_back(Label::parse(s.get<std::string>()));
  }
  return out;
}

Json message_json(const Message& m) {
  return Json{{"sender", m.sender},   {"receiver", m.receiver}, {"attempt", m.attempt},
              {"kind", to_string(m.kind)}, {"owner", m.owner}, {"subject", m.subject},
              {"items", m.items}};
}

Message message_from_json(const Json& v, const std::string& where) {
  Message m;
  m.sender = get<int>(v, "sender", where);
  m.receiver = get<int>(v, "receiver", where);
  m.attempt = get<int>(v, "attempt", where);
  m.kind = parse_message_kind(get<std::string>(v, "kind", where));
  m.owner = get<int>(v, "owner", where);
  m.subject = get<int>(v, "subject", where);
  m.items = get<std::vector<std::string>>(v, "items", where);
  return m;
}

RoundOutcome outcome_from_json(const Json& v, const std::string& where) {
  RoundOutcome o;
  const std::string status = get<std::string>(v, "status", where);
  if (status == "delivered") o.status = RoundStatus::kDelivered;
  else if (status == "aborted-dummy") o.status = RoundStatus::kAbortedDummy;
  else if (status == "failed-consistency") o.status = RoundStatus::kFailedConsistency;
  else throw ParseError(where + ": unknown status '" + status + "'");
  if (!field(v, "type_profile", where).is_null()) o.type_profile = get<std::size_t>(v, "type_profile", where);
  if (!field(v, "profile", where).is_null()) o.profile = get<std::size_t>(v, "profile", where);
  o.actions = get<std::vector<int>>(v, "actions", where);
  const Json& attempts = field(v, "attempts", where);
  for (std::size_t k = 0; k < attempts.size(); ++k) {
    const std::string w = where + ".attempts[" + std::to_string(k) + "]";
    Attempt a;
    a.d_star = real_from_json(field(attempts[k], "d_star", w), w + ".d_star");
    a.x_star = get<std::size_t>(attempts[k], "x_star", w);
    a.cell = get<std::size_t>(attempts[k], "cell", w);
    a.redraws = get<int>(attempts[k], "redraws", w);
    a.dummy = get<bool>(attempts[k], "dummy", w);
    a.key = get<std::size_t>(attempts[k], "key", w);
    a.support_position = get<int>(attempts[k], "support_position", w);
    o.attempts.push_back(a);
  }
  const Json& copies = field(v, "copies", where);
  for (std::size_t k = 0; k < copies.size(); ++k) {
    const std::string w = where + ".copies[" + std::to_string(k) + "]";
    Copy c;
    c.player = get<int>(copies[k], "player", w);
    c.owner = get<int>(copies[k], "owner", w);
    c.relayer = get<int>(copies[k], "relayer", w);
    c.label = Label::parse(get<std::string>(copies[k], "label", w));
    c.action = get<int>(copies[k], "action", w);
    o.copies.push_back(c);
  }
  const Json& emitted = field(v, "emitted", where);
  for (std::size_t k = 0; k < emitted.size(); ++k) {
    o.emitted.push_back(labels_from_json(emitted[k], where + ".emitted"));
  }
  const Json& transcript = field(v, "transcript", where);
  for (std::size_t k = 0; k < transcript.size(); ++k) {
    o.transcript.push_back(message_from_json(transcript[k], where + ".transcript[" + std::to_string(k) + "]"));
  }
  const Json& secrets = field(v, "secrets", where);
  if (!secrets.is_array()) throw ParseError(where + ".secrets: expected an array");
  for (std::size_t k = 0; k < secrets.size(); ++k) {
    const std::string w = where + ".secrets[" + std::to_string(k) + "]";
    o.secrets.push_back({get<std::string>(secrets[k], "token", w),
                         get<std::vector<int>>(secrets[k], "authorized", w)});
  }
  o.failure = get<std::string>(v, "failure", where);
  return o;
}

}  // namespace

Json real_json(const ExactReal& value) {
  return Json{{"decimal", value.to_decimal(40)}, {"hex", value.to_hex()}};
}

ExactReal real_from_json(const Json& value, const std::string& where) {
  return ExactReal::parse_hex(get<std::string>(value, "hex", where));
}

Json config_json(const ProtocolConfig& c) {
  Json j;
  j["players"] = c.players;
  j["precision"] = c.precision;
  j["fragmentation"] = c.fragmentation;
  j["multiplier"] = c.multiplier;
  j["dummy_count"] = c.dummy_count ? Json(*c.dummy_count) : Json(nullptr);
  j["redundancy"] = c.redundancy;
  j["max_retries"] = c.max_retries;
  j["seed"] = c.seed;
  j["majority_decode"] = c.majority_decode;
  j["refinements"] = c.decomposition.refinements;
  j["max_denominator"] = c.decomposition.max_denominator.str();
  j["pinned_vertices"] = c.decomposition.vertices.has_value();
  return j;
}

Json verification_json(const VerificationReport& report, const Game& game,
                       const BayesianGame* bayes) {
  auto constraint = [&](const IncentiveConstraint& c) {
    Json j;
    j["player"] = game.player_name(c.player);
    if (bayes && c.true_type >= 0) {
      j["type"] = bayes->type_label(c.player, c.true_type);
      j["reported_type"] = bayes->type_label(c.player, c.reported_type);
    }
    if (c.is_misreport()) {
      Json dev = Json::object();
      for (std::size_t a = 0; a < c.deviation.size(); ++a) {
        dev[game.action_label(c.player, static_cast<int>(a))] =
            game.action_label(c.player, c.deviation[a]);
      }
      j["deviation"] = dev;
    } else {
      j["recommended"] = game.action_label(c.player, c.recommended);
      j["alternative"] = game.action_label(c.player, c.alternative);
    }
    j["slack"] = real_json(c.slack);
    return j;
  };
  Json out;
  out["pass"] = report.pass;
  out["tolerance"] = real_json(report.tolerance);
  out["constraints_checked"] = report.constraints_checked;
  out["worst"] = report.worst ? constraint(*report.worst) : Json(nullptr);
  Json v = Json::array();
  for (const auto& c : report.violations) v.push_back(constraint(c));
  out["violations"] = v;
  return out;
}

Json decomposition_json(const Decomposition& d, const std::vector<ExactReal>& target) {
  auto rationals = [](const RationalVector& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(r.to_string());
    return a;
  };
  Json out;
  out["exact_target"] = d.exact_target;
  out["vertex_attempts"] = d.vertex_attempts;
  out["max_denominator"] = d.max_denominator.str();
  Json vertices = Json::array();
  for (std::size_t h = 0; h < d.vertices.size(); ++h) {
    Json pieces = Json::array();
    for (const auto& p : d.refinements[h]) {
      pieces.push_back(Json{{"gamma", p.gamma.to_string()},
                            {"distribution", rationals(p.dist)},
                            {"basis", p.basis},
                            {"meets_bound", p.meets_bound}});
    }
    vertices.push_back(Json{{"vertex", rationals(d.vertices[h])},
                            {"beta", real_json(d.beta[h])},
                            {"refinement", pieces}});
  }
  out["vertices"] = vertices;
  Json flat = Json::array();
  for (std::size_t j = 0; j < d.flat.size(); ++j) {
    flat.push_back(Json{{"j", j},
                        {"vertex", d.flat[j].vertex},
                        {"piece", d.flat[j].piece},
                        {"alpha", real_json(d.flat[j].alpha)},
                        {"distribution", rationals(d.flat[j].dist)}});
  }
  out["components"] = flat;
  out["recomposition_error"] = real_json(recomposition_error(d, target));
  out["alpha_sum_error"] = real_json(alpha_sum_error(d));
  return out;
}

Json partition_json(const LabeledPartition& partition) {
  Json cells = Json::array();
  for (const auto& c : partition.cells) {
    cells.push_back(Json{{"label", c.label.hex()},
                         {"lo", real_json(c.lo)},
                         {"hi", real_json(c.hi)},
                         {"target", c.target}});
  }
  return cells;
}

Json index_summary_json(const IndexSet& index, bool full) {
  Json out;
  out["size"] = index.total();
  out["non_dummy"] = index.non_dummy();
  out["dummy"] = index.dummy_count();
  Json counts = Json::array();
  for (std::size_t k = 0; k < index.keys(); ++k) counts.push_back(index.counts(k));
  out["counts"] = counts;
  if (full) {
    out["dummies"] = index.dummies();
    Json assign = Json::array();
    for (std::size_t k = 0; k < index.keys(); ++k) assign.push_back(index.assignment(k));
    out["assignment"] = assign;
  }
  return out;
}

Json chi_square_json(const ChiSquareResult& r) {
  return Json{{"statistic", r.statistic}, {"dof", r.dof},   {"p_value", r.p_value},
              {"alpha", r.alpha},         {"bins", r.bins}, {"pass", r.pass}};
}

Json abort_rate_json(const AbortRateResult& r) {
  return Json{{"attempts", r.attempts}, {"aborts", r.aborts},   {"expected", r.expected},
              {"observed", r.observed}, {"lower", r.lower},     {"upper", r.upper},
              {"sigmas", r.sigmas},     {"pass", r.pass}};
}

Json findings_json(const std::vector<Finding>& findings) {
  Json out = Json::array();
  for (const auto& f : findings) out.push_back(Json{{"check", f.check}, {"detail", f.detail}});
  return out;
}

Json audit_json(const AuditReport& report) {
  Json out;
  out["pass"] = report.pass();
  out["label_single_use"] = Json{{"checked", report.labels_checked},
                                 {"pass", report.labels_pass()},
                                 {"findings", findings_json(report.label_findings)}};
  out["transcript_privacy"] = Json{{"pass", report.privacy_pass()},
                                   {"findings", findings_json(report.privacy_findings)}};
  out["routing"] = Json{{"pass", report.routing_pass()},
                        {"findings", findings_json(report.routing_findings)}};
  Json fits = Json::array();
  for (std::size_t k = 0; k < report.fits.size(); ++k) {
    Json f = chi_square_json(report.fits[k]);
    f["type_profile"] = report.fit_types[k] ? Json(*report.fit_types[k]) : Json(nullptr);
    fits.push_back(f);
  }
  out["goodness_of_fit"] = Json{{"pass", report.fit_pass()}, {"tests", fits}};
  out["abort_rate"] = report.abort_rate ? abort_rate_json(*report.abort_rate) : Json(nullptr);
  return out;
}

Json run_summary_json(const ProtocolInstance& inst, const ProtocolRun& run) {
  const Game& game = inst.game;
  auto profile_name = [&game](std::size_t q) {
    Profile p = game.profiles().decode(q);
    Json a = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) a.push_back(game.action_label(static_cast<int>(i), p[i]));
    return a;
  };
  Json out;
  out["trials"] = run.trials;
  out["delivered"] = run.delivered;
  out["aborted"] = run.aborted;
  out["failed_consistency"] = run.failed;
  out["attempts"] = run.attempts;
  out["dummy_attempts"] = run.dummy_attempts;
  out["redraws"] = run.redraws;
  Json hist = Json::array();
  for (const auto& [retries, count] : run.retry_histogram) {
    hist.push_back(Json{{"retries", retries}, {"plays", count}});
  }
  out["retry_histogram"] = hist;
  Json counts = Json::array();
  for (std::size_t q = 0; q < run.counts.size(); ++q) {
    if (run.counts[q] == 0) continue;
    counts.push_back(Json{{"profile", profile_name(q)},
                          {"count", run.counts[q]},
                          {"frequency", static_cast<double>(run.counts[q]) /
                                            static_cast<double>(run.delivered)}});
  }
  out["counts"] = counts;
  if (inst.bayesian()) {
    Json per_type = Json::array();
    for (std::size_t t = 0; t < run.type_counts.size(); ++t) {
      Json c = Json::array();
      std::uint64_t total = 0;
      for (std::size_t q = 0; q < run.type_counts[t].size(); ++q) {
        if (run.type_counts[t][q] == 0) continue;
        total += run.type_counts[t][q];
        c.push_back(Json{{"profile", profile_name(q)}, {"count", run.type_counts[t][q]}});
      }
      if (total == 0) continue;
      Profile tp = inst.bayes->type_profiles().decode(t);
      Json names = Json::array();
      for (std::size_t i = 0; i < tp.size(); ++i) names.push_back(inst.bayes->type_label(static_cast<int>(i), tp[i]));
      per_type.push_back(Json{{"types", names}, {"delivered", total}, {"counts", c}});
    }
    out["per_type_profile"] = per_type;
  }
  return out;
}

Json outcome_json(const RoundOutcome& o) {
  Json out;
  out["status"] = to_string(o.status);
  out["type_profile"] = o.type_profile ? Json(*o.type_profile) : Json(nullptr);
  out["profile"] = o.profile ? Json(*o.profile) : Json(nullptr);
  out["actions"] = o.actions;
  Json attempts = Json::array();
  for (const auto& a : o.attempts) {
    attempts.push_back(Json{{"d_star", real_json(a.d_star)},
                            {"x_star", a.x_star},
                            {"cell", a.cell},
                            {"redraws", a.redraws},
                            {"dummy", a.dummy},
                            {"key", a.key},
                            {"support_position", a.support_position}});
  }
  out["attempts"] = attempts;
  Json copies = Json::array();
  for (const auto& c : o.copies) {
    copies.push_back(Json{{"player", c.player}, {"owner", c.owner}, {"relayer", c.relayer},
                          {"label", c.label.hex()}, {"action", c.action}});
  }
  out["copies"] = copies;
  Json emitted = Json::array();
  for (const auto& e : o.emitted) emitted.push_back(labels_json(e));
  out["emitted"] = emitted;
  Json transcript = Json::array();
  for (const auto& m : o.transcript) transcript.push_back(message_json(m));
  out["transcript"] = transcript;
  Json secrets = Json::array();
  for (const auto& s : o.secrets) secrets.push_back(Json{{"token", s.token}, {"authorized", s.authorized}});
  out["secrets"] = secrets;
  out["failure"] = o.failure;
  return out;
}

Json artifact_to_json(const RunArtifact& a, const Json& game_source, const Json& config) {
  Json out;
  out["version"] = kReportVersion;
  out["kind"] = "run-artifact";
  out["game"] = game_source;
  out["config"] = config;
  out["bayesian"] = a.bayesian;
  out["players"] = a.players;
  out["seed"] = a.seed;
  out["index"] = Json{{"size", a.index_total}, {"non_dummy", a.index_non_dummy},
                      {"declared_dummy", a.declared_dummy}};
  Json books = Json::array();
  for (const auto& b : a.codebooks) {
    books.push_back(Json{{"owner", b.owner}, {"subject", b.subject},
                         {"encrypt", labels_json(b.encrypt)}, {"decoys", labels_json(b.decoys)}});
  }
  out["codebooks"] = a.codebooks_dumped ? books : Json(nullptr);
  out["trials"] = a.trials;
  out["attempts"] = a.attempts;
  out["dummy_attempts"] = a.dummy_attempts;
  Json fits = Json::array();
  for (const auto& f : a.fits) {
    Json probs = Json::array();
    for (const auto& p : f.probs) probs.push_back(real_json(p));
    fits.push_back(Json{{"type_profile", f.type_profile ? Json(*f.type_profile) : Json(nullptr)},
                        {"probs", probs},
                        {"counts", f.counts}});
  }
  out["fits"] = fits;
  Json plays = Json::array();
  for (const auto& p : a.plays) plays.push_back(outcome_json(p));
  out["plays"] = plays;
  return out;
}

RunArtifact artifact_from_json(const Json& doc) {
  const std::string w = "$";
  if (get<std::string>(doc, "kind", w) != "run-artifact") throw ParseError("$.kind: not a run artifact");
  if (get<int>(doc, "version", w) != kReportVersion) throw ParseError("$.version: unsupported version");
  RunArtifact a;
  a.bayesian = get<bool>(doc, "bayesian", w);
  a.players = get<int>(doc, "players", w);
  a.seed = get<std::uint64_t>(doc, "seed", w);
  const Json& index = field(doc, "index", w);
  a.index_total = get<std::size_t>(index, "size", "$.index");
  a.index_non_dummy = get<std::size_t>(index, "non_dummy", "$.index");
  a.declared_dummy = get<std::uint64_t>(index, "declared_dummy", "$.index");
  const Json& books = field(doc, "codebooks", w);
  a.codebooks_dumped = !books.is_null();
  if (a.codebooks_dumped && !books.is_array()) throw ParseError("$.codebooks: expected an array");
  for (std::size_t k = 0; k < books.size(); ++k) {
    const std::string bw = "$.codebooks[" + std::to_string(k) + "]";
    a.codebooks.push_back({get<int>(books[k], "owner", bw), get<int>(books[k], "subject", bw),
                           labels_from_json(field(books[k], "encrypt", bw), bw + ".encrypt"),
                           labels_from_json(field(books[k], "decoys", bw), bw + ".decoys")});
  }
  a.trials = get<std::uint64_t>(doc, "trials", w);
  a.attempts = get<std::uint64_t>(doc, "attempts", w);
  a.dummy_attempts = get<std::uint64_t>(doc, "dummy_attempts", w);
  const Json& fits = field(doc, "fits", w);
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const std::string fw = "$.fits[" + std::to_string(k) + "]";
    FitInput f;
    if (!field(fits[k], "type_profile", fw).is_null()) f.type_profile = get<std::size_t>(fits[k], "type_profile", fw);
    for (const auto& p : field(fits[k], "probs", fw)) f.probs.push_back(real_from_json(p, fw + ".probs"));
    f.counts = get<std::vector<std::uint64_t>>(fits[k], "counts", fw);
    a.fits.push_back(std::move(f));
  }
  const Json& plays = field(doc, "plays", w);
  if (!plays.is_array()) throw ParseError("$.plays: expected an array");
  for (std::size_t k = 0; k < plays.size(); ++k) {
    a.plays.push_back(outcome_from_json(plays[k], "$.plays[" + std::to_string(k) + "]"));
  }
  return a;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace cheaptalk
