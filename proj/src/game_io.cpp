#include "cheaptalk/game_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/expression.hpp"

namespace cheaptalk {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

const Json& require_array(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  return v;
}

std::string require_string(const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

// A JSON integer or an expression string.
RealExpression parse_value(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return RealExpression::literal(ExactRational(v.get<long long>()));
  if (!v.is_string()) fail(where, "expected an integer or an expression string");
  std::string text = v.get<std::string>();
  // The grammar has no unary minus; "-e" is read as "0-e".
  const std::size_t start = text.find_first_not_of(" \t");
  if (start != std::string::npos && text[start] == '-') text = "0" + text.substr(start);
  try {
    return RealExpression::parse(text);
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
}

ExactReal eval_value(const Json& v, int precision, const std::string& where) {
  RealExpression e = parse_value(v, where);
  try {
    return e.eval(precision);
  } catch (const EvalError& err) {
    throw EvalError(where + ": " + err.what());
  }
}

std::vector<std::string> string_list(const Json& v, const std::string& where) {
  require_array(v, where);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(require_string(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<std::vector<ExactReal>> payoff_rows(const Json& v, std::size_t rows, std::size_t n,
                                                int precision, const std::string& where) {
  require_array(v, where);
  if (v.size() != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows, found " + std::to_string(v.size()));
  }
  std::vector<std::vector<ExactReal>> out;
  for (std::size_t q = 0; q < rows; ++q) {
    const std::string row_where = where + "[" + std::to_string(q) + "]";
    require_array(v[q], row_where);
    if (v[q].size() != n) fail(row_where, "expected " + std::to_string(n) + " payoffs");
    std::vector<ExactReal> row;
    for (std::size_t i = 0; i < n; ++i) {
      row.push_back(eval_value(v[q][i], precision, row_where + "[" + std::to_string(i) + "]"));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Profile parse_profile(const Json& v, const std::vector<std::vector<std::string>>& labels,
                      const std::string& where, bool types) {
  require_array(v, where);
  if (v.size() != labels.size()) fail(where, "expected one entry per player");
  Profile out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string label = require_string(v[i], where + "[" + std::to_string(i) + "]");
    auto it = std::find(labels[i].begin(), labels[i].end(), label);
    if (it == labels[i].end()) {
      fail(where, std::string("unknown ") + (types ? "type" : "action") + " '" + label +
                      "' for player " + std::to_string(i));
    }
    out.push_back(static_cast<int>(it - labels[i].begin()));
  }
  return out;
}

RationalVector parse_rational_list(const Json& v, const std::string& where) {
  require_array(v, where);
  RationalVector out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    auto exact = parse_value(v[k], w).exact();
    if (!exact) fail(w, "vertex entries must be rational");
    out.push_back(*exact);
  }
  return out;
}

}  // namespace

Target parse_target(const Game& game, const Json& profiles, const Json& probs, int precision,
                    const std::string& where) {
  require_array(profiles, where + ".profiles");
  require_array(probs, where + ".probs");
  if (profiles.size() != probs.size()) fail(where, "profiles and probs differ in length");
  if (profiles.empty()) fail(where, "empty support");
  Target t;
  bool all_exact = true;
  RationalVector exact;
  for (std::size_t q = 0; q < profiles.size(); ++q) {
    const std::string pw = where + ".profiles[" + std::to_string(q) + "]";
    t.dist.support.push_back(parse_profile(profiles[q], game.action_labels(), pw, false));
    const std::string vw = where + ".probs[" + std::to_string(q) + "]";
    RealExpression e = parse_value(probs[q], vw);
    try {
      t.dist.probs.push_back(e.eval(precision));
    } catch (const EvalError& err) {
      throw EvalError(vw + ": " + err.what());
    }
    auto r = e.exact();
    if (r) exact.push_back(*r);
    else all_exact = false;
  }
  if (all_exact) {
    ExactRational total = 0;
    for (const auto& r : exact) total += r;
    if (total != ExactRational(1)) fail(where, "rational probabilities sum to " + total.to_string());
    t.exact = std::move(exact);
  }
  try {
    t.dist.validate(game);
  } catch (const UsageError& e) {
    fail(where, e.what());
  }
  return t;
}

BayesianGame GameFile::as_bayesian() const {
  if (bayes) return *bayes;
  std::vector<std::vector<std::string>> labels(game.num_players(), std::vector<std::string>{"-"});
  return BayesianGame(game, labels, {ExactReal::from_int(1)}, {});
}

GameFile parse_game(const Json& doc, int precision) {
  GameFile f;
  f.source = doc;
  const Json& players = require_array(require(doc, "players", "$"), "$.players");
  if (players.size() < 2) fail("$.players", "need at least two players");
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> actions;
  std::vector<std::vector<std::string>> types;
  bool any_types = false;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string where = "$.players[" + std::to_string(i) + "]";
    names.push_back(require_string(require(players[i], "name", where), where + ".name"));
    actions.push_back(string_list(require(players[i], "actions", where), where + ".actions"));
    if (actions.back().empty()) fail(where + ".actions", "empty action list");
    if (players[i].contains("types")) {
      any_types = true;
      types.push_back(string_list(players[i]["types"], where + ".types"));
      if (types.back().empty()) fail(where + ".types", "empty type list");
    } else {
      types.push_back({"-"});
    }
  }
  std::size_t profiles = 1;
  for (const auto& a : actions) profiles *= a.size();
  auto payoffs = payoff_rows(require(doc, "payoffs", "$"), profiles, players.size(), precision,
                             "$.payoffs");
  try {
    f.game = Game(names, actions, payoffs);
  } catch (const UsageError& e) {
    fail("$", e.what());
  }

  if (doc.contains("target")) {
    const Json& t = doc["target"];
    f.target = parse_target(f.game, require(t, "profiles", "$.target"),
                            require(t, "probs", "$.target"), precision, "$.target");
    if (t.contains("vertices")) {
      const Json& v = require_array(t["vertices"], "$.target.vertices");
      std::vector<RationalVector> vertices;
      for (std::size_t h = 0; h < v.size(); ++h) {
        vertices.push_back(parse_rational_list(v[h], "$.target.vertices[" + std::to_string(h) + "]"));
      }
      f.vertices = std::move(vertices);
    }
  }

  const bool bayesian = any_types || doc.contains("prior") || doc.contains("policy");
  if (!bayesian) return f;

  ProductSpace type_space([&types] {
    std::vector<int> r;
    for (const auto& t : types) r.push_back(static_cast<int>(t.size()));
    return r;
  }());
  const Json& prior_json = require_array(require(doc, "prior", "$"), "$.prior");
  if (prior_json.size() != type_space.size()) {
    fail("$.prior", "expected " + std::to_string(type_space.size()) + " entries");
  }
  std::vector<ExactReal> prior;
  for (std::size_t t = 0; t < prior_json.size(); ++t) {
    prior.push_back(eval_value(prior_json[t], precision, "$.prior[" + std::to_string(t) + "]"));
  }
  std::vector<std::vector<std::vector<ExactReal>>> type_payoffs;
  if (doc.contains("type_payoffs")) {
    const Json& tp = require_array(doc["type_payoffs"], "$.type_payoffs");
    if (tp.size() != type_space.size()) {
      fail("$.type_payoffs", "expected one payoff table per type profile");
    }
    for (std::size_t t = 0; t < tp.size(); ++t) {
      type_payoffs.push_back(payoff_rows(tp[t], profiles, players.size(), precision,
                                         "$.type_payoffs[" + std::to_string(t) + "]"));
    }
  }
  try {
    f.bayes = BayesianGame(f.game, types, prior, type_payoffs);
  } catch (const UsageError& e) {
    fail("$", e.what());
  }
  if (doc.contains("policy")) {
    const Json& pol = require_array(doc["policy"], "$.policy");
    for (std::size_t k = 0; k < pol.size(); ++k) {
      const std::string where = "$.policy[" + std::to_string(k) + "]";
      Profile t = parse_profile(require(pol[k], "types", where), types, where + ".types", true);
      const std::size_t index = type_space.encode(t);
      if (f.policy.count(index)) fail(where, "duplicate type profile");
      f.policy.emplace(index, parse_target(f.game, require(pol[k], "profiles", where),
                                           require(pol[k], "probs", where), precision, where));
    }
  }
  return f;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

GameFile load_game_file(const std::string& path, int precision) {
  return parse_game(read_json_file(path), precision);
}

}  // namespace cheaptalk
