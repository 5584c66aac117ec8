#ifndef CHEAPTALK_GAME_IO_HPP_
#define CHEAPTALK_GAME_IO_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cheaptalk/game.hpp"
#include "cheaptalk/protocol.hpp"

namespace cheaptalk {

using Json = nlohmann::ordered_json;

// Parsed game file; see docs/game_format.md.
struct GameFile {
  Json source;  // the document as read, embedded verbatim in run artifacts
  Game game;
  std::optional<BayesianGame> bayes;
  std::optional<Target> target;
  std::optional<std::vector<RationalVector>> vertices;  // pinned hull vertices
  std::map<std::size_t, Target> policy;                  // by type profile

  // The single-type view of a complete-information file: prior (1) and the
  // target as p[t].
  BayesianGame as_bayesian() const;
};

// Throws ParseError (with a JSON path) on malformed input and EvalError on
// expressions that cannot be evaluated.
GameFile parse_game(const Json& doc, int precision = kDefaultPrecision);
GameFile load_game_file(const std::string& path, int precision = kDefaultPrecision);

// Reads a JSON document; ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);

// Target from parallel lists of action-label profiles and probability
// expressions.
Target parse_target(const Game& game, const Json& profiles, const Json& probs, int precision,
                    const std::string& where);

}  // namespace cheaptalk

#endif  // CHEAPTALK_GAME_IO_HPP_
