#ifndef LGL_GAME_IO_H_
#define LGL_GAME_IO_H_

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "lgl/game.h"

namespace lgl {

// Structural problems in a game document (bad JSON, wrong types, unknown
// labels other than belief references). Belief references that do not
// resolve are kept as dangling indices so that validate_game can report them.
class GameParseError : public std::runtime_error {
 public:
  explicit GameParseError(const std::string& what) : std::runtime_error(what) {}
};

GameInstance game_from_json(const nlohmann::json& doc);
nlohmann::json game_to_json(const GameInstance& game);

GameInstance load_game(const std::string& path);
void save_game(const GameInstance& game, const std::string& path);

// Canonical text form used for every file the tools emit.
std::string dump_json(const nlohmann::json& doc);

// Rounds to 12 decimal digits so reports are
// stable across platforms.
double report_number(double x);

}  // namespace lgl

#endif  // LGL_GAME_IO_H_
