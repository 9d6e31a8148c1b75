#pragma once

#include <utility>
#include <vector>

#include "gtshap/games.hpp"

namespace gtshap::testfx {

/// Game fixtures spanning every family, all small enough for the exact
/// oracles. Shared by the unit tests and the acceptance suite.
inline std::vector<UtilitySpec> standard_fixtures() {
  std::vector<UtilitySpec> games;
  games.push_back(make_additive_game({0.5, 0.3, 0.2}));
  games.push_back(make_additive_game({0.0, 0.0, 0.0}));
  games.push_back(make_additive_game({1.0}));
  games.push_back(make_additive_game({0.05, 0.0, 0.25, 0.1, 0.35, 0.15}));
  games.push_back(make_threshold_game(5, 3));
  games.push_back(make_threshold_game(2, 1));
  games.push_back(make_threshold_game(4, 4));
  games.push_back(make_glove_game({0, 1}, {2}));
  games.push_back(make_glove_game({0}, {1}));
  games.push_back(make_glove_game({0, 1, 2}, {3, 4, 5}));
  games.push_back(make_glove_game({0, 2, 4, 6}, {1, 3, 5, 7, 8}));
  games.push_back(make_unanimity_game(3, {0, 1}));
  games.push_back(make_unanimity_game(4, {2}));
  games.push_back(make_unanimity_game(3, {0, 1, 2}));
  games.push_back(make_unanimity_game(7, {1, 4, 6}));
  games.push_back(make_random_bounded_game(3, 7));
  games.push_back(make_random_bounded_game(8, 123));
  games.push_back(make_random_bounded_game(10, 2024));
  return games;
}

inline std::vector<UtilitySpec> fixtures_up_to(int max_players) {
  std::vector<UtilitySpec> out;
  for (UtilitySpec& u : standard_fixtures()) {
    if (u.n_players <= max_players) out.push_back(std::move(u));
  }
  return out;
}

}  // namespace gtshap::testfx
