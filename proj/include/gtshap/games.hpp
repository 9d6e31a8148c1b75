#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtshap/utility.hpp"

namespace gtshap {

enum class GameFamily { additive, threshold, glove, unanimity, random_bounded };

std::string to_string(GameFamily family);
GameFamily game_family_from_string(const std::string& name);

/// Parsed description of a synthetic game, as read from a game definition
/// file. Which parameter fields are meaningful depends on the family.
struct GameFamilyConfig {
  GameFamily family = GameFamily::additive;
  int n_players = 0;
  std::vector<double> weights;  // additive
  int quota = 0;                // threshold
  std::vector<int> left;        // glove
  std::vector<int> right;       // glove
  std::vector<int> carrier;     // unanimity
  std::uint64_t seed = 0;       // random_bounded
};

/// U(S) = sum of w_i over members. Requires w_i >= 0 and sum(w) <= 1.
/// The attribution vector is the weight vector itself.
UtilitySpec make_additive_game(const std::vector<double>& weights);

/// U(S) = 1 if |S| >= quota else 0. Requires 1 <= quota <= n_players.
/// All players are exchangeable, so each is attributed 1/n_players.
UtilitySpec make_threshold_game(int n_players, int quota);

/// Two-sided matching game: U(S) = min(|S ∩ left|, |S ∩ right|) divided by
/// min(|left|, |right|) so values stay in [0, 1]. left and right must be
/// disjoint, nonempty, and together cover all players. No closed-form
/// attribution is stored; the exact oracle supplies ground truth.
UtilitySpec make_glove_game(const std::vector<int>& left, const std::vector<int>& right);

/// U(S) = 1 if carrier ⊆ S else 0. Requires a nonempty carrier within the
/// player range. Attribution: 1/|carrier| for carrier members, 0 otherwise.
UtilitySpec make_unanimity_game(int n_players, const std::vector<int>& carrier);

/// A full 2^n table of independent uniform [0, 1) values, materialized
/// eagerly from the seed so evaluation order never matters. Requires
/// n_players <= 20.
UtilitySpec make_random_bounded_game(int n_players, std::uint64_t seed);

UtilitySpec make_game(const GameFamilyConfig& config);

/// Parses the flat key=value game schema. Lines are `key=value`; blank
/// lines and lines starting with '#' are ignored. Keys:
///   family      additive | threshold | glove | unanimity | random_bounded
///   n_players   required for threshold/unanimity/random_bounded; optional
///               (consistency-checked) elsewhere
///   weights     comma-separated reals (additive)
///   quota       integer (threshold)
///   left,right  comma-separated player ids (glove)
///   carrier     comma-separated player ids (unanimity)
///   seed        unsigned integer (random_bounded)
GameFamilyConfig parse_game_config(const std::string& text);

GameFamilyConfig load_game_config(const std::string& path);

UtilitySpec load_game_file(const std::string& path);

}  // namespace gtshap
