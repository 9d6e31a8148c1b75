#include "gtshap/games.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gtshap/format.hpp"
#include "gtshap/rng.hpp"

namespace gtshap {

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

void check_player_ids(const std::vector<int>& ids, int n_players, const std::string& what) {
  for (int i : ids) {
    if (i < 0 || i >= n_players) {
      throw std::invalid_argument(what + " contains player id " + std::to_string(i) +
                                  " outside [0, " + std::to_string(n_players) + ")");
    }
  }
  std::set<int> uniq(ids.begin(), ids.end());
  if (uniq.size() != ids.size()) {
    throw std::invalid_argument(what + " contains duplicate player ids");
  }
}

}  // namespace

std::string to_string(GameFamily family) {
  switch (family) {
    case GameFamily::additive: return "additive";
    case GameFamily::threshold: return "threshold";
    case GameFamily::glove: return "glove";
    case GameFamily::unanimity: return "unanimity";
    case GameFamily::random_bounded: return "random_bounded";
  }
  throw std::logic_error("to_string(GameFamily): unknown value");
}

GameFamily game_family_from_string(const std::string& name) {
  if (name == "additive") return GameFamily::additive;
  if (name == "threshold") return GameFamily::threshold;
  if (name == "glove") return GameFamily::glove;
  if (name == "unanimity") return GameFamily::unanimity;
  if (name == "random_bounded") return GameFamily::random_bounded;
  throw std::invalid_argument("unknown game family '" + name + "'");
}

UtilitySpec make_additive_game(const std::vector<double>& weights) {
  if (weights.empty()) {
    throw std::invalid_argument("additive game needs at least one weight");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("additive game weights must be nonnegative, got " +
                                  format_real(w));
    }
    total += w;
  }
  if (total > 1.0) {
    throw std::invalid_argument("additive game weights must sum to at most 1, got " +
                                format_real(total));
  }
  const int n = static_cast<int>(weights.size());
  std::string label = "additive[";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i > 0) label += ',';
    label += format_real(weights[i]);
  }
  label += ']';

  UtilitySpec u;
  u.n_players = n;
  u.label = std::move(label);
  u.known_shapley = weights;
  u.evaluate = [weights](const Coalition& s) {
    double v = 0.0;
    for (int i : s.indices()) v += weights[static_cast<std::size_t>(i)];
    return v;
  };
  return u;
}

UtilitySpec make_threshold_game(int n_players, int quota) {
  if (n_players < 1) {
    throw std::invalid_argument("threshold game needs n_players >= 1");
  }
  if (quota < 1 || quota > n_players) {
    throw std::invalid_argument("threshold game quota " + std::to_string(quota) +
                                " out of range [1, " + std::to_string(n_players) + "]");
  }
  UtilitySpec u;
  u.n_players = n_players;
  u.label = "threshold[n=" + std::to_string(n_players) + ",quota=" + std::to_string(quota) + ']';
  u.known_shapley = std::vector<double>(static_cast<std::size_t>(n_players),
                                        1.0 / static_cast<double>(n_players));
  u.evaluate = [quota](const Coalition& s) { return s.size() >= quota ? 1.0 : 0.0; };
  return u;
}

UtilitySpec make_glove_game(const std::vector<int>& left, const std::vector<int>& right) {
  if (left.empty() || right.empty()) {
    throw std::invalid_argument("glove game needs nonempty left and right sides");
  }
  const int n = static_cast<int>(left.size() + right.size());
  check_player_ids(left, n, "glove left side");
  check_player_ids(right, n, "glove right side");
  std::set<int> all(left.begin(), left.end());
  for (int i : right) {
    if (!all.insert(i).second) {
      throw std::invalid_argument("glove sides overlap at player " + std::to_string(i));
    }
  }
  if (static_cast<int>(all.size()) != n) {
    throw std::invalid_argument("glove sides must partition the player set");
  }

  const double denom = static_cast<double>(std::min(left.size(), right.size()));

  std::vector<int> left_sorted = left, right_sorted = right;
  std::sort(left_sorted.begin(), left_sorted.end());
  std::sort(right_sorted.begin(), right_sorted.end());

  UtilitySpec u;
  u.n_players = n;
  u.label = "glove[left={" + join_ints(left_sorted) + "},right={" + join_ints(right_sorted) + "}]";
  u.evaluate = [left = left_sorted, right = right_sorted, denom](const Coalition& s) {
    int nl = 0, nr = 0;
    for (int i : left) nl += s.contains(i) ? 1 : 0;
    for (int i : right) nr += s.contains(i) ? 1 : 0;
    return static_cast<double>(std::min(nl, nr)) / denom;
  };
  return u;
}

UtilitySpec make_unanimity_game(int n_players, const std::vector<int>& carrier) {
  if (n_players < 1) {
    throw std::invalid_argument("unanimity game needs n_players >= 1");
  }
  if (carrier.empty()) {
    throw std::invalid_argument("unanimity game needs a nonempty carrier");
  }
  check_player_ids(carrier, n_players, "unanimity carrier");

  std::vector<double> phi(static_cast<std::size_t>(n_players), 0.0);
  for (int i : carrier) phi[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(carrier.size());

  std::vector<int> carrier_sorted = carrier;
  std::sort(carrier_sorted.begin(), carrier_sorted.end());

  UtilitySpec u;
  u.n_players = n_players;
  u.label = "unanimity[n=" + std::to_string(n_players) + ",carrier={" + join_ints(carrier_sorted) +
            "}]";
  u.known_shapley = std::move(phi);
  u.evaluate = [carrier = carrier_sorted](const Coalition& s) {
    for (int i : carrier) {
      if (!s.contains(i)) return 0.0;
    }
    return 1.0;
  };
  return u;
}

UtilitySpec make_random_bounded_game(int n_players, std::uint64_t seed) {
  if (n_players < 1) {
    throw std::invalid_argument("random_bounded game needs n_players >= 1");
  }
  if (n_players > kMaxExactPlayers) {
    throw std::invalid_argument("random_bounded game materializes 2^n values; n_players " +
                                std::to_string(n_players) + " exceeds the limit of " +
                                std::to_string(kMaxExactPlayers));
  }
  const std::size_t table_size = std::size_t{1} << n_players;
  auto table = std::make_shared<std::vector<double>>(table_size);
  Xoshiro256StarStar rng(seed);
  for (std::size_t mask = 0; mask < table_size; ++mask) {
    (*table)[mask] = rng.next_unit();
  }

  UtilitySpec u;
  u.n_players = n_players;
  u.label = "random_bounded[n=" + std::to_string(n_players) + ",seed=" + std::to_string(seed) +
            ']';
  u.evaluate = [table](const Coalition& s) {
    return (*table)[static_cast<std::size_t>(s.low_mask())];
  };
  return u;
}

UtilitySpec make_game(const GameFamilyConfig& config) {
  switch (config.family) {
    case GameFamily::additive: {
      UtilitySpec u = make_additive_game(config.weights);
      if (config.n_players != 0 && config.n_players != u.n_players) {
        throw std::invalid_argument("additive game: n_players=" +
                                    std::to_string(config.n_players) + " disagrees with " +
                                    std::to_string(u.n_players) + " weights");
      }
      return u;
    }
    case GameFamily::threshold:
      return make_threshold_game(config.n_players, config.quota);
    case GameFamily::glove: {
      UtilitySpec u = make_glove_game(config.left, config.right);
      if (config.n_players != 0 && config.n_players != u.n_players) {
        throw std::invalid_argument("glove game: n_players=" + std::to_string(config.n_players) +
                                    " disagrees with |left|+|right|=" +
                                    std::to_string(u.n_players));
      }
      return u;
    }
    case GameFamily::unanimity:
      return make_unanimity_game(config.n_players, config.carrier);
    case GameFamily::random_bounded:
      return make_random_bounded_game(config.n_players, config.seed);
  }
  throw std::logic_error("make_game: unknown family");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

int parse_int(const std::string& s, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument("game config: key '" + key + "' has invalid integer '" + s + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument("game config: key '" + key + "' has invalid integer '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double parse_double(const std::string& s, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::invalid_argument("game config: key '" + key + "' has invalid real '" + s + "'");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& key) {
  std::vector<int> out;
  for (const std::string& item : split_commas(s)) out.push_back(parse_int(item, key));
  return out;
}

}  // namespace

GameFamilyConfig parse_game_config(const std::string& text) {
  GameFamilyConfig config;
  bool have_family = false;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("game config line " + std::to_string(line_no) +
                                  " is not key=value: '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "family") {
      config.family = game_family_from_string(value);
      have_family = true;
    } else if (key == "n_players") {
      config.n_players = parse_int(value, key);
    } else if (key == "weights") {
      for (const std::string& item : split_commas(value)) {
        config.weights.push_back(parse_double(item, key));
      }
    } else if (key == "quota") {
      config.quota = parse_int(value, key);
    } else if (key == "left") {
      config.left = parse_int_list(value, key);
    } else if (key == "right") {
      config.right = parse_int_list(value, key);
    } else if (key == "carrier") {
      config.carrier = parse_int_list(value, key);
    } else if (key == "seed") {
      config.seed = parse_u64(value, key);
    } else {
      throw std::invalid_argument("game config: unknown key '" + key + "'");
    }
  }
  if (!have_family) {
    throw std::invalid_argument("game config: missing required key 'family'");
  }
  return config;
}

GameFamilyConfig load_game_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open game file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_game_config(buffer.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("in game file '" + path + "': " + e.what());
  }
}

UtilitySpec load_game_file(const std::string& path) { return make_game(load_game_config(path)); }

}  // namespace gtshap
