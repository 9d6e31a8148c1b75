#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtshap {

/// Hard cap on the player universe a Coalition can address.
inline constexpr int kMaxPlayers = 1024;

/// Exact-oracle operations additionally require at most this many players
/// (full 2^N enumeration).
inline constexpr int kMaxExactPlayers = 20;

/// A subset of the player index set {0, ..., n_players-1}, stored as a
/// packed bit vector (bit i set <=> player i is a member).
///
/// Coalitions are plain values: cheap to copy at small widths, immutable
/// in all read paths, and safe to share across threads once built. Two
/// coalitions compare equal only if both the width and the membership
/// bits agree.
class Coalition {
 public:
  Coalition() = default;

  /// Empty coalition over a universe of n_players.
  explicit Coalition(int n_players) : n_players_(n_players) {
    if (n_players < 0 || n_players > kMaxPlayers) {
      throw std::invalid_argument("Coalition: n_players must be in [0, " +
                                  std::to_string(kMaxPlayers) + "], got " +
                                  std::to_string(n_players));
    }
    words_.assign(word_count(n_players), 0);
  }

  static Coalition from_indices(std::span<const int> indices, int n_players) {
    Coalition s(n_players);
    for (int i : indices) s.add(i);
    return s;
  }

  static Coalition from_indices(std::initializer_list<int> indices, int n_players) {
    return from_indices(std::span<const int>(indices.begin(), indices.size()), n_players);
  }

  /// Low 64-bit mask constructor, for widths up to 64.
  static Coalition from_mask(std::uint64_t mask, int n_players) {
    if (n_players > 64) {
      throw std::invalid_argument("Coalition::from_mask requires n_players <= 64");
    }
    Coalition s(n_players);
    if (n_players < 64 && (mask >> n_players) != 0) {
      throw std::out_of_range("Coalition::from_mask: mask has bits >= n_players");
    }
    if (!s.words_.empty()) s.words_[0] = mask;
    return s;
  }

  /// Parses the lowercase-hex integer form used by the cache file format.
  static Coalition from_hex(std::string_view hex, int n_players);

  /// Grand coalition {0, ..., n_players-1}.
  static Coalition full(int n_players) {
    Coalition s(n_players);
    for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  int n_players() const { return n_players_; }

  bool contains(int i) const {
    check_index(i);
    return (words_[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1u;
  }

  void add(int i) {
    check_index(i);
    words_[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
  }

  void remove(int i) {
    check_index(i);
    words_[static_cast<std::size_t>(i) / 64] &= ~(std::uint64_t{1} << (i % 64));
  }

  /// Member count (popcount over all words).
  int size() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  bool empty() const {
    for (std::uint64_t w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  Coalition with(int i) const {
    Coalition s = *this;
    s.add(i);
    return s;
  }

  Coalition without(int i) const {
    Coalition s = *this;
    s.remove(i);
    return s;
  }

  /// Member indices in ascending order.
  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        int b = std::countr_zero(bits);
        out.push_back(static_cast<int>(w * 64) + b);
        bits &= bits - 1;
      }
    }
    return out;
  }

  /// Low word as a plain mask; valid only for widths up to 64. Used by the
  /// exact oracle to index flat utility tables.
  std::uint64_t low_mask() const {
    if (n_players_ > 64) {
      throw std::logic_error("Coalition::low_mask requires n_players <= 64");
    }
    return words_.empty() ? 0 : words_[0];
  }

  /// Restriction to the first n_players players (drops higher bits).
  /// Used to strip the appended dummy from augmented coalitions.
  Coalition truncated(int n_players) const {
    if (n_players > n_players_) {
      throw std::invalid_argument("Coalition::truncated cannot widen");
    }
    Coalition s(n_players);
    for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = words_[w];
    s.trim();
    return s;
  }

  /// Lowercase hexadecimal of the membership integer, no leading zeros
  /// ("0" for the empty set). Bit i of the integer is player i.
  std::string to_hex() const;

  bool operator==(const Coalition& o) const = default;

  /// Numeric order on the membership integer; ties broken by width.
  /// Defines the line order of the cache persistence file.
  std::strong_ordering operator<=>(const Coalition& o) const {
    std::size_t n = std::max(words_.size(), o.words_.size());
    for (std::size_t k = n; k-- > 0;) {
      std::uint64_t a = k < words_.size() ? words_[k] : 0;
      std::uint64_t b = k < o.words_.size() ? o.words_[k] : 0;
      if (a != b) return a <=> b;
    }
    return n_players_ <=> o.n_players_;
  }

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  static std::size_t word_count(int n_players) {
    return (static_cast<std::size_t>(n_players) + 63) / 64;
  }

  void check_index(int i) const {
    if (i < 0 || i >= n_players_) {
      throw std::out_of_range("Coalition: player index " + std::to_string(i) +
                              " out of range [0, " + std::to_string(n_players_) + ")");
    }
  }

  // Clears bits at positions >= n_players_ in the top word.
  void trim() {
    int rem = n_players_ % 64;
    if (rem != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << rem) - 1;
    }
  }

  int n_players_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::string Coalition::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  bool leading = true;
  for (std::size_t w = words_.size(); w-- > 0;) {
    for (int nib = 15; nib >= 0; --nib) {
      unsigned d = static_cast<unsigned>((words_[w] >> (4 * nib)) & 0xf);
      if (leading && d == 0) continue;
      leading = false;
      out.push_back(kDigits[d]);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

inline Coalition Coalition::from_hex(std::string_view hex, int n_players) {
  if (hex.empty()) {
    throw std::invalid_argument("Coalition::from_hex: empty string");
  }
  Coalition s(n_players);
  for (char c : hex) {
    unsigned d;
    if (c >= '0' && c <= '9') {
      d = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      d = static_cast<unsigned>(c - 'a') + 10;
    } else {
      throw std::invalid_argument(std::string("Coalition::from_hex: invalid digit '") + c +
                                  "' (lowercase hex required)");
    }
    // Shift the accumulated value left by one nibble, tracking overflow
    // past the top word so out-of-range inputs are rejected.
    std::uint64_t carry = d;
    for (std::size_t w = 0; w < s.words_.size(); ++w) {
      std::uint64_t hi = s.words_[w] >> 60;
      s.words_[w] = (s.words_[w] << 4) | carry;
      carry = hi;
    }
    if (carry != 0) {
      throw std::out_of_range("Coalition::from_hex: value does not fit in " +
                              std::to_string(n_players) + " players");
    }
  }
  // Reject bits at positions >= n_players.
  Coalition trimmed = s;
  trimmed.trim();
  if (trimmed.words_ != s.words_) {
    throw std::out_of_range("Coalition::from_hex: bits set beyond player range");
  }
  return s;
}

struct CoalitionHash {
  std::size_t operator()(const Coalition& s) const {
    // FNV-1a over the words plus the width.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    mix(static_cast<std::uint64_t>(s.n_players()));
    for (std::uint64_t w : s.words()) mix(w);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace gtshap
