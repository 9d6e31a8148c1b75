#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gtshap/coalition.hpp"

namespace gtshap {

/// Thrown when a utility function returns a value outside [0, 1] (or a
/// non-finite value) and range validation is on.
class UtilityRangeError : public std::domain_error {
 public:
  UtilityRangeError(const std::string& label, const Coalition& s, double value)
      : std::domain_error("utility '" + label + "' returned " + std::to_string(value) +
                          " for coalition 0x" + s.to_hex() + "; values must lie in [0, 1]") {}
};

/// A cooperative game: a deterministic map from coalitions over n_players
/// players into [0, 1]. `evaluate` must be a pure function of the
/// coalition — the estimators and caches assume repeated evaluation of the
/// same coalition yields the same value.
struct UtilitySpec {
  int n_players = 0;
  std::function<double(const Coalition&)> evaluate;
  std::string label;
  /// Analytically known attribution vector, when the construction provides
  /// one (used by tests and the experiment harness to score estimates).
  std::optional<std::vector<double>> known_shapley;

  double operator()(const Coalition& s) const { return evaluate(s); }
};

/// One attribution value per player.
struct ShapleyVector {
  std::vector<double> values;

  int n_players() const { return static_cast<int>(values.size()); }

  double total() const {
    double t = 0.0;
    for (double v : values) t += v;
    return t;
  }
};

inline double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("linf_distance: size mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l2_distance: size mismatch");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

/// Validates that `value` is a legal utility for coalition `s`; throws
/// UtilityRangeError otherwise. A small tolerance below 0 / above 1 is NOT
/// granted: games must be constructed to respect the range exactly.
inline double validate_utility(const UtilitySpec& u, const Coalition& s, double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw UtilityRangeError(u.label, s, value);
  }
  return value;
}

/// Thread-safe memo table for utility evaluations, with hit/miss counters
/// and a plain-text persistence format:
///
///   coalition_hex,utility
///   0,0
///   1,0.25
///   ...
///
/// one line per cached coalition, sorted ascending by the coalition's
/// membership integer, utilities printed round-trip exactly. The format
/// stores no player-count column, so a cache file holds coalitions of a
/// single game (one fixed width).
class EvalCache {
 public:
  EvalCache() = default;

  EvalCache(const EvalCache& o) {
    std::shared_lock lock(o.mutex_);
    map_ = o.map_;
    hits_.store(o.hits_.load());
    misses_.store(o.misses_.load());
  }

  EvalCache& operator=(const EvalCache& o) {
    if (this != &o) {
      auto copy = [&] {
        std::shared_lock lock(o.mutex_);
        return o.map_;
      }();
      std::unique_lock lock(mutex_);
      map_ = std::move(copy);
      hits_.store(o.hits_.load());
      misses_.store(o.misses_.load());
    }
    return *this;
  }

  std::optional<double> lookup(const Coalition& s) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(s);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const Coalition& s, double value) {
    std::unique_lock lock(mutex_);
    map_.emplace(s, value);
  }

  /// Returns the cached value, or evaluates `u`, validates the range,
  /// stores and returns it. Exactly one of hits/misses is incremented.
  double evaluate(const UtilitySpec& u, const Coalition& s) {
    {
      std::shared_lock lock(mutex_);
      auto it = map_.find(s);
      if (it != map_.end()) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second;
      }
    }
    misses_.fetch_add(1, std::memory_order_relaxed);
    double value = validate_utility(u, s, u.evaluate(s));
    std::unique_lock lock(mutex_);
    map_.emplace(s, value);
    return value;
  }

  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  std::size_t entry_count() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

  void reset_counters() {
    hits_.store(0);
    misses_.store(0);
  }

  /// Merges all entries of `other` into this cache (existing keys win).
  void merge_from(const EvalCache& other) {
    auto snapshot = [&] {
      std::shared_lock lock(other.mutex_);
      return other.map_;
    }();
    std::unique_lock lock(mutex_);
    for (auto& [k, v] : snapshot) map_.emplace(k, v);
  }

  /// All entries sorted ascending by coalition (persistence order).
  std::vector<std::pair<Coalition, double>> sorted_entries() const;

  void save(const std::string& path) const;

  /// Loads a cache file written by save(). `n_players` fixes the coalition
  /// width the hex strings are parsed at. Counters are not restored.
  static EvalCache load(const std::string& path, int n_players);

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<Coalition, double, CoalitionHash> map_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

/// Convenience wrapper: evaluate through an optional cache.
inline double cached_evaluate(const UtilitySpec& u, const Coalition& s, EvalCache* cache) {
  if (cache != nullptr) return cache->evaluate(u, s);
  return validate_utility(u, s, u.evaluate(s));
}

}  // namespace gtshap
