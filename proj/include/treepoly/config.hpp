// Process-wide resource caps and parallelism settings.

#ifndef TREEPOLY_CONFIG_HPP
#define TREEPOLY_CONFIG_HPP

#include <cstdint>
#include <functional>
#include <string_view>

namespace treepoly {

struct Caps {
  /// Largest |RB_U(m)| for which density matrices and polytopes are built.
  std::uint64_t max_columns = 100000;
  /// Largest C(m, n) handled by an exhaustive subset scan before the DP
  /// takes over.
  std::uint64_t max_scan = 10000000;
};

Caps caps();
void set_caps(const Caps& value);

/// Parses `key=value[,key=value...]` with keys max_columns and max_scan.
/// Throws std::invalid_argument on unknown keys or malformed numbers.
Caps parse_caps(std::string_view text, Caps base = {});

/// Resets caps to the defaults, then applies TREEPOLY_CAPS when it is set.
void load_caps_from_env();

/// 0 means "hardware concurrency".
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace treepoly

#endif  // TREEPOLY_CONFIG_HPP
