#include "treepoly/config.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace treepoly {

namespace {

std::mutex g_caps_mutex;
Caps g_caps;
std::atomic<unsigned> g_threads{0};

std::uint64_t parse_u64(std::string_view text, std::string_view key) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("bad value for cap '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Caps caps() {
  std::lock_guard lock(g_caps_mutex);
  return g_caps;
}

void set_caps(const Caps& value) {
  std::lock_guard lock(g_caps_mutex);
  g_caps = value;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Caps parse_caps(std::string_view text, Caps base) {
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("cap entry '" + std::string(item) + "' is not key=value");
    }
    std::string_view key = trim(item.substr(0, eq));
    std::string_view value = trim(item.substr(eq + 1));
    if (key == "max_columns") {
      base.max_columns = parse_u64(value, key);
    } else if (key == "max_scan") {
      base.max_scan = parse_u64(value, key);
    } else {
      throw std::invalid_argument("unknown cap '" + std::string(key) + "'");
    }
  }
  return base;
}

void load_caps_from_env() {
  const char* env = std::getenv("TREEPOLY_CAPS");
  set_caps(env != nullptr ? parse_caps(env) : Caps{});
}

void set_thread_count(unsigned threads) { g_threads = threads; }

unsigned thread_count() {
  unsigned t = g_threads;
  if (t == 0) t = std::max(1U, std::thread::hardware_concurrency());
  return t;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace treepoly
