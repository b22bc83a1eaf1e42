#include "ppe/diagnostics.hpp"

#include <array>
#include <atomic>
#include <iostream>
#include <mutex>

namespace ppe {

namespace {
constexpr std::size_t kKinds = static_cast<std::size_t>(WarningKind::kCount);
constexpr std::uint64_t kEchoLimit = 3;

std::array<std::atomic<std::uint64_t>, kKinds> g_counts{};
std::atomic<bool> g_echo{true};
std::mutex g_echo_mutex;
} // namespace

void warn(WarningKind kind, std::string_view message) {
  const auto idx = static_cast<std::size_t>(kind);
  const auto seen = g_counts[idx].fetch_add(1, std::memory_order_relaxed);
  if (g_echo.load(std::memory_order_relaxed) && seen < kEchoLimit) {
    std::lock_guard lock(g_echo_mutex);
    std::cerr << "warning: " << message << '\n';
  }
}

std::uint64_t warning_count(WarningKind kind) {
  return g_counts[static_cast<std::size_t>(kind)].load(std::memory_order_relaxed);
}

void reset_warnings() {
  for (auto& c : g_counts) c.store(0, std::memory_order_relaxed);
}

void set_warning_echo(bool enabled) { g_echo.store(enabled); }

} // namespace ppe
