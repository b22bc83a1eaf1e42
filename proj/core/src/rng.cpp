#include "ppe/rng.hpp"

#include <cmath>
#include <numbers>

namespace ppe {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view stream)
    : key_(mix64(mix64(seed + kGolden) ^ fnv1a64(stream))), counter_(0) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  // Two rounds so that nearby keys do not produce shifted copies of each other.
  return mix64(mix64(key_ + counter_ * kGolden) ^ key_);
}

double CounterRng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-54;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng CounterRng::substream(std::string_view name) const {
  return from_state(mix64(key_ ^ fnv1a64(name)), 0);
}

CounterRng CounterRng::substream(std::uint64_t index) const {
  return from_state(mix64(key_ + mix64(index + 1) * kGolden), 0);
}

} // namespace ppe
