#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace ppe {

// Counter-based generator: the n-th output is a pure function of (key, n),
// so a stream is fully described by two integers and can be checkpointed,
// forked into named substreams, or replayed without hidden state.
class CounterRng {
public:
  using result_type = std::uint64_t;

  CounterRng() = default;
  CounterRng(std::uint64_t seed, std::string_view stream);

  static CounterRng from_state(std::uint64_t key, std::uint64_t counter) {
    CounterRng r;
    r.key_ = key;
    r.counter_ = counter;
    return r;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller; consumes two counters.
  double normal();

  CounterRng substream(std::string_view name) const;
  CounterRng substream(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const CounterRng&, const CounterRng&) = default;

private:
  std::uint64_t key_{0x243f6a8885a308d3ULL};
  std::uint64_t counter_{0};
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view text);

} // namespace ppe
