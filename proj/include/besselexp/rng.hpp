#ifndef BESSELEXP_RNG_HPP
#define BESSELEXP_RNG_HPP

#include <concepts>
#include <cstdint>
#include <random>

namespace besselexp {

/// Seedable uniform/normal variate source; the only randomness the samplers
/// consume. Single-owner: do not share one stream between threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : RngStream(seed, 0, false) {}

  /// Independent stream derived from (seed, index). Distinct indices yield
  /// unrelated mt19937_64 states through std::seed_seq mixing.
  [[nodiscard]] RngStream split(std::uint64_t index) const { return RngStream(seed_, index, true); }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  RngStream(std::uint64_t seed, std::uint64_t index, bool derived) : seed_(seed) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    if (derived) {
      std::seed_seq seq{lo(seed), hi(seed), lo(index), hi(index), 0x5eedu};
      engine_.seed(seq);
    } else {
      std::seed_seq seq{lo(seed), hi(seed)};
      engine_.seed(seq);
    }
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Anything the samplers can draw from.
template <typename R>
concept VariateSource = requires(R& r) {
  { r.uniform() } -> std::convertible_to<double>;
  { r.normal() } -> std::convertible_to<double>;
};

}  // namespace besselexp

#endif  // BESSELEXP_RNG_HPP
