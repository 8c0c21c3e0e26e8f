#ifndef FLUXTRACE_RNG_HPP
#define FLUXTRACE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fluxtrace {

/// SplitMix64: a 64-bit-state generator (Steele, Lea & Flood 2014).
///
/// Streams: `SplitMix64::stream(seed, k)` is the k-th independent stream for a
/// seed. Its state is the avalanche mix of `seed` offset by `k` odd 64-bit
/// constants, so distinct (seed, k) pairs start at unrelated points of the
/// sequence. A simulation run owns exactly one stream.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index = 0) noexcept {
    return SplitMix64(mix(seed) + index * 0xd1342543de82ef95ULL);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return UINT64_MAX; }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential waiting time with the given rate, by inverse CDF.
  double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

  /// Uniform integer in [0, n), n > 0 (Lemire's nearly-divisionless method).
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t state() const noexcept { return state_; }

private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace fluxtrace

#endif  // FLUXTRACE_RNG_HPP
