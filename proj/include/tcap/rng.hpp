#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace tcap {

/// Philox4x32-10 counter-based generator.
///
/// A (seed, stream) pair selects an independent sequence; the block counter
/// advances inside the stream. Two generators built from the same pair
/// produce bit-identical output, which is what lets simulations hand one
/// stream to each trial and stay independent of execution order.
///
/// Satisfies UniformRandomBitGenerator, so it also drives <random>
/// distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t lo = next32();
    const std::uint64_t hi = next32();
    return (hi << 32) | lo;
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unit-mean exponential.
  double exponential() noexcept { return -std::log(uniform()); }

  /// Standard normal via Box-Muller (one of the pair is discarded).
  double normal() noexcept {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    return radius * std::cos(2.0 * std::numbers::pi * uniform());
  }

  /// Circularly-symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal() noexcept {
    const double radius = std::sqrt(-std::log(uniform()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(phase), radius * std::sin(phase)};
  }

 private:
  std::uint32_t next32() noexcept {
    if (index_ == 4) {
      block_ = generate_block();
      index_ = 0;
      // 64-bit block counter in the low two words
      if (++counter_[0] == 0) ++counter_[1];
    }
    return block_[index_++];
  }

  std::array<std::uint32_t, 4> generate_block() const noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    std::array<std::uint32_t, 4> ctr = counter_;
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int index_ = 4;
};

}  // namespace tcap
