#pragma once

#include <cstdint>
#include <limits>

namespace boolperc {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream. Draw i of stream (root, replica, tag) is
/// mix64(key + (i + 1) * golden), so any draw is a pure function of its
/// coordinates and independent streams need no shared state.
///
/// Satisfies UniformRandomBitGenerator, so standard distributions accept it.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t root_seed, std::uint64_t replica = 0,
                      std::uint64_t tag = 0) noexcept
      : key_(mix64(mix64(mix64(root_seed ^ 0x6a09e667f3bcc909ULL) ^ replica) ^
                   (tag + 0x3c6ef372fe94f82bULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix64(key_ + (++counter_) * kGolden); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() noexcept { return 1.0 - uniform(); }

  std::uint64_t draws() const noexcept { return counter_; }

  /// A statistically independent child stream.
  CounterRng split(std::uint64_t tag) const noexcept {
    CounterRng child(0);
    child.key_ = mix64(key_ ^ mix64(tag + 0xa54ff53a5f1d36f1ULL));
    return child;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace boolperc
