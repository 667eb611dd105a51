#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace proswap {

/// ChaCha20 keystream generator. Every sampling site in the library draws from
/// an Rng handed in by the caller so seeded runs replay bit for bit.
class Rng {
 public:
  static Rng from_seed(std::uint64_t seed);
  static Rng from_key(const std::array<std::uint8_t, 32>& key);
  static Rng from_os();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  /// Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);

  /// Independent child stream; consumes no output from this one.
  Rng fork(std::string_view label) const;
  Rng fork(std::uint64_t index) const;

 private:
  explicit Rng(const std::array<std::uint8_t, 32>& key) : key_(key) {}

  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 64> buf_{};
  std::size_t pos_ = 64;
  std::uint32_t block_ = 0;
  std::uint32_t nonce_hi_ = 0;
};

}  // namespace proswap
