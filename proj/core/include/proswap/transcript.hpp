#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <sodium.h>

#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"

namespace proswap {

/// Fiat-Shamir transcript. Absorbs length-prefixed (tag, bytes) pairs into a
/// running SHA-512 state; copies are independent histories.
class Transcript {
 public:
  explicit Transcript(std::string_view label);

  void absorb(std::string_view tag, ByteView data);
  void absorb(std::string_view tag, const Scalar& s);
  void absorb(std::string_view tag, const GroupElement& p);
  void absorb_u64(std::string_view tag, std::uint64_t v);

  /// 64-byte digest of the history under a purpose string. Does not mutate.
  std::array<std::uint8_t, 64> digest(std::string_view purpose, std::uint64_t counter = 0) const;

 private:
  void absorb_var(ByteView data);

  crypto_hash_sha512_state state_;
};

Scalar fs_challenge(const Transcript& t);

/// Sorted size-k subset of {0..n-1}. Throws kInvalidParameter when k > n.
std::vector<std::size_t> fs_subset(const Transcript& t, std::size_t n, std::size_t k);

}  // namespace proswap
