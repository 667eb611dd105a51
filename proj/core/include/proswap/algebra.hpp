#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string_view>

#include "proswap/bytes.hpp"

namespace proswap {

class Rng;

/// The single prime-order group used by every protocol object.
inline constexpr std::string_view kGroupName = "ristretto255";
inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kPointBytes = 32;

/// Integer modulo the group order, always held in canonical form.
class Scalar {
 public:
  Scalar() = default;  // zero

  static Scalar from_u64(std::uint64_t v);
  static Scalar one() { return from_u64(1); }
  static Scalar random(Rng& rng);
  static Scalar random_nonzero(Rng& rng);
  /// Uniform reduction of a 64-byte digest.
  static Scalar from_wide(ByteView digest64);
  /// 32-byte big-endian, must be < order. Throws kMalformedEncoding otherwise.
  static Scalar from_bytes(ByteView be32);

  std::array<std::uint8_t, kScalarBytes> to_bytes() const;

  bool is_zero() const;
  /// Throws kInvalidParameter for zero.
  Scalar inverse() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  bool operator==(const Scalar&) const = default;
  /// Lexicographic on the little-endian limbs; only for ordered containers.
  auto operator<=>(const Scalar&) const = default;

 private:
  std::array<std::uint8_t, kScalarBytes> le_{};  // little-endian, canonical

  friend class GroupElement;
};

/// Element of the prime-order group, written additively: P + Q, P * s.
class GroupElement {
 public:
  GroupElement() = default;  // identity

  static GroupElement identity() { return {}; }
  static const GroupElement& generator();
  /// g * s, using the fixed-base path.
  static GroupElement base_mul(const Scalar& s);
  /// Throws kMalformedEncoding for anything but a canonical encoding.
  static GroupElement from_bytes(ByteView enc);

  const std::array<std::uint8_t, kPointBytes>& to_bytes() const { return enc_; }
  bool is_identity() const;

  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-(const GroupElement& o) const;
  GroupElement operator-() const;
  GroupElement operator*(const Scalar& s) const;
  GroupElement& operator+=(const GroupElement& o) { return *this = *this + o; }

  bool operator==(const GroupElement&) const = default;
  auto operator<=>(const GroupElement&) const = default;

 private:
  std::array<std::uint8_t, kPointBytes> enc_{};

  friend GroupElement hash_to_group(ByteView input);
  friend GroupElement hash_to_group_tagged(std::string_view tag, ByteView input);
};

inline GroupElement operator*(const Scalar& s, const GroupElement& p) { return p * s; }

/// H_G: random-oracle style map to the group, never the identity.
GroupElement hash_to_group(ByteView input);
GroupElement hash_to_group_tagged(std::string_view tag, ByteView input);

/// Independent second generator u; nobody knows log_g(u).
const GroupElement& generator_u();

/// H_p: domain-separated hash of length-prefixed parts into the scalar field.
Scalar hash_to_scalar(std::string_view domain, std::initializer_list<ByteView> parts);
Scalar hash_to_scalar(std::string_view domain, std::span<const Bytes> parts);

/// Must be called (idempotently) before any other use of the library.
void init_crypto();

}  // namespace proswap
