#include "proswap/algebra.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>

#include "proswap/error.hpp"
#include "proswap/rng.hpp"

namespace proswap {

namespace {

constexpr std::string_view kHashToGroupTag = "proswap/H_G";
constexpr std::string_view kGeneratorUInput = "proswap/u";

void AbsorbVar(crypto_hash_sha512_state& st, ByteView data) {
  const auto len = static_cast<std::uint32_t>(data.size());
  const std::uint8_t prefix[4] = {static_cast<std::uint8_t>(len >> 24), static_cast<std::uint8_t>(len >> 16),
                                  static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len)};
  crypto_hash_sha512_update(&st, prefix, 4);
  if (!data.empty()) crypto_hash_sha512_update(&st, data.data(), data.size());
}

bool IsZero32(const std::array<std::uint8_t, 32>& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t b) { return b == 0; });
}

}  // namespace

void init_crypto() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) fail(ErrorCode::kInvariantViolation, "libsodium failed to initialise");
  });
}

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  for (int i = 0; i < 8; ++i) s.le_[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return s;
}

Scalar Scalar::random(Rng& rng) {
  std::array<std::uint8_t, 64> wide{};
  rng.fill(wide);
  return from_wide(wide);
}

Scalar Scalar::random_nonzero(Rng& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar Scalar::from_wide(ByteView digest64) {
  if (digest64.size() != 64) fail(ErrorCode::kInvalidParameter, "wide reduction needs 64 bytes");
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.le_.data(), digest64.data());
  return s;
}

Scalar Scalar::from_bytes(ByteView be32) {
  if (be32.size() != kScalarBytes) fail(ErrorCode::kMalformedEncoding, "scalar must be 32 bytes");
  std::array<std::uint8_t, 64> wide{};
  std::reverse_copy(be32.begin(), be32.end(), wide.begin());
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.le_.data(), wide.data());
  if (!std::equal(s.le_.begin(), s.le_.end(), wide.begin())) {
    fail(ErrorCode::kMalformedEncoding, "scalar not reduced modulo the group order");
  }
  return s;
}

std::array<std::uint8_t, kScalarBytes> Scalar::to_bytes() const {
  std::array<std::uint8_t, kScalarBytes> out{};
  std::reverse_copy(le_.begin(), le_.end(), out.begin());
  return out;
}

bool Scalar::is_zero() const { return IsZero32(le_); }

Scalar Scalar::inverse() const {
  Scalar out;
  if (crypto_core_ristretto255_scalar_invert(out.le_.data(), le_.data()) != 0) {
    fail(ErrorCode::kInvalidParameter, "zero has no inverse");
  }
  return out;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar out;
  crypto_core_ristretto255_scalar_add(out.le_.data(), le_.data(), o.le_.data());
  return out;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar out;
  crypto_core_ristretto255_scalar_sub(out.le_.data(), le_.data(), o.le_.data());
  return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar out;
  crypto_core_ristretto255_scalar_mul(out.le_.data(), le_.data(), o.le_.data());
  return out;
}

Scalar Scalar::operator-() const {
  Scalar out;
  crypto_core_ristretto255_scalar_negate(out.le_.data(), le_.data());
  return out;
}

const GroupElement& GroupElement::generator() {
  static const GroupElement g = base_mul(Scalar::one());
  return g;
}

GroupElement GroupElement::base_mul(const Scalar& s) {
  GroupElement out;
  if (s.is_zero()) return out;
  if (crypto_scalarmult_ristretto255_base(out.enc_.data(), s.le_.data()) != 0) out.enc_.fill(0);
  return out;
}

GroupElement GroupElement::from_bytes(ByteView enc) {
  if (enc.size() != kPointBytes) fail(ErrorCode::kMalformedEncoding, "group element must be 32 bytes");
  GroupElement out;
  std::copy(enc.begin(), enc.end(), out.enc_.begin());
  if (out.is_identity()) return out;
  if (crypto_core_ristretto255_is_valid_point(out.enc_.data()) != 1) {
    fail(ErrorCode::kMalformedEncoding, "not a canonical group element");
  }
  return out;
}

bool GroupElement::is_identity() const { return IsZero32(enc_); }

GroupElement GroupElement::operator+(const GroupElement& o) const {
  if (is_identity()) return o;
  if (o.is_identity()) return *this;
  GroupElement out;
  if (crypto_core_ristretto255_add(out.enc_.data(), enc_.data(), o.enc_.data()) != 0) {
    fail(ErrorCode::kInvariantViolation, "group addition on invalid encoding");
  }
  return out;
}

GroupElement GroupElement::operator-(const GroupElement& o) const {
  if (o.is_identity()) return *this;
  GroupElement out;
  if (crypto_core_ristretto255_sub(out.enc_.data(), enc_.data(), o.enc_.data()) != 0) {
    fail(ErrorCode::kInvariantViolation, "group subtraction on invalid encoding");
  }
  return out;
}

GroupElement GroupElement::operator-() const { return identity() - *this; }

GroupElement GroupElement::operator*(const Scalar& s) const {
  GroupElement out;
  if (s.is_zero() || is_identity()) return out;
  if (crypto_scalarmult_ristretto255(out.enc_.data(), s.le_.data(), enc_.data()) != 0) out.enc_.fill(0);
  return out;
}

GroupElement hash_to_group_tagged(std::string_view tag, ByteView input) {
  for (std::uint32_t counter = 0;; ++counter) {
    crypto_hash_sha512_state st;
    crypto_hash_sha512_init(&st);
    AbsorbVar(st, as_bytes(tag));
    AbsorbVar(st, input);
    const std::uint8_t ctr[4] = {static_cast<std::uint8_t>(counter >> 24), static_cast<std::uint8_t>(counter >> 16),
                                 static_cast<std::uint8_t>(counter >> 8), static_cast<std::uint8_t>(counter)};
    crypto_hash_sha512_update(&st, ctr, 4);
    std::array<std::uint8_t, 64> digest{};
    crypto_hash_sha512_final(&st, digest.data());
    GroupElement out;
    crypto_core_ristretto255_from_hash(out.enc_.data(), digest.data());
    if (!out.is_identity()) return out;
  }
}

GroupElement hash_to_group(ByteView input) { return hash_to_group_tagged(kHashToGroupTag, input); }

const GroupElement& generator_u() {
  static const GroupElement u = hash_to_group(as_bytes(kGeneratorUInput));
  return u;
}

Scalar hash_to_scalar(std::string_view domain, std::initializer_list<ByteView> parts) {
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  AbsorbVar(st, as_bytes(domain));
  for (ByteView p : parts) AbsorbVar(st, p);
  std::array<std::uint8_t, 64> digest{};
  crypto_hash_sha512_final(&st, digest.data());
  return Scalar::from_wide(digest);
}

Scalar hash_to_scalar(std::string_view domain, std::span<const Bytes> parts) {
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  AbsorbVar(st, as_bytes(domain));
  for (const Bytes& p : parts) AbsorbVar(st, p);
  std::array<std::uint8_t, 64> digest{};
  crypto_hash_sha512_final(&st, digest.data());
  return Scalar::from_wide(digest);
}

}  // namespace proswap
