#pragma once

// Reference computations that do not go through the library's own helpers:
// scalar arithmetic on GMP integers and hashes rebuilt from one-shot SHA-512.

#include <gmpxx.h>
#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"

namespace oracle {

using proswap::ByteView;
using proswap::Bytes;

inline const mpz_class& order() {
  static const mpz_class l = (mpz_class(1) << 252) + mpz_class("27742317777372353535851937790883648493", 10);
  return l;
}

inline mpz_class from_be(ByteView be) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), be.size(), 1, 1, 1, 0, be.data());
  return v;
}

inline mpz_class from_le(ByteView le) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), le.size(), -1, 1, -1, 0, le.data());
  return v;
}

inline mpz_class to_int(const proswap::Scalar& s) { return from_be(s.to_bytes()); }

inline std::array<std::uint8_t, 32> to_be32(mpz_class v) {
  v %= order();
  if (v < 0) v += order();
  std::array<std::uint8_t, 32> out{};
  std::size_t count = 0;
  std::array<std::uint8_t, 32> tmp{};
  mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  std::copy(tmp.begin(), tmp.begin() + static_cast<long>(count), out.end() - static_cast<long>(count));
  return out;
}

inline proswap::Scalar to_scalar(const mpz_class& v) { return proswap::Scalar::from_bytes(to_be32(v)); }

inline void put_var(Bytes& buf, ByteView data) {
  const auto n = static_cast<std::uint32_t>(data.size());
  buf.push_back(static_cast<std::uint8_t>(n >> 24));
  buf.push_back(static_cast<std::uint8_t>(n >> 16));
  buf.push_back(static_cast<std::uint8_t>(n >> 8));
  buf.push_back(static_cast<std::uint8_t>(n));
  buf.insert(buf.end(), data.begin(), data.end());
}

inline std::array<std::uint8_t, 64> sha512(const Bytes& msg) {
  std::array<std::uint8_t, 64> out{};
  crypto_hash_sha512(out.data(), msg.data(), msg.size());
  return out;
}

inline proswap::Scalar hash_to_scalar(std::string_view domain, const std::vector<Bytes>& parts) {
  Bytes buf;
  put_var(buf, proswap::as_bytes(domain));
  for (const auto& p : parts) put_var(buf, p);
  const auto d = sha512(buf);
  return to_scalar(from_le(d));
}

inline std::array<std::uint8_t, 32> hash_to_group(std::string_view tag, ByteView input) {
  for (std::uint32_t ctr = 0;; ++ctr) {
    Bytes buf;
    put_var(buf, proswap::as_bytes(tag));
    put_var(buf, input);
    for (int shift = 24; shift >= 0; shift -= 8) buf.push_back(static_cast<std::uint8_t>(ctr >> shift));
    const auto d = sha512(buf);
    std::array<std::uint8_t, 32> p{};
    crypto_core_ristretto255_from_hash(p.data(), d.data());
    if (!sodium_is_zero(p.data(), p.size())) return p;
  }
}

inline std::array<std::uint8_t, 32> base_mul(const mpz_class& k) {
  auto be = to_be32(k);
  std::array<std::uint8_t, 32> le{};
  std::reverse_copy(be.begin(), be.end(), le.begin());
  std::array<std::uint8_t, 32> out{};
  if (crypto_scalarmult_ristretto255_base(out.data(), le.data()) != 0) out.fill(0);
  return out;
}

inline Bytes cat(std::initializer_list<ByteView> parts) {
  Bytes out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace oracle
