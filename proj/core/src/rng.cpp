#include "proswap/rng.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "proswap/algebra.hpp"
#include "proswap/error.hpp"

namespace proswap {

namespace {

std::array<std::uint8_t, 32> DeriveKey(const std::array<std::uint8_t, 32>& parent, std::string_view kind,
                                       std::span<const std::uint8_t> label) {
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  crypto_hash_sha512_update(&st, reinterpret_cast<const std::uint8_t*>("proswap/rng"), 11);
  crypto_hash_sha512_update(&st, parent.data(), parent.size());
  crypto_hash_sha512_update(&st, reinterpret_cast<const std::uint8_t*>(kind.data()), kind.size());
  const std::uint64_t len = label.size();
  std::uint8_t len_be[8];
  for (int i = 0; i < 8; ++i) len_be[i] = static_cast<std::uint8_t>(len >> (56 - 8 * i));
  crypto_hash_sha512_update(&st, len_be, 8);
  if (!label.empty()) crypto_hash_sha512_update(&st, label.data(), label.size());
  std::array<std::uint8_t, 64> digest{};
  crypto_hash_sha512_final(&st, digest.data());
  std::array<std::uint8_t, 32> key{};
  std::copy_n(digest.begin(), 32, key.begin());
  return key;
}

}  // namespace

Rng Rng::from_seed(std::uint64_t seed) {
  init_crypto();
  std::uint8_t seed_be[8];
  for (int i = 0; i < 8; ++i) seed_be[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
  return Rng(DeriveKey({}, "seed", seed_be));
}

Rng Rng::from_key(const std::array<std::uint8_t, 32>& key) {
  init_crypto();
  return Rng(key);
}

Rng Rng::from_os() {
  init_crypto();
  std::array<std::uint8_t, 32> key{};
  randombytes_buf(key.data(), key.size());
  return Rng(key);
}

void Rng::refill() {
  std::uint8_t nonce[crypto_stream_chacha20_ietf_NONCEBYTES] = {};
  std::memcpy(nonce, &nonce_hi_, sizeof(nonce_hi_));
  buf_.fill(0);
  crypto_stream_chacha20_ietf_xor_ic(buf_.data(), buf_.data(), buf_.size(), nonce, block_, key_.data());
  if (++block_ == 0) ++nonce_hi_;
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    const std::size_t n = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

std::uint64_t Rng::next_u64() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::kInvalidParameter, "uniform bound must be nonzero");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Rng Rng::fork(std::string_view label) const { return Rng(DeriveKey(key_, "label", as_bytes(label))); }

Rng Rng::fork(std::uint64_t index) const {
  std::uint8_t idx_be[8];
  for (int i = 0; i < 8; ++i) idx_be[i] = static_cast<std::uint8_t>(index >> (56 - 8 * i));
  return Rng(DeriveKey(key_, "index", idx_be));
}

}  // namespace proswap
