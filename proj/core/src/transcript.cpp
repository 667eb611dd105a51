#include "proswap/transcript.hpp"

#include <algorithm>
#include <numeric>

#include "proswap/error.hpp"

namespace proswap {

namespace {

void PutU32(std::uint8_t* out, std::uint32_t v) {
  out[0] = static_cast<std::uint8_t>(v >> 24);
  out[1] = static_cast<std::uint8_t>(v >> 16);
  out[2] = static_cast<std::uint8_t>(v >> 8);
  out[3] = static_cast<std::uint8_t>(v);
}

// Uniform draws from a transcript-keyed SHA-512 stream.
class DigestStream {
 public:
  DigestStream(const Transcript& t, std::string_view purpose) : t_(t), purpose_(purpose) {}

  std::uint64_t next_u64() {
    if (pos_ == block_.size()) {
      block_ = t_.digest(purpose_, counter_++);
      pos_ = 0;
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | block_[pos_++];
    return v;
  }

  std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v < limit) return v % bound;
    }
  }

 private:
  const Transcript& t_;
  std::string_view purpose_;
  std::array<std::uint8_t, 64> block_{};
  std::size_t pos_ = 64;
  std::uint64_t counter_ = 0;
};

}  // namespace

Transcript::Transcript(std::string_view label) {
  init_crypto();
  crypto_hash_sha512_init(&state_);
  absorb_var(as_bytes("proswap/transcript/v1"));
  absorb_var(as_bytes(label));
}

void Transcript::absorb_var(ByteView data) {
  std::uint8_t len[4];
  PutU32(len, static_cast<std::uint32_t>(data.size()));
  crypto_hash_sha512_update(&state_, len, 4);
  if (!data.empty()) crypto_hash_sha512_update(&state_, data.data(), data.size());
}

void Transcript::absorb(std::string_view tag, ByteView data) {
  absorb_var(as_bytes(tag));
  absorb_var(data);
}

void Transcript::absorb(std::string_view tag, const Scalar& s) { absorb(tag, s.to_bytes()); }

void Transcript::absorb(std::string_view tag, const GroupElement& p) { absorb(tag, p.to_bytes()); }

void Transcript::absorb_u64(std::string_view tag, std::uint64_t v) {
  std::uint8_t be[8];
  for (int i = 0; i < 8; ++i) be[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  absorb(tag, be);
}

std::array<std::uint8_t, 64> Transcript::digest(std::string_view purpose, std::uint64_t counter) const {
  crypto_hash_sha512_state st = state_;
  std::uint8_t len[4];
  PutU32(len, static_cast<std::uint32_t>(purpose.size()));
  crypto_hash_sha512_update(&st, len, 4);
  crypto_hash_sha512_update(&st, reinterpret_cast<const std::uint8_t*>(purpose.data()), purpose.size());
  std::uint8_t ctr[8];
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter >> (56 - 8 * i));
  crypto_hash_sha512_update(&st, ctr, 8);
  std::array<std::uint8_t, 64> out{};
  crypto_hash_sha512_final(&st, out.data());
  return out;
}

Scalar fs_challenge(const Transcript& t) { return Scalar::from_wide(t.digest("challenge")); }

std::vector<std::size_t> fs_subset(const Transcript& t, std::size_t n, std::size_t k) {
  if (k > n) fail(ErrorCode::kInvalidParameter, "subset size exceeds population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  DigestStream stream(t, "subset");
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.uniform(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace proswap
