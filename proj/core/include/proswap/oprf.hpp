#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"

namespace proswap {

class Rng;

/// A guess or target value in [0, 2^ell).
using Guess = std::uint32_t;

inline constexpr unsigned kMaxEll = 16;

/// Throws kInvalidParameter when ell exceeds kMaxEll.
std::uint64_t guess_domain_size(unsigned ell);
bool guess_in_domain(Guess x, unsigned ell);
/// Throws kInvalidGuess unless x is in [0, 2^ell).
void check_guess(Guess x, unsigned ell);

/// Fixed-width (4 byte little-endian) encoding under a domain tag.
Bytes encode_guess(Guess x);
/// H_G(encode(x)); no domain check so callers can probe out-of-domain values.
GroupElement guess_base(Guess x);

/// H_p keyed on the serialized OPRF public key.
Scalar oprf_output_hash(ByteView pk_bytes, const GroupElement& point);

struct OprfPublicKey {
  GroupElement x;
  std::vector<GroupElement> a;

  /// X || A_1 || ... || A_lambda.
  Bytes to_bytes() const;
  static OprfPublicKey from_bytes(ByteView data);
  bool operator==(const OprfPublicKey&) const = default;
};

struct OprfKeyPair {
  Scalar sk;
  GroupElement x;
  std::vector<Scalar> alphas;
  std::vector<GroupElement> a;

  OprfPublicKey public_key() const { return {x, a}; }
  Bytes public_bytes() const { return public_key().to_bytes(); }
};

struct OprfRequest {
  GroupElement req;
};

struct OprfClientState {
  Guess x = 0;
  unsigned ell = 0;
  Scalar r;
};

struct OprfResponse {
  GroupElement res;
};

/// Throws kInvalidParameter unless lambda is even and at least 2.
OprfKeyPair oprf_keygen(std::size_t lambda, Rng& rng);

std::pair<OprfClientState, OprfRequest> request(Guess x, unsigned ell, Rng& rng);
/// Throws kInvalidParameter when r is zero.
std::pair<OprfClientState, OprfRequest> request_with_blind(Guess x, unsigned ell, const Scalar& r);

/// Throws kInvalidRequest for the identity.
OprfResponse blind_eval(const Scalar& sk, const OprfRequest& req);

/// H_p(pk, res^(alpha/r)). Throws kInvalidParameter for alpha = 0 or r = 0.
Scalar finalize_with_alpha(ByteView pk_bytes, const OprfClientState& st, const OprfResponse& res,
                           const Scalar& alpha);

/// Direct evaluation H_p(pk, H_G(x)^(sk*alpha)).
Scalar eval(const Scalar& sk, Guess x, unsigned ell, const Scalar& alpha, ByteView pk_bytes);

}  // namespace proswap
