#pragma once

#include <utility>

#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"

namespace proswap {

class Rng;

struct ElGamalCiphertext {
  GroupElement c1;
  GroupElement c2;
  bool operator==(const ElGamalCiphertext&) const = default;
};

struct EgKeyPair {
  GroupElement pub;
  Scalar secret;
};

EgKeyPair eg_keygen(Rng& rng);

/// Encrypts with fresh nonzero randomness, which is returned for the proof.
std::pair<ElGamalCiphertext, Scalar> eg_enc(const GroupElement& key, const GroupElement& msg, Rng& rng);
/// Raw encryption; alpha = 0 is allowed here and leaks the message.
ElGamalCiphertext eg_enc_with_randomness(const GroupElement& key, const GroupElement& msg, const Scalar& alpha);
GroupElement eg_dec(const Scalar& secret, const ElGamalCiphertext& ct);

/// c1 || c2.
Bytes serialize(const ElGamalCiphertext& ct);
ElGamalCiphertext parse_ciphertext(ByteView data);

}  // namespace proswap
