#pragma once

#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"

namespace proswap {

class Rng;

struct SigKeyPair {
  Scalar sk;
  GroupElement pk;
};

/// Schnorr signature (Rhat, s) with g^s = Rhat + pk*c.
struct Signature {
  GroupElement rhat;
  Scalar s;
  bool operator==(const Signature&) const = default;
};

/// Pre-signature bound to a statement Y: g^s_tilde + Y = Rhat + pk*c.
struct PreSignature {
  GroupElement rhat;
  Scalar s_tilde;
  bool operator==(const PreSignature&) const = default;
};

SigKeyPair keygen(Rng& rng);
/// Throws kInvalidParameter for sk = 0.
SigKeyPair keypair_from_secret(const Scalar& sk);

/// c = H("sig", pk, Rhat, m); shared by signing and pre-signing.
Scalar sig_challenge(const GroupElement& pk, const GroupElement& rhat, ByteView msg);

Signature sign(const SigKeyPair& kp, ByteView msg, Rng& rng);
bool vrfy(const GroupElement& pk, ByteView msg, const Signature& sig);

PreSignature psign(const SigKeyPair& kp, ByteView msg, const GroupElement& statement, Rng& rng);
bool pvrfy(const GroupElement& pk, ByteView msg, const GroupElement& statement, const PreSignature& pre);
Signature adapt(const PreSignature& pre, const Scalar& witness);
/// Throws kExtractionMismatch when the nonces differ.
Scalar extract(const PreSignature& pre, const Signature& sig);

/// Rhat || s, 64 bytes. Containers add their own type tags.
Bytes serialize(const Signature& sig);
Bytes serialize(const PreSignature& pre);
Signature parse_signature(ByteView data);
PreSignature parse_presignature(ByteView data);

}  // namespace proswap
