#include "proswap/encryption.hpp"

#include "proswap/rng.hpp"

namespace proswap {

EgKeyPair eg_keygen(Rng& rng) {
  const Scalar z = Scalar::random_nonzero(rng);
  return {GroupElement::base_mul(z), z};
}

std::pair<ElGamalCiphertext, Scalar> eg_enc(const GroupElement& key, const GroupElement& msg, Rng& rng) {
  const Scalar alpha = Scalar::random_nonzero(rng);
  return {eg_enc_with_randomness(key, msg, alpha), alpha};
}

ElGamalCiphertext eg_enc_with_randomness(const GroupElement& key, const GroupElement& msg, const Scalar& alpha) {
  return {GroupElement::base_mul(alpha), key * alpha + msg};
}

GroupElement eg_dec(const Scalar& secret, const ElGamalCiphertext& ct) { return ct.c2 - ct.c1 * secret; }

Bytes serialize(const ElGamalCiphertext& ct) {
  ByteWriter w;
  w.raw(ct.c1.to_bytes());
  w.raw(ct.c2.to_bytes());
  return std::move(w).take();
}

ElGamalCiphertext parse_ciphertext(ByteView data) {
  ByteReader r(data);
  ElGamalCiphertext ct;
  ct.c1 = GroupElement::from_bytes(r.raw(kPointBytes));
  ct.c2 = GroupElement::from_bytes(r.raw(kPointBytes));
  r.expect_done();
  return ct;
}

}  // namespace proswap
