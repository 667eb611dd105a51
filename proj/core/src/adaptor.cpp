#include "proswap/adaptor.hpp"

#include "proswap/error.hpp"
#include "proswap/rng.hpp"

namespace proswap {

namespace {

Bytes Encode(const GroupElement& rhat, const Scalar& s) {
  ByteWriter w;
  w.raw(rhat.to_bytes());
  w.raw(s.to_bytes());
  return std::move(w).take();
}

void Decode(ByteView data, GroupElement& rhat, Scalar& s) {
  ByteReader r(data);
  rhat = GroupElement::from_bytes(r.raw(kPointBytes));
  s = Scalar::from_bytes(r.raw(kScalarBytes));
  r.expect_done();
}

}  // namespace

SigKeyPair keygen(Rng& rng) { return keypair_from_secret(Scalar::random_nonzero(rng)); }

SigKeyPair keypair_from_secret(const Scalar& sk) {
  if (sk.is_zero()) fail(ErrorCode::kInvalidParameter, "secret key must be nonzero");
  return {sk, GroupElement::base_mul(sk)};
}

Scalar sig_challenge(const GroupElement& pk, const GroupElement& rhat, ByteView msg) {
  return hash_to_scalar("sig", {pk.to_bytes(), rhat.to_bytes(), msg});
}

Signature sign(const SigKeyPair& kp, ByteView msg, Rng& rng) {
  const Scalar r = Scalar::random_nonzero(rng);
  const GroupElement rhat = GroupElement::base_mul(r);
  return {rhat, r + sig_challenge(kp.pk, rhat, msg) * kp.sk};
}

bool vrfy(const GroupElement& pk, ByteView msg, const Signature& sig) {
  const Scalar c = sig_challenge(pk, sig.rhat, msg);
  return GroupElement::base_mul(sig.s) == sig.rhat + pk * c;
}

PreSignature psign(const SigKeyPair& kp, ByteView msg, const GroupElement& statement, Rng& rng) {
  const Scalar r = Scalar::random_nonzero(rng);
  const GroupElement rhat = GroupElement::base_mul(r) + statement;
  return {rhat, r + sig_challenge(kp.pk, rhat, msg) * kp.sk};
}

bool pvrfy(const GroupElement& pk, ByteView msg, const GroupElement& statement, const PreSignature& pre) {
  const Scalar c = sig_challenge(pk, pre.rhat, msg);
  return GroupElement::base_mul(pre.s_tilde) + statement == pre.rhat + pk * c;
}

Signature adapt(const PreSignature& pre, const Scalar& witness) { return {pre.rhat, pre.s_tilde + witness}; }

Scalar extract(const PreSignature& pre, const Signature& sig) {
  if (pre.rhat != sig.rhat) fail(ErrorCode::kExtractionMismatch, "signature nonce differs from pre-signature");
  return sig.s - pre.s_tilde;
}

Bytes serialize(const Signature& sig) { return Encode(sig.rhat, sig.s); }

Bytes serialize(const PreSignature& pre) { return Encode(pre.rhat, pre.s_tilde); }

Signature parse_signature(ByteView data) {
  Signature sig;
  Decode(data, sig.rhat, sig.s);
  return sig;
}

PreSignature parse_presignature(ByteView data) {
  PreSignature pre;
  Decode(data, pre.rhat, pre.s_tilde);
  return pre;
}

}  // namespace proswap
