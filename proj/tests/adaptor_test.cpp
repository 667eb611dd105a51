#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "proswap/adaptor.hpp"
#include "proswap/error.hpp"
#include "proswap/rng.hpp"

using namespace proswap;

namespace {

Bytes Msg(std::string_view s) { return Bytes(s.begin(), s.end()); }

// g^s == Rhat + c*pk with c computed from the reference hash.
bool ReferenceVerify(const GroupElement& pk, const Bytes& msg, const Signature& sig) {
  const Scalar c = oracle::hash_to_scalar("sig", {oracle::cat({pk.to_bytes()}), oracle::cat({sig.rhat.to_bytes()}), msg});
  return GroupElement::base_mul(sig.s) == sig.rhat + pk * c;
}

}  // namespace

TEST(Keygen, DistinctKeysAndDegenerateSecrets) {
  Rng rng = Rng::from_seed(10);
  std::set<Scalar> seen;
  for (int i = 0; i < 1000; ++i) {
    const SigKeyPair kp = keygen(rng);
    EXPECT_FALSE(kp.sk.is_zero());
    EXPECT_EQ(kp.pk, GroupElement::base_mul(kp.sk));
    seen.insert(kp.sk);
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(keypair_from_secret(Scalar::one()).pk, GroupElement::generator());
  EXPECT_THROW(keypair_from_secret(Scalar()), Error);
}

TEST(Sign, AcceptsHonestAndAgreesWithReferenceEquation) {
  Rng rng = Rng::from_seed(11);
  const SigKeyPair kp = keygen(rng);
  const Bytes m = Msg("pay 1 coin");
  const Signature sig = sign(kp, m, rng);
  EXPECT_TRUE(vrfy(kp.pk, m, sig));
  EXPECT_TRUE(ReferenceVerify(kp.pk, m, sig));
  EXPECT_EQ(sig_challenge(kp.pk, sig.rhat, m),
            oracle::hash_to_scalar("sig", {oracle::cat({kp.pk.to_bytes()}), oracle::cat({sig.rhat.to_bytes()}), m}));
}

TEST(Sign, BoundToMessageKeyAndEveryByte) {
  Rng rng = Rng::from_seed(12);
  const SigKeyPair kp = keygen(rng);
  const Bytes m = Msg("message");
  const Signature sig = sign(kp, m, rng);
  for (std::size_t i = 0; i < m.size(); ++i) {
    Bytes mm = m;
    mm[i] ^= 0x01;
    EXPECT_FALSE(vrfy(kp.pk, mm, sig));
  }
  EXPECT_FALSE(vrfy(keygen(rng).pk, m, sig));
  const Bytes enc = serialize(sig);
  ASSERT_EQ(enc.size(), 64u);
  for (std::size_t i = 0; i < enc.size(); ++i) {
    Bytes e = enc;
    e[i] ^= 0x01;
    bool accepted = false;
    try {
      accepted = vrfy(kp.pk, m, parse_signature(e));
    } catch (const Error&) {
    }
    EXPECT_FALSE(accepted) << "byte " << i;
  }
  Signature bumped = sig;
  bumped.s += Scalar::one();
  EXPECT_FALSE(vrfy(kp.pk, m, bumped));
}

TEST(Sign, KeyHolderCanCraftIdentityNonce) {
  Rng rng = Rng::from_seed(13);
  const SigKeyPair kp = keygen(rng);
  const Bytes m = Msg("m");
  const Scalar c = sig_challenge(kp.pk, GroupElement::identity(), m);
  EXPECT_TRUE(vrfy(kp.pk, m, Signature{GroupElement::identity(), c * kp.sk}));
}

TEST(PreSign, VerifiesAndAdaptsUnderMatchingWitness) {
  Rng rng = Rng::from_seed(14);
  const SigKeyPair kp = keygen(rng);
  const Scalar y = Scalar::random_nonzero(rng);
  const GroupElement statement = GroupElement::base_mul(y);
  const Bytes m = Msg("tx");
  const PreSignature pre = psign(kp, m, statement, rng);
  EXPECT_TRUE(pvrfy(kp.pk, m, statement, pre));
  // Reference pre-verification: g^s~ + Y == Rhat + c*pk.
  const Scalar c = sig_challenge(kp.pk, pre.rhat, m);
  EXPECT_EQ(GroupElement::base_mul(pre.s_tilde) + statement, pre.rhat + kp.pk * c);

  EXPECT_FALSE(pvrfy(kp.pk, m, GroupElement::base_mul(Scalar::random_nonzero(rng)), pre));
  PreSignature bumped = pre;
  bumped.s_tilde += Scalar::one();
  EXPECT_FALSE(pvrfy(kp.pk, m, statement, bumped));

  const Signature sig = adapt(pre, y);
  EXPECT_TRUE(vrfy(kp.pk, m, sig));
  EXPECT_TRUE(ReferenceVerify(kp.pk, m, sig));
  EXPECT_FALSE(vrfy(kp.pk, m, adapt(pre, y + Scalar::one())));
  EXPECT_EQ(extract(pre, sig), y);
}

TEST(PreSign, IdentityStatementIsPlainSchnorr) {
  Rng rng = Rng::from_seed(15);
  const SigKeyPair kp = keygen(rng);
  const Bytes m = Msg("tx");
  const PreSignature pre = psign(kp, m, GroupElement::identity(), rng);
  EXPECT_TRUE(pvrfy(kp.pk, m, GroupElement::identity(), pre));
  EXPECT_TRUE(vrfy(kp.pk, m, Signature{pre.rhat, pre.s_tilde}));
  EXPECT_EQ(adapt(pre, Scalar()).s, pre.s_tilde);
}

TEST(Extract, EdgeCases) {
  Rng rng = Rng::from_seed(16);
  const SigKeyPair kp = keygen(rng);
  const Scalar y = Scalar::random_nonzero(rng);
  const GroupElement statement = GroupElement::base_mul(y);
  const Bytes m = Msg("tx");
  const PreSignature pre = psign(kp, m, statement, rng);
  EXPECT_TRUE(extract(pre, Signature{pre.rhat, pre.s_tilde}).is_zero());
  // Unrelated signature sharing Rhat: the result is not a witness for Y.
  const Signature unrelated{pre.rhat, Scalar::random(rng)};
  EXPECT_NE(GroupElement::base_mul(extract(pre, unrelated)), statement);
  // Different Rhat is refused.
  const Signature other = sign(kp, m, rng);
  try {
    extract(pre, other);
    FAIL() << "expected extraction mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExtractionMismatch);
  }
}

TEST(Serialization, RoundTripsAndRejectsLengths) {
  Rng rng = Rng::from_seed(17);
  const SigKeyPair kp = keygen(rng);
  const Signature sig = sign(kp, Msg("x"), rng);
  EXPECT_EQ(parse_signature(serialize(sig)), sig);
  const PreSignature pre = psign(kp, Msg("x"), GroupElement::generator(), rng);
  EXPECT_EQ(parse_presignature(serialize(pre)), pre);
  Bytes enc = serialize(sig);
  enc.push_back(0);
  EXPECT_THROW(parse_signature(enc), Error);
  EXPECT_THROW(parse_presignature(Bytes(10, 0)), Error);
}
