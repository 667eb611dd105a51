#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "oracle.hpp"
#include "proswap/error.hpp"
#include "proswap/oprf.hpp"
#include "proswap/rng.hpp"

using namespace proswap;

namespace {

Scalar ReferenceEval(const Scalar& sk, Guess x, const Scalar& alpha, const Bytes& pk_bytes) {
  Bytes enc = oracle::cat({as_bytes("proswap/guess")});
  for (int i = 0; i < 4; ++i) enc.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  const GroupElement base = GroupElement::from_bytes(oracle::hash_to_group("proswap/H_G", enc));
  const GroupElement point = base * (sk * alpha);
  return oracle::hash_to_scalar("proswap/H_p", {pk_bytes, oracle::cat({point.to_bytes()})});
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvariantViolation;
}

}  // namespace

TEST(GuessDomain, BoundsAndEncoding) {
  EXPECT_EQ(guess_domain_size(0), 1u);
  EXPECT_EQ(guess_domain_size(8), 256u);
  EXPECT_EQ(guess_domain_size(kMaxEll), 65536u);
  EXPECT_THROW(guess_domain_size(kMaxEll + 1), Error);
  EXPECT_TRUE(guess_in_domain(255, 8));
  EXPECT_FALSE(guess_in_domain(256, 8));
  EXPECT_TRUE(guess_in_domain(0, 0));
  EXPECT_FALSE(guess_in_domain(1, 0));
  EXPECT_EQ(CodeOf([] { check_guess(4, 2); }), ErrorCode::kInvalidGuess);
  EXPECT_EQ(to_hex(encode_guess(0x01020304)), to_hex(as_bytes("proswap/guess")) + "04030201");
}

TEST(Keygen, ShapeAndDistinctExponents) {
  Rng rng = Rng::from_seed(20);
  for (std::size_t lambda : {2u, 4u, 80u}) {
    const OprfKeyPair kp = oprf_keygen(lambda, rng);
    ASSERT_EQ(kp.alphas.size(), lambda);
    ASSERT_EQ(kp.a.size(), lambda);
    EXPECT_EQ(kp.x, GroupElement::base_mul(kp.sk));
    for (std::size_t i = 0; i < lambda; ++i) EXPECT_EQ(kp.a[i], GroupElement::base_mul(kp.alphas[i]));
    EXPECT_EQ(std::set<Scalar>(kp.alphas.begin(), kp.alphas.end()).size(), lambda);
    EXPECT_EQ(OprfPublicKey::from_bytes(kp.public_bytes()), kp.public_key());
    EXPECT_EQ(kp.public_bytes().size(), 32 * (lambda + 1));
  }
  EXPECT_THROW(oprf_keygen(3, rng), Error);
  EXPECT_THROW(oprf_keygen(0, rng), Error);
}

TEST(Request, BlindingBehaviour) {
  Rng rng = Rng::from_seed(21);
  const auto [st, req] = request_with_blind(5, 4, Scalar::one());
  EXPECT_EQ(req.req, guess_base(5));
  EXPECT_EQ(st.x, 5u);
  const auto [s1, r1] = request(5, 4, rng);
  const auto [s2, r2] = request(5, 4, rng);
  EXPECT_NE(r1.req, r2.req);
  EXPECT_EQ(CodeOf([&] { request(16, 4, rng); }), ErrorCode::kInvalidGuess);
  EXPECT_THROW(request_with_blind(1, 4, Scalar()), Error);
}

TEST(BlindEval, ExponentiatesAndCommutes) {
  Rng rng = Rng::from_seed(22);
  const auto [st, req] = request(3, 2, rng);
  EXPECT_EQ(blind_eval(Scalar::one(), req).res, req.req);
  const Scalar sk = Scalar::random_nonzero(rng);
  const Scalar a = Scalar::random_nonzero(rng);
  EXPECT_EQ(blind_eval(sk, req).res, req.req * sk);
  EXPECT_EQ(blind_eval(sk, OprfRequest{req.req * a}).res, blind_eval(sk, req).res * a);
  EXPECT_EQ(CodeOf([&] { blind_eval(sk, OprfRequest{GroupElement::identity()}); }), ErrorCode::kInvalidRequest);
}

TEST(Finalize, MatchesDirectEvaluationAndReference) {
  Rng rng = Rng::from_seed(23);
  const OprfKeyPair kp = oprf_keygen(4, rng);
  const Bytes pk = kp.public_bytes();
  for (Guess x = 0; x < 4; ++x) {
    const auto [st, req] = request(x, 2, rng);
    const OprfResponse res = blind_eval(kp.sk, req);
    for (const Scalar& alpha : kp.alphas) {
      const Scalar h = finalize_with_alpha(pk, st, res, alpha);
      EXPECT_EQ(h, eval(kp.sk, x, 2, alpha, pk));
      EXPECT_EQ(h, ReferenceEval(kp.sk, x, alpha, pk));
    }
  }
}

TEST(Finalize, UnblindedIdentityAndDishonestResponse) {
  Rng rng = Rng::from_seed(24);
  const OprfKeyPair kp = oprf_keygen(2, rng);
  const Bytes pk = kp.public_bytes();
  const auto [st, req] = request_with_blind(1, 1, Scalar::one());
  const OprfResponse res = blind_eval(kp.sk, req);
  EXPECT_EQ(finalize_with_alpha(pk, st, res, Scalar::one()), oprf_output_hash(pk, res.res));
  const OprfResponse bad{res.res + GroupElement::generator()};
  EXPECT_NE(finalize_with_alpha(pk, st, bad, kp.alphas[0]), eval(kp.sk, 1, 1, kp.alphas[0], pk));
  EXPECT_THROW(finalize_with_alpha(pk, st, res, Scalar()), Error);
}

TEST(Eval, DeterministicAndCollisionFreeOverDomain) {
  Rng rng = Rng::from_seed(25);
  const OprfKeyPair kp = oprf_keygen(2, rng);
  const Bytes pk = kp.public_bytes();
  std::set<Scalar> outs;
  for (Guess x = 0; x < 256; ++x) outs.insert(eval(kp.sk, x, 8, kp.alphas[0], pk));
  EXPECT_EQ(outs.size(), 256u);
  EXPECT_EQ(eval(kp.sk, 7, 8, kp.alphas[1], pk), eval(kp.sk, 7, 8, kp.alphas[1], pk));
  // Output is keyed on the public key bytes.
  Bytes other = pk;
  other[0] ^= 1;
  EXPECT_NE(eval(kp.sk, 7, 8, kp.alphas[1], pk), eval(kp.sk, 7, 8, kp.alphas[1], other));
}
