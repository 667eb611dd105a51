#include <gtest/gtest.h>

#include "proof_fixtures.hpp"
#include "proswap/error.hpp"
#include "proswap/proofs.hpp"
#include "proswap/rng.hpp"

using namespace proswap;
using fixtures::Ctx;

namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvariantViolation;
}

std::map<std::size_t, Scalar> Finalized(const OprfKeyPair& kp, const CutChooseProof& proof, Guess guess,
                                        unsigned ell) {
  std::map<std::size_t, Scalar> out;
  for (const auto& rv : proof.unopened) {
    out[rv.index] = eval(kp.sk, guess, ell, kp.alphas[rv.index], kp.public_bytes());
  }
  return out;
}

}  // namespace

TEST(ProofSuite, HonestProofsVerifyAndMutationsReject) {
  Rng rng = Rng::from_seed(40);
  for (const auto& proto : fixtures::AllProtocols()) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto c = proto.make(rng, i);
      EXPECT_TRUE(c.verify(c.proof)) << proto.name;
      for (int m = 0; m < 10; ++m) {
        EXPECT_FALSE(c.verify(fixtures::MutateOneByte(c.proof, rng))) << proto.name;
      }
      Bytes extended = c.proof;
      extended.push_back(0);
      EXPECT_FALSE(c.verify(extended)) << proto.name;
      EXPECT_FALSE(c.verify(ByteView(c.proof).first(c.proof.size() - 1))) << proto.name;
    }
  }
}

TEST(SchnorrDl, Examples) {
  Rng rng = Rng::from_seed(41);
  const GroupElement g = GroupElement::generator();
  DlProof p = prove_dl(g, Scalar::one(), Ctx(0), rng);
  EXPECT_TRUE(verify_dl(g, p, Ctx(0)));
  EXPECT_FALSE(verify_dl(g, p, Ctx(1)));
  p.z += Scalar::one();
  EXPECT_FALSE(verify_dl(g, p, Ctx(0)));
}

TEST(SchnorrCom, Examples) {
  Rng rng = Rng::from_seed(42);
  const GroupElement g = GroupElement::generator();
  const GroupElement h = generator_u();
  OpenProof p = prove_open(GroupElement::identity(), g, h, Scalar(), Scalar(), Ctx(0), rng);
  EXPECT_TRUE(verify_open(GroupElement::identity(), g, h, p, Ctx(0)));
  p.z_omega += Scalar::one();
  EXPECT_FALSE(verify_open(GroupElement::identity(), g, h, p, Ctx(0)));
}

TEST(SchnorrEnc, Examples) {
  Rng rng = Rng::from_seed(43);
  const Scalar sk = Scalar::random_nonzero(rng);
  const GroupElement pk = GroupElement::base_mul(sk);
  const GroupElement enc_key = GroupElement::base_mul(Scalar::random_nonzero(rng));
  const GroupElement req = hash_to_group(Bytes{1});
  const auto [ct, alpha] = eg_enc(enc_key, req * sk, rng);
  EncProof p = prove_enc(pk, enc_key, req, ct, sk, alpha, Ctx(0), rng);
  EXPECT_TRUE(verify_enc(pk, enc_key, req, ct, p, Ctx(0)));
  ElGamalCiphertext bad = ct;
  bad.c2 = bad.c2 + GroupElement::generator();
  EXPECT_FALSE(verify_enc(pk, enc_key, req, bad, p, Ctx(0)));
  EXPECT_EQ(CodeOf([&] { prove_enc(pk, enc_key, req, bad, sk, alpha, Ctx(0), rng); }), ErrorCode::kInvalidStatement);
  p.z_sk += Scalar::one();
  EXPECT_FALSE(verify_enc(pk, enc_key, req, ct, p, Ctx(0)));
}

TEST(Dleq, Examples) {
  Rng rng = Rng::from_seed(44);
  const Scalar x = Scalar::random_nonzero(rng);
  const GroupElement g = GroupElement::generator();
  const GroupElement& u = generator_u();
  DleqProof p = prove_dleq(g, g * x, u, u * x, x, Ctx(0), rng);
  EXPECT_TRUE(verify_dleq(g, g * x, u, u * x, p, Ctx(0)));
  EXPECT_FALSE(verify_dleq(g, g * x, u, u * (x + Scalar::one()), p, Ctx(0)));
  p.z += Scalar::one();
  EXPECT_FALSE(verify_dleq(g, g * x, u, u * x, p, Ctx(0)));
}

TEST(OrSchnorr, Examples) {
  Rng rng = Rng::from_seed(45);
  const Scalar sk = Scalar::random_nonzero(rng);
  const Scalar alpha = Scalar::random_nonzero(rng);
  const GroupElement pk = GroupElement::base_mul(sk);
  const GroupElement a = GroupElement::base_mul(alpha);
  const GroupElement t = guess_base(0) * (sk * alpha);
  OrProof p = prove_or(pk, a, t, 1, sk, alpha, 0, Ctx(0), rng);
  EXPECT_EQ(p.branches.size(), 2u);
  EXPECT_TRUE(verify_or(pk, a, t, 1, p, Ctx(0)));
  EXPECT_FALSE(verify_or(pk, a, t + GroupElement::generator(), 1, p, Ctx(0)));
  EXPECT_FALSE(verify_or(pk, a, t, 2, p, Ctx(0)));
  OrProof shifted = p;
  shifted.branches[0].c += Scalar::one();
  EXPECT_FALSE(verify_or(pk, a, t, 1, shifted, Ctx(0)));
  EXPECT_EQ(CodeOf([&] { prove_or(pk, a, t, 1, sk, alpha, 2, Ctx(0), rng); }), ErrorCode::kInvalidWitness);
}

TEST(OrSchnorr, ZeroEllIsASingleBranch) {
  Rng rng = Rng::from_seed(46);
  const Scalar sk = Scalar::random_nonzero(rng);
  const Scalar alpha = Scalar::random_nonzero(rng);
  const GroupElement pk = GroupElement::base_mul(sk);
  const GroupElement a = GroupElement::base_mul(alpha);
  const GroupElement t = guess_base(0) * (sk * alpha);
  const OrProof p = prove_or(pk, a, t, 0, sk, alpha, 0, Ctx(0), rng);
  EXPECT_EQ(p.branches.size(), 1u);
  EXPECT_TRUE(verify_or(pk, a, t, 0, p, Ctx(0)));
}

TEST(OrWf, RejectsWrongStatement) {
  Rng rng = Rng::from_seed(47);
  const Scalar sk = Scalar::random_nonzero(rng);
  const Scalar rho = Scalar::random_nonzero(rng);
  const GroupElement pk = GroupElement::base_mul(sk);
  const GroupElement u_stmt = generator_u() * rho;
  const GroupElement v_stmt = guess_base(3) * sk + GroupElement::base_mul(rho);
  const OrWfProof p = prove_orwf(pk, u_stmt, v_stmt, 2, sk, rho, 3, Ctx(0), rng);
  EXPECT_TRUE(verify_orwf(pk, u_stmt, v_stmt, 2, p, Ctx(0)));
  EXPECT_FALSE(verify_orwf(pk, u_stmt, v_stmt + GroupElement::generator(), 2, p, Ctx(0)));
  EXPECT_FALSE(verify_orwf(pk, u_stmt, v_stmt, 2, p, Ctx(1)));
  // Base outside the domain: the forged branch fails.
  const GroupElement v_out = guess_base(4) * sk + GroupElement::base_mul(rho);
  const OrWfProof forged = detail::prove_orwf_with_base(pk, u_stmt, v_out, 2, sk, rho, 0, guess_base(4), Ctx(0), rng);
  EXPECT_FALSE(verify_orwf(pk, u_stmt, v_out, 2, forged, Ctx(0)));
}

TEST(HiddenBase, ExamplesAndDegenerateBase) {
  Rng rng = Rng::from_seed(48);
  const Scalar rho = Scalar::random_nonzero(rng);
  const Scalar alpha = Scalar::random_nonzero(rng);
  const auto st = fixtures::HiddenStatement(hash_to_group(Bytes{2}), rho, alpha);
  const HiddenBaseProof p = prove_hidden(st, rho, alpha, Ctx(0), rng);
  EXPECT_TRUE(verify_hidden(st, p, Ctx(0)));
  for (Scalar HiddenBaseProof::*field : {&HiddenBaseProof::z1, &HiddenBaseProof::z2, &HiddenBaseProof::z3}) {
    HiddenBaseProof bad = p;
    bad.*field += Scalar::one();
    EXPECT_FALSE(verify_hidden(st, bad, Ctx(0)));
  }
  const auto degenerate = fixtures::HiddenStatement(GroupElement::identity(), rho, alpha);
  EXPECT_TRUE(degenerate.y.is_identity());
  EXPECT_TRUE(verify_hidden(degenerate, prove_hidden(degenerate, rho, alpha, Ctx(0), rng), Ctx(0)));
}

class CutChooseTest : public ::testing::TestWithParam<CcMode> {};

TEST_P(CutChooseTest, HonestAcceptsAndTamperingRejects) {
  Rng rng = Rng::from_seed(49);
  const OprfKeyPair kp = oprf_keygen(4, rng);
  const Scalar w = Scalar::random_nonzero(rng);
  const GroupElement y_win = GroupElement::base_mul(w);
  const CutChooseProof proof = prove_ywin(kp, 2, w, y_win, 2, Ctx(0), rng, GetParam());
  EXPECT_EQ(proof.opened.size(), 2u);
  EXPECT_EQ(proof.unopened.size(), 2u);
  EXPECT_TRUE(verify_ywin(kp.public_key(), y_win, 2, proof, Ctx(0)));
  EXPECT_TRUE(verify_ywin(kp.public_key(), y_win, 2, parse_cut_choose_proof(serialize(proof)), Ctx(0)));

  EXPECT_FALSE(verify_ywin(kp.public_key(), y_win, 3, proof, Ctx(0)));
  EXPECT_FALSE(verify_ywin(kp.public_key(), y_win, 2, proof, Ctx(1)));
  EXPECT_FALSE(verify_ywin(kp.public_key(), y_win + GroupElement::generator(), 2, proof, Ctx(0)));

  CutChooseProof bumped = proof;
  bumped.unopened[0].s += Scalar::one();
  EXPECT_FALSE(verify_ywin(kp.public_key(), y_win, 2, bumped, Ctx(0)));

  CutChooseProof permuted = proof;
  std::swap(permuted.opened[0].index, permuted.unopened[0].index);
  EXPECT_FALSE(verify_ywin(kp.public_key(), y_win, 2, permuted, Ctx(0)));

  OprfPublicKey other = kp.public_key();
  std::swap(other.a[0], other.a[1]);
  EXPECT_FALSE(verify_ywin(other, y_win, 2, proof, Ctx(0)));
}

TEST_P(CutChooseTest, ProverRefusesBadWitness) {
  Rng rng = Rng::from_seed(50);
  const OprfKeyPair kp = oprf_keygen(4, rng);
  const Scalar w = Scalar::random_nonzero(rng);
  const GroupElement y_win = GroupElement::base_mul(w);
  EXPECT_EQ(CodeOf([&] { prove_ywin(kp, 4, w, y_win, 2, Ctx(0), rng, GetParam()); }), ErrorCode::kInvalidWitness);
  EXPECT_EQ(CodeOf([&] { prove_ywin(kp, 1, w + Scalar::one(), y_win, 2, Ctx(0), rng, GetParam()); }),
            ErrorCode::kInvalidWitness);
}

TEST_P(CutChooseTest, OutOfDomainTargetIsCaught) {
  Rng rng = Rng::from_seed(51);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const OprfKeyPair kp = oprf_keygen(16, rng);
    const Scalar w = Scalar::random_nonzero(rng);
    const GroupElement y_win = GroupElement::base_mul(w);
    const Guess cheat = 16 + static_cast<Guess>(rng.uniform(1000));
    const CutChooseProof p = detail::prove_ywin_unchecked(kp, cheat, w, y_win, 4, Ctx(i), rng, GetParam());
    EXPECT_FALSE(verify_ywin(kp.public_key(), y_win, 4, p, Ctx(i)));
  }
}

TEST_P(CutChooseTest, WitnessRecoveryFollowsTheGuess) {
  Rng rng = Rng::from_seed(52);
  const unsigned ell = 3;
  const OprfKeyPair kp = oprf_keygen(8, rng);
  const Scalar w = Scalar::random_nonzero(rng);
  const GroupElement y_win = GroupElement::base_mul(w);
  const Guess target = 5;
  const CutChooseProof proof = prove_ywin(kp, target, w, y_win, ell, Ctx(0), rng, GetParam());

  const auto win = Finalized(kp, proof, target, ell);
  const auto cands = witness_candidates(proof, win);
  ASSERT_EQ(cands.size(), 4u);
  for (const auto& c : cands) EXPECT_EQ(c, w);
  EXPECT_EQ(recover_witness(proof, win, y_win), w);

  for (Guess g = 0; g < 8; ++g) {
    if (g == target) continue;
    EXPECT_FALSE(recover_witness(proof, Finalized(kp, proof, g, ell), y_win).has_value());
  }
  EXPECT_TRUE(witness_candidates(proof, {}).empty());
}

INSTANTIATE_TEST_SUITE_P(Modes, CutChooseTest, ::testing::Values(CcMode::kPlain, CcMode::kBatched),
                         [](const auto& info) { return info.param == CcMode::kPlain ? "Plain" : "Batched"; });

TEST(CutChoose, SizeGrowsWithEll) {
  Rng rng = Rng::from_seed(53);
  const OprfKeyPair kp = oprf_keygen(8, rng);
  const Scalar w = Scalar::random_nonzero(rng);
  const GroupElement y_win = GroupElement::base_mul(w);
  std::size_t prev = 0;
  for (unsigned ell = 1; ell <= 6; ++ell) {
    const auto size = serialize(prove_ywin(kp, 0, w, y_win, ell, Ctx(ell), rng)).size();
    EXPECT_GT(size, prev);
    prev = size;
  }
}
