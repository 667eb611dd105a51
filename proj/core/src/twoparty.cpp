#include "proswap/twoparty.hpp"

#include "proswap/error.hpp"

namespace proswap {

namespace {

constexpr std::uint8_t kCommitTag = 0x40;
constexpr std::uint8_t kRevealTag = 0x41;
constexpr std::uint8_t kPartialTag = 0x42;

}  // namespace

std::string_view to_string(Role role) { return role == Role::kP0 ? "P0" : "P1"; }

Scalar dkg_commitment(const GroupElement& pk) { return hash_to_scalar("dkg-commit", {pk.to_bytes()}); }

Bytes serialize(const PresignMessage& msg) {
  ByteWriter w;
  std::visit(
      [&w](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DkgCommit>) {
          w.u8(kCommitTag);
          w.raw(m.commitment.to_bytes());
        } else if constexpr (std::is_same_v<T, DkgReveal>) {
          w.u8(kRevealTag);
          w.raw(m.pk_share.to_bytes());
          w.raw(serialize(m.proof));
        } else {
          w.u8(kPartialTag);
          w.raw(m.s.to_bytes());
        }
      },
      msg);
  return std::move(w).take();
}

PresignMessage parse_presign_message(ByteView data) {
  ByteReader r(data);
  PresignMessage out;
  switch (r.u8()) {
    case kCommitTag:
      out = DkgCommit{Scalar::from_bytes(r.raw(kScalarBytes))};
      break;
    case kRevealTag: {
      DkgReveal rv;
      rv.pk_share = GroupElement::from_bytes(r.raw(kPointBytes));
      rv.proof = parse_dl_proof(r.raw(r.remaining()));
      out = rv;
      break;
    }
    case kPartialTag:
      out = PartialSig{Scalar::from_bytes(r.raw(kScalarBytes))};
      break;
    default:
      fail(ErrorCode::kMalformedEncoding, "unknown two-party message tag");
  }
  r.expect_done();
  return out;
}

// ---- DkgSession ----

DkgSession::DkgSession(Role role, Bytes session_id, const Scalar& sk_share, Rng rng)
    : role_(role),
      session_id_(std::move(session_id)),
      sk_share_(sk_share),
      pk_share_(GroupElement::base_mul(sk_share)),
      rng_(std::move(rng)) {}

std::pair<DkgSession, std::optional<DkgMessage>> DkgSession::start(Role role, ByteView session_id, Rng& rng) {
  return start_with_share(role, session_id, Scalar::random_nonzero(rng), rng);
}

std::pair<DkgSession, std::optional<DkgMessage>> DkgSession::start_with_share(Role role, ByteView session_id,
                                                                              const Scalar& sk_share, Rng& rng) {
  if (sk_share.is_zero()) fail(ErrorCode::kInvalidParameter, "key share must be nonzero");
  DkgSession s(role, Bytes(session_id.begin(), session_id.end()), sk_share, rng.fork("dkg-proof"));
  if (role == Role::kP1) return {std::move(s), std::nullopt};
  s.phase_ = Phase::kCommitted;
  DkgMessage first = DkgCommit{dkg_commitment(s.pk_share_)};
  return {std::move(s), first};
}

Transcript DkgSession::proof_context(Role prover) const {
  Transcript t("proswap/dkg");
  t.absorb("session", session_id_);
  t.absorb("prover", as_bytes(to_string(prover)));
  return t;
}

void DkgSession::abort(const std::string& why) {
  phase_ = Phase::kAborted;
  fail(ErrorCode::kAbortProtocol, "dkg " + std::string(to_string(role_)) + ": " + why);
}

DkgStep DkgSession::step(const DkgMessage& incoming) {
  const Role peer = role_ == Role::kP0 ? Role::kP1 : Role::kP0;
  if (role_ == Role::kP1 && phase_ == Phase::kInit) {
    const auto* commit = std::get_if<DkgCommit>(&incoming);
    if (commit == nullptr) fail(ErrorCode::kProtocolState, "P1 expected the commitment");
    peer_commitment_ = commit->commitment;
    phase_ = Phase::kRevealed;
    return {DkgReveal{pk_share_, prove_dl(pk_share_, sk_share_, proof_context(role_), rng_)}, std::nullopt};
  }
  if (role_ == Role::kP0 && phase_ == Phase::kCommitted) {
    const auto* reveal = std::get_if<DkgReveal>(&incoming);
    if (reveal == nullptr) fail(ErrorCode::kProtocolState, "P0 expected P1's share");
    if (reveal->pk_share.is_identity() || !verify_dl(reveal->pk_share, reveal->proof, proof_context(peer))) {
      abort("peer proof of knowledge rejected");
    }
    joint_pk_ = pk_share_ + reveal->pk_share;
    phase_ = Phase::kDone;
    DkgReveal mine{pk_share_, prove_dl(pk_share_, sk_share_, proof_context(role_), rng_)};
    return {mine, DkgOutput{*joint_pk_, sk_share_, reveal->pk_share}};
  }
  if (role_ == Role::kP1 && phase_ == Phase::kRevealed) {
    const auto* reveal = std::get_if<DkgReveal>(&incoming);
    if (reveal == nullptr) fail(ErrorCode::kProtocolState, "P1 expected P0's opening");
    if (dkg_commitment(reveal->pk_share) != *peer_commitment_) abort("opening does not match commitment");
    if (reveal->pk_share.is_identity() || !verify_dl(reveal->pk_share, reveal->proof, proof_context(peer))) {
      abort("peer proof of knowledge rejected");
    }
    joint_pk_ = pk_share_ + reveal->pk_share;
    phase_ = Phase::kDone;
    return {std::nullopt, DkgOutput{*joint_pk_, sk_share_, reveal->pk_share}};
  }
  fail(ErrorCode::kProtocolState, "dkg message arrived in a terminal or mismatched phase");
}

// ---- PresignSession ----

namespace {

std::optional<DkgMessage> AsDkg(const PresignMessage& m) {
  if (const auto* c = std::get_if<DkgCommit>(&m)) return DkgMessage{*c};
  if (const auto* r = std::get_if<DkgReveal>(&m)) return DkgMessage{*r};
  return std::nullopt;
}

PresignMessage Lift(const DkgMessage& m) {
  return std::visit([](const auto& v) -> PresignMessage { return v; }, m);
}

}  // namespace

PresignSession::PresignSession(Role role, const Scalar& sk_share, const GroupElement& joint_pk, Bytes tx,
                               const GroupElement& statement, DkgSession nonce_dkg)
    : role_(role),
      sk_share_(sk_share),
      joint_pk_(joint_pk),
      tx_(std::move(tx)),
      statement_(statement),
      nonce_dkg_(std::move(nonce_dkg)) {}

std::pair<PresignSession, std::vector<PresignMessage>> PresignSession::start(
    Role role, const Scalar& sk_share, const GroupElement& joint_pk, ByteView tx, const GroupElement& statement,
    ByteView session_id, Rng& rng) {
  ByteWriter sid;
  sid.raw(as_bytes("presign-nonce"));
  sid.var(session_id);
  sid.var(tx);
  sid.raw(statement.to_bytes());
  auto [dkg, first] = DkgSession::start(role, sid.bytes(), rng);
  PresignSession s(role, sk_share, joint_pk, Bytes(tx.begin(), tx.end()), statement, std::move(dkg));
  std::vector<PresignMessage> out;
  if (first) out.push_back(Lift(*first));
  return {std::move(s), std::move(out)};
}

void PresignSession::abort(const std::string& why) {
  phase_ = Phase::kAborted;
  fail(ErrorCode::kAbortProtocol, "presign " + std::string(to_string(role_)) + ": " + why);
}

Scalar PresignSession::partial(const GroupElement& rhat) const {
  return nonce_share_ + sig_challenge(joint_pk_, rhat, tx_) * sk_share_;
}

PreSignature PresignSession::finish(const Scalar& peer_partial) {
  const PreSignature pre{*joint_nonce_ + statement_, partial_s_ + peer_partial};
  if (!pvrfy(joint_pk_, tx_, statement_, pre)) abort("joint pre-signature failed verification");
  phase_ = Phase::kDone;
  return pre;
}

PresignStep PresignSession::step(const PresignMessage& incoming) {
  if (phase_ == Phase::kNonceDkg) {
    const auto dkg_msg = AsDkg(incoming);
    if (!dkg_msg) fail(ErrorCode::kProtocolState, "partial signature before nonce agreement");
    DkgStep st;
    try {
      st = nonce_dkg_.step(*dkg_msg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAbortProtocol) phase_ = Phase::kAborted;
      throw;
    }
    PresignStep out;
    if (st.outgoing) out.outgoing.push_back(Lift(*st.outgoing));
    if (st.output) {
      nonce_share_ = st.output->sk_share;
      joint_nonce_ = st.output->joint_pk;
      partial_s_ = partial(*joint_nonce_ + statement_);
      if (role_ == Role::kP0) {
        out.outgoing.push_back(PartialSig{partial_s_});
        phase_ = Phase::kPartialSent;
      } else {
        phase_ = Phase::kNonceAgreed;
      }
    }
    return out;
  }
  const auto* ps = std::get_if<PartialSig>(&incoming);
  if (ps == nullptr) fail(ErrorCode::kProtocolState, "expected a partial signature");
  if (role_ == Role::kP1 && phase_ == Phase::kNonceAgreed) {
    PresignStep out;
    out.output = finish(ps->s);
    out.outgoing.push_back(PartialSig{partial_s_});
    return out;
  }
  if (role_ == Role::kP0 && phase_ == Phase::kPartialSent) {
    PresignStep out;
    out.output = finish(ps->s);
    return out;
  }
  fail(ErrorCode::kProtocolState, "presign message arrived in a terminal or mismatched phase");
}

}  // namespace proswap
