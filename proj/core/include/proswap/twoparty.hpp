#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "proswap/adaptor.hpp"
#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"
#include "proswap/proofs.hpp"
#include "proswap/rng.hpp"

namespace proswap {

enum class Role : std::uint8_t { kP0 = 0, kP1 = 1 };

std::string_view to_string(Role role);

// ---- wire messages ----

/// P0 -> P1: hash commitment to P0's share.
struct DkgCommit {
  Scalar commitment;
};

/// Either party's public share with a proof of knowledge of its secret.
struct DkgReveal {
  GroupElement pk_share;
  DlProof proof;
};

/// One party's additive share of the pre-signature response.
struct PartialSig {
  Scalar s;
};

using DkgMessage = std::variant<DkgCommit, DkgReveal>;
using PresignMessage = std::variant<DkgCommit, DkgReveal, PartialSig>;

Bytes serialize(const PresignMessage& msg);
PresignMessage parse_presign_message(ByteView data);

/// C = H("dkg-commit", pk).
Scalar dkg_commitment(const GroupElement& pk);

// ---- key generation ----

struct DkgOutput {
  GroupElement joint_pk;
  Scalar sk_share;
  GroupElement peer_pk;
};

struct DkgStep {
  std::optional<DkgMessage> outgoing;
  std::optional<DkgOutput> output;
};

class DkgSession {
 public:
  enum class Phase { kInit, kCommitted, kRevealed, kDone, kAborted };

  /// P0 returns its commitment as the first message; P1 returns nothing.
  static std::pair<DkgSession, std::optional<DkgMessage>> start(Role role, ByteView session_id, Rng& rng);
  /// Same, with the secret share supplied by the caller.
  static std::pair<DkgSession, std::optional<DkgMessage>> start_with_share(Role role, ByteView session_id,
                                                                          const Scalar& sk_share, Rng& rng);

  /// Throws kProtocolState for out-of-order input and kAbortProtocol when a
  /// proof or opening fails; the session is then dead.
  DkgStep step(const DkgMessage& incoming);

  Role role() const { return role_; }
  Phase phase() const { return phase_; }
  const GroupElement& pk_share() const { return pk_share_; }
  const std::optional<GroupElement>& joint_pk() const { return joint_pk_; }

 private:
  DkgSession(Role role, Bytes session_id, const Scalar& sk_share, Rng rng);

  Transcript proof_context(Role prover) const;
  [[noreturn]] void abort(const std::string& why);

  Role role_;
  Bytes session_id_;
  Phase phase_ = Phase::kInit;
  Scalar sk_share_;
  GroupElement pk_share_;
  std::optional<Scalar> peer_commitment_;
  std::optional<GroupElement> joint_pk_;
  Rng rng_;
};

// ---- pre-signing ----

struct PresignStep {
  std::vector<PresignMessage> outgoing;
  std::optional<PreSignature> output;
};

class PresignSession {
 public:
  enum class Phase { kNonceDkg, kNonceAgreed, kPartialSent, kDone, kAborted };

  static std::pair<PresignSession, std::vector<PresignMessage>> start(Role role, const Scalar& sk_share,
                                                                      const GroupElement& joint_pk, ByteView tx,
                                                                      const GroupElement& statement,
                                                                      ByteView session_id, Rng& rng);

  /// Throws kProtocolState for out-of-order input and kAbortProtocol when the
  /// joint pre-signature fails pvrfy.
  PresignStep step(const PresignMessage& incoming);

  Role role() const { return role_; }
  Phase phase() const { return phase_; }
  const std::optional<GroupElement>& joint_nonce() const { return joint_nonce_; }

 private:
  PresignSession(Role role, const Scalar& sk_share, const GroupElement& joint_pk, Bytes tx,
                 const GroupElement& statement, DkgSession nonce_dkg);

  Scalar partial(const GroupElement& rhat) const;
  PreSignature finish(const Scalar& peer_partial);
  [[noreturn]] void abort(const std::string& why);

  Role role_;
  Phase phase_ = Phase::kNonceDkg;
  Scalar sk_share_;
  GroupElement joint_pk_;
  Bytes tx_;
  GroupElement statement_;
  DkgSession nonce_dkg_;
  Scalar nonce_share_;
  std::optional<GroupElement> joint_nonce_;
  Scalar partial_s_;
};

}  // namespace proswap
