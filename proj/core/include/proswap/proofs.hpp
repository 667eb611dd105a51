#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"
#include "proswap/encryption.hpp"
#include "proswap/oprf.hpp"
#include "proswap/transcript.hpp"

namespace proswap {

class Rng;

// Every proof below is a Fiat-Shamir compiled sigma protocol. The caller's
// context transcript is copied, never mutated, so one context can seed
// several proofs.

/// Knowledge of sk with pk = g^sk.
struct DlProof {
  GroupElement r;
  Scalar z;
};

DlProof prove_dl(const GroupElement& pk, const Scalar& sk, const Transcript& ctx, Rng& rng);
bool verify_dl(const GroupElement& pk, const DlProof& proof, const Transcript& ctx);

/// Opening of a Pedersen commitment C = g^sk h^omega.
struct OpenProof {
  GroupElement r;
  Scalar z_sk;
  Scalar z_omega;
};

OpenProof prove_open(const GroupElement& commitment, const GroupElement& g, const GroupElement& h, const Scalar& sk,
                     const Scalar& omega, const Transcript& ctx, Rng& rng);
bool verify_open(const GroupElement& commitment, const GroupElement& g, const GroupElement& h, const OpenProof& proof,
                 const Transcript& ctx);

/// ct = (g^alpha, Z^alpha req^sk) with pk = g^sk.
struct EncProof {
  GroupElement r1, r2, r3;
  Scalar z_sk;
  Scalar z_alpha;
};

/// Throws kInvalidStatement when (pk, ct) does not match the witness.
EncProof prove_enc(const GroupElement& pk, const GroupElement& enc_key, const GroupElement& req,
                   const ElGamalCiphertext& ct, const Scalar& sk, const Scalar& alpha, const Transcript& ctx, Rng& rng);
bool verify_enc(const GroupElement& pk, const GroupElement& enc_key, const GroupElement& req,
                const ElGamalCiphertext& ct, const EncProof& proof, const Transcript& ctx);

/// Same discrete log across two bases: P1 = g1^x and P2 = g2^x.
struct DleqProof {
  GroupElement r1, r2;
  Scalar z;
};

DleqProof prove_dleq(const GroupElement& g1, const GroupElement& p1, const GroupElement& g2, const GroupElement& p2,
                     const Scalar& x, const Transcript& ctx, Rng& rng);
bool verify_dleq(const GroupElement& g1, const GroupElement& p1, const GroupElement& g2, const GroupElement& p2,
                 const DleqProof& proof, const Transcript& ctx);

struct OrBranch {
  GroupElement b;
  GroupElement a1, a2, a3, a4;
  Scalar c;
  Scalar z_alpha;
  Scalar z_sk;
};

/// T = H_G(y)^(sk alpha) for some y in [0, 2^ell), pk = g^sk, A = g^alpha.
struct OrProof {
  std::vector<OrBranch> branches;  // one per candidate y, in order
};

/// Throws kInvalidWitness when y is outside the domain.
OrProof prove_or(const GroupElement& pk, const GroupElement& a, const GroupElement& t, unsigned ell, const Scalar& sk,
                 const Scalar& alpha, Guess y, const Transcript& ctx, Rng& rng);
bool verify_or(const GroupElement& pk, const GroupElement& a, const GroupElement& t, unsigned ell,
               const OrProof& proof, const Transcript& ctx);

struct OrWfBranch {
  GroupElement m;
  GroupElement a1, a2, a3, a4;
  Scalar c;
  Scalar z_sk;
  Scalar z_rho;
};

/// U = u^rho, V = H_G(y)^sk g^rho for some y in [0, 2^ell), pk = g^sk.
struct OrWfProof {
  std::vector<OrWfBranch> branches;
};

OrWfProof prove_orwf(const GroupElement& pk, const GroupElement& u_stmt, const GroupElement& v_stmt, unsigned ell,
                     const Scalar& sk, const Scalar& rho, Guess y, const Transcript& ctx, Rng& rng);
bool verify_orwf(const GroupElement& pk, const GroupElement& u_stmt, const GroupElement& v_stmt, unsigned ell,
                 const OrWfProof& proof, const Transcript& ctx);

/// Statement for the hidden-base proof: X = h g^rho, Y = h^alpha, U_rho = u^rho,
/// U_alpha = u^alpha, T_u = u^(rho alpha), with h unknown to the verifier.
struct HiddenBaseStatement {
  GroupElement x;
  GroupElement y;
  GroupElement u_rho;
  GroupElement u_alpha;
  GroupElement t_u;
};

struct HiddenBaseProof {
  GroupElement t_g;
  GroupElement a11, a12, a21, a22, a31, a32;
  Scalar z1, z2, z3;
};

HiddenBaseProof prove_hidden(const HiddenBaseStatement& st, const Scalar& rho, const Scalar& alpha,
                             const Transcript& ctx, Rng& rng);
bool verify_hidden(const HiddenBaseStatement& st, const HiddenBaseProof& proof, const Transcript& ctx);

// ---- cut-and-choose ----

enum class CcMode : std::uint8_t { kPlain = 0, kBatched = 1 };

struct CcCommitment {
  Scalar c;         // H_p(pk, T_i) + r_i
  GroupElement r;   // g^r_i
  GroupElement a;   // g^alpha_i
};

struct CcOpening {
  std::size_t index = 0;
  Scalar r;
  GroupElement t;
};

struct CcReveal {
  std::size_t index = 0;
  Scalar alpha;
  Scalar s;  // r_k + w_win
};

/// Per opened index in batched mode.
struct CcHiddenLink {
  GroupElement u_alpha;
  GroupElement t_u;
  HiddenBaseProof hidden;
  DleqProof link;  // log_g A_j = log_u U_alpha
};

struct CutChooseProof {
  CcMode mode = CcMode::kPlain;
  std::vector<CcCommitment> commitments;
  std::vector<CcOpening> opened;    // sorted by index
  std::vector<CcReveal> unopened;   // sorted by index
  // kPlain: a single OR proof over the transcript-weighted combination of openings.
  OrProof aggregate;
  // kBatched: one OR proof on (U, V) plus a hidden-base link per opening.
  GroupElement u_stmt;
  GroupElement v_stmt;
  OrWfProof orwf;
  std::vector<CcHiddenLink> links;
};

/// Throws kInvalidWitness for an out-of-domain target or Y_win != g^w_win,
/// kInvalidParameter for a malformed key.
CutChooseProof prove_ywin(const OprfKeyPair& kp, Guess y_tgt, const Scalar& w_win, const GroupElement& y_win,
                          unsigned ell, const Transcript& ctx, Rng& rng, CcMode mode = CcMode::kPlain);
bool verify_ywin(const OprfPublicKey& pk, const GroupElement& y_win, unsigned ell, const CutChooseProof& proof,
                 const Transcript& ctx);

/// Candidate w_k = s_k - c_k + h_k for each unopened k present in finalized.
std::vector<Scalar> witness_candidates(const CutChooseProof& proof, const std::map<std::size_t, Scalar>& finalized);
std::optional<Scalar> recover_witness(const CutChooseProof& proof, const std::map<std::size_t, Scalar>& finalized,
                                      const GroupElement& y_win);

// ---- serialization ----

Bytes serialize(const DlProof& p);
Bytes serialize(const OpenProof& p);
Bytes serialize(const EncProof& p);
Bytes serialize(const DleqProof& p);
Bytes serialize(const OrProof& p);
Bytes serialize(const OrWfProof& p);
Bytes serialize(const HiddenBaseProof& p);
Bytes serialize(const CutChooseProof& p);

DlProof parse_dl_proof(ByteView data);
OpenProof parse_open_proof(ByteView data);
EncProof parse_enc_proof(ByteView data);
DleqProof parse_dleq_proof(ByteView data);
OrProof parse_or_proof(ByteView data);
OrWfProof parse_orwf_proof(ByteView data);
HiddenBaseProof parse_hidden_proof(ByteView data);
CutChooseProof parse_cut_choose_proof(ByteView data);

namespace detail {

/// OR prover that treats `real_branch` as the true branch while using
/// `real_base` as its base. With real_base != H_G(real_branch) the output
/// does not verify; used to model a cheating dealer.
OrProof prove_or_with_base(const GroupElement& pk, const GroupElement& a, const GroupElement& t, unsigned ell,
                           const Scalar& sk, const Scalar& alpha, Guess real_branch, const GroupElement& real_base,
                           const Transcript& ctx, Rng& rng);
OrWfProof prove_orwf_with_base(const GroupElement& pk, const GroupElement& u_stmt, const GroupElement& v_stmt,
                               unsigned ell, const Scalar& sk, const Scalar& rho, Guess real_branch,
                               const GroupElement& real_base, const Transcript& ctx, Rng& rng);

/// Cut-and-choose prover without the domain check: an out-of-domain target
/// is proven against branch (y_tgt mod 2^ell).
CutChooseProof prove_ywin_unchecked(const OprfKeyPair& kp, Guess y_tgt, const Scalar& w_win,
                                    const GroupElement& y_win, unsigned ell, const Transcript& ctx, Rng& rng,
                                    CcMode mode = CcMode::kPlain);

}  // namespace detail

}  // namespace proswap
