#include "proswap/proofs.hpp"

#include <algorithm>

#include "proswap/error.hpp"
#include "proswap/rng.hpp"

namespace proswap {

namespace {

using G = GroupElement;

constexpr std::uint8_t kDlTag = 0x10;
constexpr std::uint8_t kOpenTag = 0x11;
constexpr std::uint8_t kEncTag = 0x12;
constexpr std::uint8_t kDleqTag = 0x13;
constexpr std::uint8_t kOrTag = 0x14;
constexpr std::uint8_t kOrWfTag = 0x15;
constexpr std::uint8_t kHiddenTag = 0x16;
constexpr std::uint8_t kCutChooseTag = 0x20;

const G& g() { return G::generator(); }

G base(const Scalar& s) { return G::base_mul(s); }

Transcript Start(const Transcript& ctx, std::string_view protocol) {
  Transcript t = ctx;
  t.absorb("protocol", as_bytes(protocol));
  return t;
}

void Put(ByteWriter& w, const G& p) { w.raw(p.to_bytes()); }
void Put(ByteWriter& w, const Scalar& s) { w.raw(s.to_bytes()); }
G GetPoint(ByteReader& r) { return G::from_bytes(r.raw(kPointBytes)); }
Scalar GetScalar(ByteReader& r) { return Scalar::from_bytes(r.raw(kScalarBytes)); }

void ExpectTag(ByteReader& r, std::uint8_t tag) {
  if (r.u8() != tag) fail(ErrorCode::kMalformedEncoding, "unexpected proof tag");
}

std::uint64_t BranchCount(unsigned ell) { return guess_domain_size(ell); }

// ---- field-level writers shared by standalone and nested encodings ----

void WriteOr(ByteWriter& w, const OrProof& p) {
  w.u8(kOrTag);
  w.u32(static_cast<std::uint32_t>(p.branches.size()));
  for (const auto& b : p.branches) {
    Put(w, b.b);
    Put(w, b.a1);
    Put(w, b.a2);
    Put(w, b.a3);
    Put(w, b.a4);
    Put(w, b.c);
    Put(w, b.z_alpha);
    Put(w, b.z_sk);
  }
}

OrProof ReadOr(ByteReader& r) {
  ExpectTag(r, kOrTag);
  const std::uint32_t n = r.u32();
  if (n > (std::uint64_t{1} << kMaxEll) || n * std::uint64_t{256} > r.remaining()) {
    fail(ErrorCode::kMalformedEncoding, "OR proof branch count");
  }
  OrProof p;
  p.branches.resize(n);
  for (auto& b : p.branches) {
    b.b = GetPoint(r);
    b.a1 = GetPoint(r);
    b.a2 = GetPoint(r);
    b.a3 = GetPoint(r);
    b.a4 = GetPoint(r);
    b.c = GetScalar(r);
    b.z_alpha = GetScalar(r);
    b.z_sk = GetScalar(r);
  }
  return p;
}

void WriteOrWf(ByteWriter& w, const OrWfProof& p) {
  w.u8(kOrWfTag);
  w.u32(static_cast<std::uint32_t>(p.branches.size()));
  for (const auto& b : p.branches) {
    Put(w, b.m);
    Put(w, b.a1);
    Put(w, b.a2);
    Put(w, b.a3);
    Put(w, b.a4);
    Put(w, b.c);
    Put(w, b.z_sk);
    Put(w, b.z_rho);
  }
}

OrWfProof ReadOrWf(ByteReader& r) {
  ExpectTag(r, kOrWfTag);
  const std::uint32_t n = r.u32();
  if (n > (std::uint64_t{1} << kMaxEll) || n * std::uint64_t{256} > r.remaining()) {
    fail(ErrorCode::kMalformedEncoding, "orWF proof branch count");
  }
  OrWfProof p;
  p.branches.resize(n);
  for (auto& b : p.branches) {
    b.m = GetPoint(r);
    b.a1 = GetPoint(r);
    b.a2 = GetPoint(r);
    b.a3 = GetPoint(r);
    b.a4 = GetPoint(r);
    b.c = GetScalar(r);
    b.z_sk = GetScalar(r);
    b.z_rho = GetScalar(r);
  }
  return p;
}

void WriteHidden(ByteWriter& w, const HiddenBaseProof& p) {
  w.u8(kHiddenTag);
  for (const G* x : {&p.t_g, &p.a11, &p.a12, &p.a21, &p.a22, &p.a31, &p.a32}) Put(w, *x);
  for (const Scalar* s : {&p.z1, &p.z2, &p.z3}) Put(w, *s);
}

HiddenBaseProof ReadHidden(ByteReader& r) {
  ExpectTag(r, kHiddenTag);
  HiddenBaseProof p;
  for (G* x : {&p.t_g, &p.a11, &p.a12, &p.a21, &p.a22, &p.a31, &p.a32}) *x = GetPoint(r);
  for (Scalar* s : {&p.z1, &p.z2, &p.z3}) *s = GetScalar(r);
  return p;
}

void WriteDleq(ByteWriter& w, const DleqProof& p) {
  w.u8(kDleqTag);
  Put(w, p.r1);
  Put(w, p.r2);
  Put(w, p.z);
}

DleqProof ReadDleq(ByteReader& r) {
  ExpectTag(r, kDleqTag);
  DleqProof p;
  p.r1 = GetPoint(r);
  p.r2 = GetPoint(r);
  p.z = GetScalar(r);
  return p;
}

template <typename Proof, typename Reader>
Proof ParseWhole(ByteView data, Reader read) {
  ByteReader r(data);
  Proof p = read(r);
  r.expect_done();
  return p;
}

}  // namespace

// ---- schnorrDL ----

DlProof prove_dl(const G& pk, const Scalar& sk, const Transcript& ctx, Rng& rng) {
  const Scalar k = Scalar::random(rng);
  DlProof p{base(k), {}};
  Transcript t = Start(ctx, "schnorrDL");
  t.absorb("pk", pk);
  t.absorb("R", p.r);
  p.z = k + fs_challenge(t) * sk;
  return p;
}

bool verify_dl(const G& pk, const DlProof& proof, const Transcript& ctx) {
  Transcript t = Start(ctx, "schnorrDL");
  t.absorb("pk", pk);
  t.absorb("R", proof.r);
  return base(proof.z) == proof.r + pk * fs_challenge(t);
}

// ---- schnorrCom ----

namespace {

Transcript OpenTranscript(const Transcript& ctx, const G& commitment, const G& gb, const G& hb, const G& r) {
  Transcript t = Start(ctx, "schnorrCom");
  t.absorb("g", gb);
  t.absorb("h", hb);
  t.absorb("C", commitment);
  t.absorb("R", r);
  return t;
}

}  // namespace

OpenProof prove_open(const G& commitment, const G& gb, const G& hb, const Scalar& sk, const Scalar& omega,
                     const Transcript& ctx, Rng& rng) {
  const Scalar k_sk = Scalar::random(rng);
  const Scalar k_omega = Scalar::random(rng);
  OpenProof p;
  p.r = gb * k_sk + hb * k_omega;
  const Scalar c = fs_challenge(OpenTranscript(ctx, commitment, gb, hb, p.r));
  p.z_sk = k_sk + c * sk;
  p.z_omega = k_omega + c * omega;
  return p;
}

bool verify_open(const G& commitment, const G& gb, const G& hb, const OpenProof& proof, const Transcript& ctx) {
  const Scalar c = fs_challenge(OpenTranscript(ctx, commitment, gb, hb, proof.r));
  return gb * proof.z_sk + hb * proof.z_omega == proof.r + commitment * c;
}

// ---- schnorrEnc ----

namespace {

Transcript EncTranscript(const Transcript& ctx, const G& pk, const G& enc_key, const G& req,
                         const ElGamalCiphertext& ct, const EncProof& p) {
  Transcript t = Start(ctx, "schnorrEnc");
  t.absorb("pk", pk);
  t.absorb("Z", enc_key);
  t.absorb("req", req);
  t.absorb("c1", ct.c1);
  t.absorb("c2", ct.c2);
  t.absorb("R1", p.r1);
  t.absorb("R2", p.r2);
  t.absorb("R3", p.r3);
  return t;
}

}  // namespace

EncProof prove_enc(const G& pk, const G& enc_key, const G& req, const ElGamalCiphertext& ct, const Scalar& sk,
                   const Scalar& alpha, const Transcript& ctx, Rng& rng) {
  if (base(sk) != pk || base(alpha) != ct.c1 || enc_key * alpha + req * sk != ct.c2) {
    fail(ErrorCode::kInvalidStatement, "ciphertext does not match the encryption witness");
  }
  const Scalar k_sk = Scalar::random(rng);
  const Scalar k_alpha = Scalar::random(rng);
  EncProof p;
  p.r1 = base(k_sk);
  p.r2 = base(k_alpha);
  p.r3 = enc_key * k_alpha + req * k_sk;
  const Scalar c = fs_challenge(EncTranscript(ctx, pk, enc_key, req, ct, p));
  p.z_sk = k_sk + c * sk;
  p.z_alpha = k_alpha + c * alpha;
  return p;
}

bool verify_enc(const G& pk, const G& enc_key, const G& req, const ElGamalCiphertext& ct, const EncProof& proof,
                const Transcript& ctx) {
  if (req.is_identity() || enc_key.is_identity()) return false;
  const Scalar c = fs_challenge(EncTranscript(ctx, pk, enc_key, req, ct, proof));
  return base(proof.z_sk) == proof.r1 + pk * c && base(proof.z_alpha) == proof.r2 + ct.c1 * c &&
         enc_key * proof.z_alpha + req * proof.z_sk == proof.r3 + ct.c2 * c;
}

// ---- DLEQ ----

namespace {

Transcript DleqTranscript(const Transcript& ctx, const G& g1, const G& p1, const G& g2, const G& p2,
                          const DleqProof& p) {
  Transcript t = Start(ctx, "dleq");
  t.absorb("g1", g1);
  t.absorb("p1", p1);
  t.absorb("g2", g2);
  t.absorb("p2", p2);
  t.absorb("r1", p.r1);
  t.absorb("r2", p.r2);
  return t;
}

}  // namespace

DleqProof prove_dleq(const G& g1, const G& p1, const G& g2, const G& p2, const Scalar& x, const Transcript& ctx,
                     Rng& rng) {
  const Scalar k = Scalar::random(rng);
  DleqProof p{g1 * k, g2 * k, {}};
  p.z = k + fs_challenge(DleqTranscript(ctx, g1, p1, g2, p2, p)) * x;
  return p;
}

bool verify_dleq(const G& g1, const G& p1, const G& g2, const G& p2, const DleqProof& proof, const Transcript& ctx) {
  const Scalar c = fs_challenge(DleqTranscript(ctx, g1, p1, g2, p2, proof));
  return g1 * proof.z == proof.r1 + p1 * c && g2 * proof.z == proof.r2 + p2 * c;
}

// ---- orSchnorr ----

namespace {

Transcript OrTranscript(const Transcript& ctx, const G& pk, const G& a, const G& t_stmt, unsigned ell,
                        const OrProof& p) {
  Transcript t = Start(ctx, "orSchnorr");
  t.absorb("pk", pk);
  t.absorb("A", a);
  t.absorb("T", t_stmt);
  t.absorb_u64("ell", ell);
  for (const auto& b : p.branches) {
    t.absorb("B", b.b);
    t.absorb("a1", b.a1);
    t.absorb("a2", b.a2);
    t.absorb("a3", b.a3);
    t.absorb("a4", b.a4);
  }
  return t;
}

}  // namespace

OrProof detail::prove_or_with_base(const G& pk, const G& a, const G& t_stmt, unsigned ell, const Scalar& sk,
                                   const Scalar& alpha, Guess real_branch, const G& real_base, const Transcript& ctx,
                                   Rng& rng) {
  const std::uint64_t m = BranchCount(ell);
  if (real_branch >= m) fail(ErrorCode::kInvalidWitness, "real branch outside the OR domain");
  OrProof p;
  p.branches.resize(m);
  Scalar c_sum;
  for (std::uint64_t y = 0; y < m; ++y) {
    if (y == real_branch) continue;
    auto& br = p.branches[y];
    const G h = guess_base(static_cast<Guess>(y));
    br.b = h * Scalar::random_nonzero(rng);
    br.c = Scalar::random(rng);
    br.z_alpha = Scalar::random(rng);
    br.z_sk = Scalar::random(rng);
    br.a1 = base(br.z_alpha) - a * br.c;
    br.a2 = h * br.z_alpha - br.b * br.c;
    br.a3 = base(br.z_sk) - pk * br.c;
    br.a4 = br.b * br.z_sk - t_stmt * br.c;
    c_sum += br.c;
  }
  auto& real = p.branches[real_branch];
  const Scalar t_alpha = Scalar::random(rng);
  const Scalar t_sk = Scalar::random(rng);
  real.b = real_base * alpha;
  real.a1 = base(t_alpha);
  real.a2 = real_base * t_alpha;
  real.a3 = base(t_sk);
  real.a4 = real.b * t_sk;
  const Scalar c = fs_challenge(OrTranscript(ctx, pk, a, t_stmt, ell, p));
  real.c = c - c_sum;
  real.z_alpha = t_alpha + real.c * alpha;
  real.z_sk = t_sk + real.c * sk;
  return p;
}

OrProof prove_or(const G& pk, const G& a, const G& t_stmt, unsigned ell, const Scalar& sk, const Scalar& alpha,
                 Guess y, const Transcript& ctx, Rng& rng) {
  if (!guess_in_domain(y, ell)) fail(ErrorCode::kInvalidWitness, "OR witness outside [0, 2^ell)");
  return detail::prove_or_with_base(pk, a, t_stmt, ell, sk, alpha, y, guess_base(y), ctx, rng);
}

bool verify_or(const G& pk, const G& a, const G& t_stmt, unsigned ell, const OrProof& proof, const Transcript& ctx) {
  if (ell > kMaxEll || proof.branches.size() != BranchCount(ell)) return false;
  Scalar c_sum;
  for (const auto& br : proof.branches) c_sum += br.c;
  if (c_sum != fs_challenge(OrTranscript(ctx, pk, a, t_stmt, ell, proof))) return false;
  for (std::size_t y = 0; y < proof.branches.size(); ++y) {
    const auto& br = proof.branches[y];
    if (base(br.z_alpha) != br.a1 + a * br.c) return false;
    if (base(br.z_sk) != br.a3 + pk * br.c) return false;
    const G h = guess_base(static_cast<Guess>(y));
    if (h * br.z_alpha != br.a2 + br.b * br.c) return false;
    if (br.b * br.z_sk != br.a4 + t_stmt * br.c) return false;
  }
  return true;
}

// ---- orWF ----

namespace {

Transcript OrWfTranscript(const Transcript& ctx, const G& pk, const G& u_stmt, const G& v_stmt, unsigned ell,
                          const OrWfProof& p) {
  Transcript t = Start(ctx, "orWF");
  t.absorb("pk", pk);
  t.absorb("U", u_stmt);
  t.absorb("V", v_stmt);
  t.absorb_u64("ell", ell);
  for (const auto& b : p.branches) {
    t.absorb("M", b.m);
    t.absorb("a1", b.a1);
    t.absorb("a2", b.a2);
    t.absorb("a3", b.a3);
    t.absorb("a4", b.a4);
  }
  return t;
}

}  // namespace

OrWfProof detail::prove_orwf_with_base(const G& pk, const G& u_stmt, const G& v_stmt, unsigned ell, const Scalar& sk,
                                       const Scalar& rho, Guess real_branch, const G& real_base,
                                       const Transcript& ctx, Rng& rng) {
  const std::uint64_t m = BranchCount(ell);
  if (real_branch >= m) fail(ErrorCode::kInvalidWitness, "real branch outside the OR domain");
  const G& u = generator_u();
  OrWfProof p;
  p.branches.resize(m);
  Scalar c_sum;
  for (std::uint64_t y = 0; y < m; ++y) {
    if (y == real_branch) continue;
    auto& br = p.branches[y];
    const G h = guess_base(static_cast<Guess>(y));
    br.m = h * Scalar::random_nonzero(rng);
    br.c = Scalar::random(rng);
    br.z_sk = Scalar::random(rng);
    br.z_rho = Scalar::random(rng);
    br.a1 = base(br.z_sk) - pk * br.c;
    br.a2 = h * br.z_sk - br.m * br.c;
    br.a3 = u * br.z_rho - u_stmt * br.c;
    br.a4 = base(br.z_rho) - (v_stmt - br.m) * br.c;
    c_sum += br.c;
  }
  auto& real = p.branches[real_branch];
  const Scalar t_sk = Scalar::random(rng);
  const Scalar t_rho = Scalar::random(rng);
  real.m = real_base * sk;
  real.a1 = base(t_sk);
  real.a2 = real_base * t_sk;
  real.a3 = u * t_rho;
  real.a4 = base(t_rho);
  const Scalar c = fs_challenge(OrWfTranscript(ctx, pk, u_stmt, v_stmt, ell, p));
  real.c = c - c_sum;
  real.z_sk = t_sk + real.c * sk;
  real.z_rho = t_rho + real.c * rho;
  return p;
}

OrWfProof prove_orwf(const G& pk, const G& u_stmt, const G& v_stmt, unsigned ell, const Scalar& sk, const Scalar& rho,
                     Guess y, const Transcript& ctx, Rng& rng) {
  if (!guess_in_domain(y, ell)) fail(ErrorCode::kInvalidWitness, "orWF witness outside [0, 2^ell)");
  return detail::prove_orwf_with_base(pk, u_stmt, v_stmt, ell, sk, rho, y, guess_base(y), ctx, rng);
}

bool verify_orwf(const G& pk, const G& u_stmt, const G& v_stmt, unsigned ell, const OrWfProof& proof,
                 const Transcript& ctx) {
  if (ell > kMaxEll || proof.branches.size() != BranchCount(ell)) return false;
  Scalar c_sum;
  for (const auto& br : proof.branches) c_sum += br.c;
  if (c_sum != fs_challenge(OrWfTranscript(ctx, pk, u_stmt, v_stmt, ell, proof))) return false;
  const G& u = generator_u();
  for (std::size_t y = 0; y < proof.branches.size(); ++y) {
    const auto& br = proof.branches[y];
    if (base(br.z_sk) != br.a1 + pk * br.c) return false;
    if (u * br.z_rho != br.a3 + u_stmt * br.c) return false;
    if (base(br.z_rho) != br.a4 + (v_stmt - br.m) * br.c) return false;
    const G h = guess_base(static_cast<Guess>(y));
    if (h * br.z_sk != br.a2 + br.m * br.c) return false;
  }
  return true;
}

// ---- hiddenbaseWF ----

namespace {

Transcript HiddenTranscript(const Transcript& ctx, const HiddenBaseStatement& st, const HiddenBaseProof& p) {
  Transcript t = Start(ctx, "hiddenbaseWF");
  t.absorb("X", st.x);
  t.absorb("Y", st.y);
  t.absorb("Urho", st.u_rho);
  t.absorb("Ualpha", st.u_alpha);
  t.absorb("Tu", st.t_u);
  t.absorb("Tg", p.t_g);
  t.absorb("a11", p.a11);
  t.absorb("a12", p.a12);
  t.absorb("a21", p.a21);
  t.absorb("a22", p.a22);
  t.absorb("a31", p.a31);
  t.absorb("a32", p.a32);
  return t;
}

}  // namespace

HiddenBaseProof prove_hidden(const HiddenBaseStatement& st, const Scalar& rho, const Scalar& alpha,
                             const Transcript& ctx, Rng& rng) {
  const G& u = generator_u();
  const Scalar delta = rho * alpha;
  const Scalar r1 = Scalar::random(rng);
  const Scalar r2 = Scalar::random(rng);
  const Scalar r3 = Scalar::random(rng);
  HiddenBaseProof p;
  p.t_g = st.x * alpha - st.y;
  p.a11 = u * r1;
  p.a12 = st.u_rho * r1;
  p.a21 = u * r2;
  p.a22 = base(r2);
  p.a31 = u * r3;
  p.a32 = st.x * r3;
  const Scalar c = fs_challenge(HiddenTranscript(ctx, st, p));
  p.z1 = r1 + c * alpha;
  p.z2 = r2 + c * delta;
  p.z3 = r3 + c * alpha;
  return p;
}

bool verify_hidden(const HiddenBaseStatement& st, const HiddenBaseProof& proof, const Transcript& ctx) {
  const G& u = generator_u();
  const Scalar c = fs_challenge(HiddenTranscript(ctx, st, proof));
  return u * proof.z1 == proof.a11 + st.u_alpha * c && st.u_rho * proof.z1 == proof.a12 + st.t_u * c &&
         u * proof.z2 == proof.a21 + st.t_u * c && base(proof.z2) == proof.a22 + proof.t_g * c &&
         u * proof.z3 == proof.a31 + st.u_alpha * c && st.x * proof.z3 == proof.a32 + (st.y + proof.t_g) * c;
}

// ---- cut-and-choose ----

namespace {

Transcript CcCommitTranscript(const Transcript& ctx, ByteView pk_bytes, const G& y_win, unsigned ell,
                              const std::vector<CcCommitment>& commitments) {
  Transcript t = Start(ctx, "cutandchoose");
  t.absorb_u64("ell", ell);
  t.absorb_u64("lambda", commitments.size());
  t.absorb("pk", pk_bytes);
  t.absorb("Ywin", y_win);
  for (const auto& cm : commitments) {
    t.absorb("c", cm.c);
    t.absorb("R", cm.r);
    t.absorb("A", cm.a);
  }
  return t;
}

Transcript CcOpenTranscript(const Transcript& commit_t, const std::vector<CcOpening>& opened) {
  Transcript t = commit_t;
  for (const auto& op : opened) {
    t.absorb_u64("j", op.index);
    t.absorb("r", op.r);
    t.absorb("T", op.t);
  }
  return t;
}

Scalar AggregationWeight(const Transcript& open_t, std::size_t index) {
  return Scalar::from_wide(open_t.digest("cc-weight", index));
}

Transcript Sub(const Transcript& t, std::string_view name) {
  Transcript out = t;
  out.absorb("sub", as_bytes(name));
  return out;
}

Transcript LinkTranscript(const Transcript& open_t, std::size_t index, const CcHiddenLink& link) {
  Transcript t = Sub(open_t, "link");
  t.absorb_u64("j", index);
  t.absorb("Ualpha", link.u_alpha);
  t.absorb("Tu", link.t_u);
  return t;
}

std::vector<std::size_t> Complement(std::size_t n, const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::binary_search(subset.begin(), subset.end(), i)) out.push_back(i);
  }
  return out;
}

CutChooseProof ProveYwinImpl(const OprfKeyPair& kp, Guess y_tgt, Guess real_branch, const Scalar& w_win,
                             const G& y_win, unsigned ell, const Transcript& ctx, Rng& rng, CcMode mode) {
  const std::size_t lambda = kp.alphas.size();
  if (lambda < 2 || lambda % 2 != 0 || kp.a.size() != lambda) {
    fail(ErrorCode::kInvalidParameter, "OPRF key must carry an even number of alphas");
  }
  if (base(w_win) != y_win) fail(ErrorCode::kInvalidWitness, "Y_win is not g^w_win");
  const Bytes pk_bytes = kp.public_bytes();
  const G h = guess_base(y_tgt);
  const G h_sk = h * kp.sk;

  CutChooseProof proof;
  proof.mode = mode;
  std::vector<Scalar> r(lambda);
  std::vector<G> t(lambda);
  proof.commitments.resize(lambda);
  for (std::size_t i = 0; i < lambda; ++i) {
    r[i] = Scalar::random(rng);
    t[i] = h_sk * kp.alphas[i];
    proof.commitments[i] = {oprf_output_hash(pk_bytes, t[i]) + r[i], base(r[i]), kp.a[i]};
  }

  const Transcript commit_t = CcCommitTranscript(ctx, pk_bytes, y_win, ell, proof.commitments);
  const auto opened = fs_subset(commit_t, lambda, lambda / 2);
  for (std::size_t j : opened) proof.opened.push_back({j, r[j], t[j]});
  for (std::size_t k : Complement(lambda, opened)) proof.unopened.push_back({k, kp.alphas[k], r[k] + w_win});

  const Transcript open_t = CcOpenTranscript(commit_t, proof.opened);
  if (mode == CcMode::kPlain) {
    G a_agg;
    G t_agg;
    Scalar alpha_agg;
    for (std::size_t j : opened) {
      const Scalar e = AggregationWeight(open_t, j);
      a_agg += kp.a[j] * e;
      t_agg += t[j] * e;
      alpha_agg += kp.alphas[j] * e;
    }
    proof.aggregate = detail::prove_or_with_base(kp.x, a_agg, t_agg, ell, kp.sk, alpha_agg, real_branch, h,
                                                 Sub(open_t, "aggregate"), rng);
    return proof;
  }

  const G& u = generator_u();
  const Scalar rho = Scalar::random_nonzero(rng);
  proof.u_stmt = u * rho;
  proof.v_stmt = h_sk + base(rho);
  Transcript wf_t = Sub(open_t, "orwf");
  proof.orwf = detail::prove_orwf_with_base(kp.x, proof.u_stmt, proof.v_stmt, ell, kp.sk, rho, real_branch, h,
                                            wf_t, rng);
  for (std::size_t j : opened) {
    CcHiddenLink link;
    link.u_alpha = u * kp.alphas[j];
    link.t_u = proof.u_stmt * kp.alphas[j];
    const Transcript link_t = LinkTranscript(open_t, j, link);
    const HiddenBaseStatement st{proof.v_stmt, t[j], proof.u_stmt, link.u_alpha, link.t_u};
    link.hidden = prove_hidden(st, rho, kp.alphas[j], link_t, rng);
    link.link = prove_dleq(g(), kp.a[j], u, link.u_alpha, kp.alphas[j], link_t, rng);
    proof.links.push_back(link);
  }
  return proof;
}

}  // namespace

CutChooseProof prove_ywin(const OprfKeyPair& kp, Guess y_tgt, const Scalar& w_win, const G& y_win, unsigned ell,
                          const Transcript& ctx, Rng& rng, CcMode mode) {
  if (!guess_in_domain(y_tgt, ell)) fail(ErrorCode::kInvalidWitness, "target outside [0, 2^ell)");
  return ProveYwinImpl(kp, y_tgt, y_tgt, w_win, y_win, ell, ctx, rng, mode);
}

CutChooseProof detail::prove_ywin_unchecked(const OprfKeyPair& kp, Guess y_tgt, const Scalar& w_win, const G& y_win,
                                            unsigned ell, const Transcript& ctx, Rng& rng, CcMode mode) {
  const auto branch = static_cast<Guess>(y_tgt % guess_domain_size(ell));
  return ProveYwinImpl(kp, y_tgt, branch, w_win, y_win, ell, ctx, rng, mode);
}

bool verify_ywin(const OprfPublicKey& pk, const G& y_win, unsigned ell, const CutChooseProof& proof,
                 const Transcript& ctx) {
  try {
    const std::size_t lambda = pk.a.size();
    if (ell > kMaxEll || lambda < 2 || lambda % 2 != 0 || proof.commitments.size() != lambda) return false;
    for (std::size_t i = 0; i < lambda; ++i) {
      if (proof.commitments[i].a != pk.a[i]) return false;
    }
    const Bytes pk_bytes = pk.to_bytes();
    const Transcript commit_t = CcCommitTranscript(ctx, pk_bytes, y_win, ell, proof.commitments);
    const auto opened = fs_subset(commit_t, lambda, lambda / 2);
    const auto unopened = Complement(lambda, opened);
    if (proof.opened.size() != opened.size() || proof.unopened.size() != unopened.size()) return false;

    for (std::size_t n = 0; n < opened.size(); ++n) {
      const auto& op = proof.opened[n];
      if (op.index != opened[n] || op.t.is_identity()) return false;
      const auto& cm = proof.commitments[op.index];
      if (cm.r != base(op.r) || cm.c != oprf_output_hash(pk_bytes, op.t) + op.r) return false;
    }
    for (std::size_t n = 0; n < unopened.size(); ++n) {
      const auto& rv = proof.unopened[n];
      if (rv.index != unopened[n]) return false;
      const auto& cm = proof.commitments[rv.index];
      if (base(rv.s) != y_win + cm.r || base(rv.alpha) != cm.a) return false;
    }

    const Transcript open_t = CcOpenTranscript(commit_t, proof.opened);
    if (proof.mode == CcMode::kPlain) {
      G a_agg;
      G t_agg;
      for (const auto& op : proof.opened) {
        const Scalar e = AggregationWeight(open_t, op.index);
        a_agg += pk.a[op.index] * e;
        t_agg += op.t * e;
      }
      return verify_or(pk.x, a_agg, t_agg, ell, proof.aggregate, Sub(open_t, "aggregate"));
    }
    if (proof.mode != CcMode::kBatched || proof.links.size() != opened.size()) return false;
    if (!verify_orwf(pk.x, proof.u_stmt, proof.v_stmt, ell, proof.orwf, Sub(open_t, "orwf"))) return false;
    for (std::size_t n = 0; n < opened.size(); ++n) {
      const auto& op = proof.opened[n];
      const auto& link = proof.links[n];
      const Transcript link_t = LinkTranscript(open_t, op.index, link);
      const HiddenBaseStatement st{proof.v_stmt, op.t, proof.u_stmt, link.u_alpha, link.t_u};
      if (!verify_hidden(st, link.hidden, link_t)) return false;
      if (!verify_dleq(g(), pk.a[op.index], generator_u(), link.u_alpha, link.link, link_t)) return false;
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<Scalar> witness_candidates(const CutChooseProof& proof, const std::map<std::size_t, Scalar>& finalized) {
  std::vector<Scalar> out;
  for (const auto& rv : proof.unopened) {
    const auto it = finalized.find(rv.index);
    if (it == finalized.end() || rv.index >= proof.commitments.size()) continue;
    out.push_back(rv.s - proof.commitments[rv.index].c + it->second);
  }
  return out;
}

std::optional<Scalar> recover_witness(const CutChooseProof& proof, const std::map<std::size_t, Scalar>& finalized,
                                      const G& y_win) {
  for (const Scalar& w : witness_candidates(proof, finalized)) {
    if (base(w) == y_win) return w;
  }
  return std::nullopt;
}

// ---- serialization ----

Bytes serialize(const DlProof& p) {
  ByteWriter w;
  w.u8(kDlTag);
  Put(w, p.r);
  Put(w, p.z);
  return std::move(w).take();
}

Bytes serialize(const OpenProof& p) {
  ByteWriter w;
  w.u8(kOpenTag);
  Put(w, p.r);
  Put(w, p.z_sk);
  Put(w, p.z_omega);
  return std::move(w).take();
}

Bytes serialize(const EncProof& p) {
  ByteWriter w;
  w.u8(kEncTag);
  Put(w, p.r1);
  Put(w, p.r2);
  Put(w, p.r3);
  Put(w, p.z_sk);
  Put(w, p.z_alpha);
  return std::move(w).take();
}

Bytes serialize(const DleqProof& p) {
  ByteWriter w;
  WriteDleq(w, p);
  return std::move(w).take();
}

Bytes serialize(const OrProof& p) {
  ByteWriter w;
  WriteOr(w, p);
  return std::move(w).take();
}

Bytes serialize(const OrWfProof& p) {
  ByteWriter w;
  WriteOrWf(w, p);
  return std::move(w).take();
}

Bytes serialize(const HiddenBaseProof& p) {
  ByteWriter w;
  WriteHidden(w, p);
  return std::move(w).take();
}

Bytes serialize(const CutChooseProof& p) {
  ByteWriter w;
  w.u8(kCutChooseTag);
  w.u8(static_cast<std::uint8_t>(p.mode));
  w.u32(static_cast<std::uint32_t>(p.commitments.size()));
  for (const auto& cm : p.commitments) {
    Put(w, cm.c);
    Put(w, cm.r);
    Put(w, cm.a);
  }
  w.u32(static_cast<std::uint32_t>(p.opened.size()));
  for (const auto& op : p.opened) {
    w.u32(static_cast<std::uint32_t>(op.index));
    Put(w, op.r);
    Put(w, op.t);
  }
  w.u32(static_cast<std::uint32_t>(p.unopened.size()));
  for (const auto& rv : p.unopened) {
    w.u32(static_cast<std::uint32_t>(rv.index));
    Put(w, rv.alpha);
    Put(w, rv.s);
  }
  if (p.mode == CcMode::kPlain) {
    WriteOr(w, p.aggregate);
  } else {
    Put(w, p.u_stmt);
    Put(w, p.v_stmt);
    WriteOrWf(w, p.orwf);
    w.u32(static_cast<std::uint32_t>(p.links.size()));
    for (const auto& link : p.links) {
      Put(w, link.u_alpha);
      Put(w, link.t_u);
      WriteHidden(w, link.hidden);
      WriteDleq(w, link.link);
    }
  }
  return std::move(w).take();
}

DlProof parse_dl_proof(ByteView data) {
  return ParseWhole<DlProof>(data, [](ByteReader& r) {
    ExpectTag(r, kDlTag);
    DlProof p;
    p.r = GetPoint(r);
    p.z = GetScalar(r);
    return p;
  });
}

OpenProof parse_open_proof(ByteView data) {
  return ParseWhole<OpenProof>(data, [](ByteReader& r) {
    ExpectTag(r, kOpenTag);
    OpenProof p;
    p.r = GetPoint(r);
    p.z_sk = GetScalar(r);
    p.z_omega = GetScalar(r);
    return p;
  });
}

EncProof parse_enc_proof(ByteView data) {
  return ParseWhole<EncProof>(data, [](ByteReader& r) {
    ExpectTag(r, kEncTag);
    EncProof p;
    p.r1 = GetPoint(r);
    p.r2 = GetPoint(r);
    p.r3 = GetPoint(r);
    p.z_sk = GetScalar(r);
    p.z_alpha = GetScalar(r);
    return p;
  });
}

DleqProof parse_dleq_proof(ByteView data) { return ParseWhole<DleqProof>(data, ReadDleq); }
OrProof parse_or_proof(ByteView data) { return ParseWhole<OrProof>(data, ReadOr); }
OrWfProof parse_orwf_proof(ByteView data) { return ParseWhole<OrWfProof>(data, ReadOrWf); }
HiddenBaseProof parse_hidden_proof(ByteView data) { return ParseWhole<HiddenBaseProof>(data, ReadHidden); }

CutChooseProof parse_cut_choose_proof(ByteView data) {
  return ParseWhole<CutChooseProof>(data, [](ByteReader& r) {
    ExpectTag(r, kCutChooseTag);
    CutChooseProof p;
    const std::uint8_t mode = r.u8();
    if (mode > static_cast<std::uint8_t>(CcMode::kBatched)) fail(ErrorCode::kMalformedEncoding, "cut-and-choose mode");
    p.mode = static_cast<CcMode>(mode);
    const std::uint32_t lambda = r.u32();
    if (lambda * std::uint64_t{96} > r.remaining()) fail(ErrorCode::kMalformedEncoding, "commitment count");
    p.commitments.resize(lambda);
    for (auto& cm : p.commitments) {
      cm.c = GetScalar(r);
      cm.r = GetPoint(r);
      cm.a = GetPoint(r);
    }
    const std::uint32_t n_open = r.u32();
    if (n_open > lambda) fail(ErrorCode::kMalformedEncoding, "opening count");
    p.opened.resize(n_open);
    for (auto& op : p.opened) {
      op.index = r.u32();
      op.r = GetScalar(r);
      op.t = GetPoint(r);
    }
    const std::uint32_t n_unopen = r.u32();
    if (n_unopen > lambda) fail(ErrorCode::kMalformedEncoding, "reveal count");
    p.unopened.resize(n_unopen);
    for (auto& rv : p.unopened) {
      rv.index = r.u32();
      rv.alpha = GetScalar(r);
      rv.s = GetScalar(r);
    }
    if (p.mode == CcMode::kPlain) {
      p.aggregate = ReadOr(r);
    } else {
      p.u_stmt = GetPoint(r);
      p.v_stmt = GetPoint(r);
      p.orwf = ReadOrWf(r);
      const std::uint32_t n_links = r.u32();
      if (n_links > lambda) fail(ErrorCode::kMalformedEncoding, "link count");
      p.links.resize(n_links);
      for (auto& link : p.links) {
        link.u_alpha = GetPoint(r);
        link.t_u = GetPoint(r);
        link.hidden = ReadHidden(r);
        link.link = ReadDleq(r);
      }
    }
    return p;
  });
}

}  // namespace proswap
