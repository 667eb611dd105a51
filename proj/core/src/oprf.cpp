#include "proswap/oprf.hpp"

#include <set>

#include "proswap/error.hpp"
#include "proswap/rng.hpp"

namespace proswap {

namespace {

constexpr std::string_view kGuessTag = "proswap/guess";
constexpr std::string_view kOutputDomain = "proswap/H_p";

}  // namespace

std::uint64_t guess_domain_size(unsigned ell) {
  if (ell > kMaxEll) fail(ErrorCode::kInvalidParameter, "ell above supported cap of 16");
  return std::uint64_t{1} << ell;
}

bool guess_in_domain(Guess x, unsigned ell) { return ell <= kMaxEll && x < (std::uint64_t{1} << ell); }

void check_guess(Guess x, unsigned ell) {
  if (!guess_in_domain(x, ell)) {
    fail(ErrorCode::kInvalidGuess, "value " + std::to_string(x) + " outside [0, 2^" + std::to_string(ell) + ")");
  }
}

Bytes encode_guess(Guess x) {
  Bytes out(kGuessTag.begin(), kGuessTag.end());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  return out;
}

GroupElement guess_base(Guess x) { return hash_to_group(encode_guess(x)); }

Scalar oprf_output_hash(ByteView pk_bytes, const GroupElement& point) {
  return hash_to_scalar(kOutputDomain, {pk_bytes, point.to_bytes()});
}

Bytes OprfPublicKey::to_bytes() const {
  ByteWriter w;
  w.raw(x.to_bytes());
  for (const auto& ai : a) w.raw(ai.to_bytes());
  return std::move(w).take();
}

OprfPublicKey OprfPublicKey::from_bytes(ByteView data) {
  if (data.size() < kPointBytes || data.size() % kPointBytes != 0) {
    fail(ErrorCode::kMalformedEncoding, "OPRF public key length");
  }
  ByteReader r(data);
  OprfPublicKey pk;
  pk.x = GroupElement::from_bytes(r.raw(kPointBytes));
  while (!r.done()) pk.a.push_back(GroupElement::from_bytes(r.raw(kPointBytes)));
  return pk;
}

OprfKeyPair oprf_keygen(std::size_t lambda, Rng& rng) {
  if (lambda < 2 || lambda % 2 != 0) fail(ErrorCode::kInvalidParameter, "lambda must be even and at least 2");
  OprfKeyPair kp;
  kp.sk = Scalar::random_nonzero(rng);
  kp.x = GroupElement::base_mul(kp.sk);
  std::set<Scalar> seen;
  while (kp.alphas.size() < lambda) {
    Scalar alpha = Scalar::random_nonzero(rng);
    if (!seen.insert(alpha).second) continue;
    kp.a.push_back(GroupElement::base_mul(alpha));
    kp.alphas.push_back(alpha);
  }
  return kp;
}

std::pair<OprfClientState, OprfRequest> request(Guess x, unsigned ell, Rng& rng) {
  return request_with_blind(x, ell, Scalar::random_nonzero(rng));
}

std::pair<OprfClientState, OprfRequest> request_with_blind(Guess x, unsigned ell, const Scalar& r) {
  check_guess(x, ell);
  if (r.is_zero()) fail(ErrorCode::kInvalidParameter, "blinding factor must be nonzero");
  return {OprfClientState{x, ell, r}, OprfRequest{guess_base(x) * r}};
}

OprfResponse blind_eval(const Scalar& sk, const OprfRequest& req) {
  if (req.req.is_identity()) fail(ErrorCode::kInvalidRequest, "identity request");
  return {req.req * sk};
}

Scalar finalize_with_alpha(ByteView pk_bytes, const OprfClientState& st, const OprfResponse& res,
                           const Scalar& alpha) {
  if (alpha.is_zero()) fail(ErrorCode::kInvalidParameter, "alpha must be nonzero");
  if (st.r.is_zero()) fail(ErrorCode::kInvalidParameter, "blinding factor must be nonzero");
  return oprf_output_hash(pk_bytes, res.res * (alpha * st.r.inverse()));
}

Scalar eval(const Scalar& sk, Guess x, unsigned ell, const Scalar& alpha, ByteView pk_bytes) {
  check_guess(x, ell);
  return oprf_output_hash(pk_bytes, guess_base(x) * (sk * alpha));
}

}  // namespace proswap
