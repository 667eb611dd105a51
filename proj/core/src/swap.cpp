#include "proswap/swap.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <sstream>

#include "proswap/error.hpp"
#include "proswap/twoparty.hpp"

namespace proswap {

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 7> kScenarioNames = {{
    {Scenario::kHonest, "honest"},
    {Scenario::kWithholdSigma, "withhold-sigma"},
    {Scenario::kMalformedYwin, "malformed-ywin"},
    {Scenario::kMalformedCt, "malformed-ct"},
    {Scenario::kCorruptPresignPartial, "corrupt-presign-partial"},
    {Scenario::kPrematureRefund, "premature-refund"},
    {Scenario::kPostTimeoutClaim, "post-timeout-claim"},
}};

constexpr std::string_view kDealer = "dealer";
constexpr std::string_view kParty = "party";

Bytes SessionId(const SetupMsg& setup, std::string_view label) {
  ByteWriter w;
  w.var(as_bytes(label));
  w.raw(setup.y_win.to_bytes());
  w.raw(setup.oprf_pk.to_bytes());
  return std::move(w).take();
}

Transcript EncContext(const SwapParams& params, const GroupElement& pk_tmp, const GroupElement& y_win) {
  Transcript t = setup_context(params);
  t.absorb("phase", as_bytes("claim-dealer"));
  t.absorb("pk_tmp", pk_tmp);
  t.absorb("Ywin", y_win);
  return t;
}

// Spend of the dealer's lock box to the party: nu_D coins.
LedgerTx RewardTx(const SwapParams& params, const Outpoint& dealer_lock) {
  return make_tx({TxInput{dealer_lock, SpendBranch::kKey}}, {TxOutput{params.nu_d, SingleKey{params.pk_p}}});
}

// Spend of the party's lock box to the dealer: one coin.
LedgerTx PaymentTx(const SwapParams& params, const Outpoint& party_lock) {
  return make_tx({TxInput{party_lock, SpendBranch::kKey}}, {TxOutput{1, SingleKey{params.pk_d}}});
}

std::optional<LockBox> FindSpendable(const Ledger& ledger, const GroupElement& pk, Amount value) {
  for (const auto& [id, box] : ledger.boxes()) {
    const auto* sk = std::get_if<SingleKey>(&box.condition);
    if (sk != nullptr && sk->pk == pk && box.value >= value) return box;
  }
  return std::nullopt;
}

// Signs and posts a lock of `value` from `key` under Lambda(pk_tmp, timeout, key).
PostResult PostLock(Ledger& ledger, const SigKeyPair& key, Amount value, const GroupElement& pk_tmp, Height timeout,
                    Rng& rng) {
  const auto src = FindSpendable(ledger, key.pk, value);
  if (!src) return PostResult{RejectReason::kConservation, {}};
  std::vector<TxOutput> outs{TxOutput{value, TimeLocked{pk_tmp, timeout, key.pk}}};
  if (src->value > value) outs.push_back(TxOutput{src->value - value, SingleKey{key.pk}});
  LedgerTx tx = make_tx({TxInput{src->id, SpendBranch::kKey}}, std::move(outs));
  tx.witness.push_back(sign(key, tx.message(), rng));
  return ledger.post(tx);
}

struct PresignRun {
  std::optional<PreSignature> p0_out;
  std::optional<PreSignature> p1_out;
  std::vector<Role> output_order;
};

using Tamper = std::function<void(Role sender, PresignMessage& msg)>;

// Delivers messages between the two sessions until both are done. Aborts
// propagate as kAbortProtocol.
PresignRun PumpPresign(PresignSession& p0, PresignSession& p1, std::vector<PresignMessage> p0_first,
                       const Tamper& tamper) {
  PresignRun run;
  std::deque<std::pair<Role, PresignMessage>> queue;  // (sender, msg)
  for (auto& m : p0_first) queue.emplace_back(Role::kP0, std::move(m));
  while (!queue.empty()) {
    auto [sender, msg] = std::move(queue.front());
    queue.pop_front();
    if (tamper) tamper(sender, msg);
    PresignSession& receiver = sender == Role::kP0 ? p1 : p0;
    PresignStep st = receiver.step(msg);
    if (st.output) {
      (receiver.role() == Role::kP0 ? run.p0_out : run.p1_out) = st.output;
      run.output_order.push_back(receiver.role());
    }
    for (auto& out : st.outgoing) queue.emplace_back(receiver.role(), std::move(out));
  }
  if (!run.p0_out || !run.p1_out) fail(ErrorCode::kAbortProtocol, "pre-signing ended without output");
  return run;
}

bool BoxLive(Ledger& ledger, const std::optional<Outpoint>& id) { return id && ledger.box(*id).has_value(); }

}  // namespace

// ---- small types ----

void SwapParams::validate() const {
  if (ell > kMaxEll) fail(ErrorCode::kInvalidParameter, "ell above supported cap of 16");
  if (lambda < 2 || lambda % 2 != 0) fail(ErrorCode::kInvalidParameter, "lambda must be even and at least 2");
  if (nu_d <= 0) fail(ErrorCode::kInvalidParameter, "nu must be positive");
  if (t_d <= t_p) fail(ErrorCode::kInvalidParameter, "T_D must exceed T_P");
  if (t_p < 2) fail(ErrorCode::kInvalidParameter, "T_P must leave room for funding and the dealer's claim");
}

std::string_view to_string(Scenario s) {
  for (const auto& [sc, name] : kScenarioNames) {
    if (sc == s) return name;
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (const auto& [sc, n] : kScenarioNames) {
    if (n == name) return sc;
  }
  fail(ErrorCode::kInvalidParameter, "unknown scenario '" + std::string(name) + "'");
}

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> all = [] {
    std::vector<Scenario> v;
    for (const auto& [sc, n] : kScenarioNames) v.push_back(sc);
    return v;
  }();
  return all;
}

std::string_view to_string(DealerState::Phase p) {
  switch (p) {
    case DealerState::Phase::kSetup: return "Setup";
    case DealerState::Phase::kFunded: return "Funded";
    case DealerState::Phase::kServed: return "Served";
    case DealerState::Phase::kClaimed: return "Claimed";
    case DealerState::Phase::kRefunded: return "Refunded";
    case DealerState::Phase::kDone: return "Done";
    case DealerState::Phase::kAborted: return "Aborted";
  }
  return "unknown";
}

std::string_view to_string(PartyState::Phase p) {
  switch (p) {
    case PartyState::Phase::kAwaitSetup: return "AwaitSetup";
    case PartyState::Phase::kFunded: return "Funded";
    case PartyState::Phase::kGuessed: return "Guessed";
    case PartyState::Phase::kDecided: return "Decided";
    case PartyState::Phase::kWon: return "Won";
    case PartyState::Phase::kLost: return "Lost";
    case PartyState::Phase::kRefunded: return "Refunded";
    case PartyState::Phase::kAborted: return "Aborted";
  }
  return "unknown";
}

void SwapHistory::add(Height height, std::string actor, std::string name, std::string detail) {
  events_.push_back({height, std::move(actor), std::move(name), std::move(detail)});
}

std::optional<std::size_t> SwapHistory::find(std::string_view name) const {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i].name == name) return i;
  }
  return std::nullopt;
}

void Chains::tick(Height delta) {
  dealer_->tick(delta);
  if (cross_chain()) party_->tick(delta);
}

void Chains::advance_to(Height target) {
  if (height() < target) tick(target - height());
}

// ---- setup ----

Transcript setup_context(const SwapParams& params) {
  Transcript t("proswap/swap");
  t.absorb("pk_D", params.pk_d);
  t.absorb("pk_P", params.pk_p);
  t.absorb_u64("nu_D", static_cast<std::uint64_t>(params.nu_d));
  t.absorb_u64("ell", params.ell);
  t.absorb_u64("lambda", params.lambda);
  t.absorb_u64("T_D", params.t_d);
  t.absorb_u64("T_P", params.t_p);
  return t;
}

std::pair<DealerState, SetupMsg> dealer_setup(const SwapParams& params, const SigKeyPair& dealer_key, Rng rng,
                                              std::optional<Guess> forced_target) {
  params.validate();
  DealerState d;
  d.params = params;
  d.ledger_key = dealer_key;
  d.rng = std::move(rng);
  d.oprf_kp = oprf_keygen(params.lambda, d.rng);
  d.y_tgt = forced_target ? *forced_target : static_cast<Guess>(d.rng.uniform(guess_domain_size(params.ell)));
  d.w_win = Scalar::random_nonzero(d.rng);
  d.y_win = GroupElement::base_mul(d.w_win);
  d.cc_proof = prove_ywin(d.oprf_kp, d.y_tgt, d.w_win, d.y_win, params.ell, setup_context(params), d.rng,
                          params.cc_mode);
  SetupMsg msg{params.ell, params.lambda, d.oprf_kp.public_key(), d.y_win, d.cc_proof};
  return {std::move(d), std::move(msg)};
}

PartyState party_init(const SwapParams& params, const SigKeyPair& party_key, Rng rng) {
  params.validate();
  PartyState p;
  p.params = params;
  p.ledger_key = party_key;
  p.rng = std::move(rng);
  return p;
}

bool party_check_setup(PartyState& party, const SetupMsg& msg) {
  const auto& params = party.params;
  const bool ok = party.phase == PartyState::Phase::kAwaitSetup && msg.ell == params.ell &&
                  msg.lambda == params.lambda && msg.oprf_pk.a.size() == params.lambda &&
                  verify_ywin(msg.oprf_pk, msg.y_win, params.ell, msg.cc_proof, setup_context(params));
  if (!ok) {
    party.phase = PartyState::Phase::kAborted;
    return false;
  }
  party.setup = msg;
  return true;
}

// ---- funding ----

void run_funding(DealerState& dealer, PartyState& party, Chains& chains, SwapHistory& history, Scenario) {
  if (dealer.phase != DealerState::Phase::kSetup || !party.setup) {
    fail(ErrorCode::kProtocolState, "funding requires an accepted setup");
  }
  const Bytes sid = SessionId(*party.setup, "funding");
  auto [d_dkg, d_first] = DkgSession::start(Role::kP0, sid, dealer.rng);
  auto [p_dkg, p_first] = DkgSession::start(Role::kP1, sid, party.rng);
  if (!d_first || p_first) fail(ErrorCode::kInvariantViolation, "unexpected key generation opening");
  DkgOutput d_out;
  DkgOutput p_out;
  try {
    const DkgStep p1 = p_dkg.step(*d_first);
    const DkgStep d1 = d_dkg.step(*p1.outgoing);
    const DkgStep p2 = p_dkg.step(*d1.outgoing);
    d_out = *d1.output;
    p_out = *p2.output;
  } catch (const Error& e) {
    dealer.phase = DealerState::Phase::kAborted;
    party.phase = PartyState::Phase::kAborted;
    history.add(chains.height(), "both", "dkg_aborted", e.what());
    throw;
  }
  dealer.sk_tmp = d_out.sk_share;
  dealer.pk_tmp = d_out.joint_pk;
  party.sk_tmp = p_out.sk_share;
  party.pk_tmp = p_out.joint_pk;
  history.add(chains.height(), "both", "pk_tmp_agreed", to_hex(dealer.pk_tmp.to_bytes()));

  const auto& params = dealer.params;
  const PostResult d_post = PostLock(chains.dealer_chain(), dealer.ledger_key, params.nu_d, dealer.pk_tmp,
                                     params.t_d, dealer.rng);
  if (!d_post.accepted()) {
    dealer.phase = DealerState::Phase::kAborted;
    party.phase = PartyState::Phase::kAborted;
    history.add(chains.height(), std::string(kDealer), "funding_rejected", std::string(to_string(*d_post.rejected)));
    fail(ErrorCode::kAbortProtocol, "dealer funding rejected: " + std::string(to_string(*d_post.rejected)));
  }
  dealer.own_lock = Outpoint{d_post.txid, 0};
  history.add(chains.height(), std::string(kDealer), "dealer_funded", to_hex(d_post.txid));

  const PostResult p_post =
      PostLock(chains.party_chain(), party.ledger_key, 1, party.pk_tmp, params.t_p, party.rng);
  if (!p_post.accepted()) {
    party.phase = PartyState::Phase::kAborted;
    history.add(chains.height(), std::string(kParty), "funding_rejected", std::string(to_string(*p_post.rejected)));
    fail(ErrorCode::kAbortProtocol, "party funding rejected: " + std::string(to_string(*p_post.rejected)));
  }
  party.own_lock = Outpoint{p_post.txid, 0};
  history.add(chains.height(), std::string(kParty), "party_funded", to_hex(p_post.txid));

  dealer.party_lock = party.own_lock;
  party.dealer_lock = dealer.own_lock;
  dealer.phase = DealerState::Phase::kFunded;
  party.phase = PartyState::Phase::kFunded;
}

// ---- claim dealer ----

bool claim_dealer(DealerState& dealer, PartyState& party, Chains& chains, SwapHistory& history, Scenario scenario,
                  std::optional<Guess> forced_guess) {
  if (dealer.phase != DealerState::Phase::kFunded || party.phase != PartyState::Phase::kFunded) {
    fail(ErrorCode::kProtocolState, "claim requires completed funding");
  }
  const auto& params = party.params;
  if (chains.height() >= params.t_p) {
    history.add(chains.height(), std::string(kParty), "claim_refused", "height at or past T_P");
    fail(ErrorCode::kAbortProtocol, "party refuses to pre-sign at or after T_P");
  }

  if (scenario == Scenario::kPrematureRefund) {
    const PostResult early = refund(Owner::kParty, dealer, party, chains, history);
    if (early.accepted()) fail(ErrorCode::kInvariantViolation, "fallback spend accepted before T_P");
    history.add(chains.height(), std::string(kParty), "party_stalls");
    return false;
  }

  // Party: OPRF request on its guess.
  party.y_gss =
      forced_guess ? *forced_guess : static_cast<Guess>(party.rng.uniform(guess_domain_size(params.ell)));
  auto [client_state, req] = request(party.y_gss, params.ell, party.rng);
  party.oprf_state = client_state;
  party.phase = PartyState::Phase::kGuessed;
  history.add(chains.height(), std::string(kParty), "oprf_request");

  // Dealer: evaluate, encrypt under a fresh statement key, prove.
  const OprfResponse res = blind_eval(dealer.oprf_kp.sk, req);
  dealer.enc = eg_keygen(dealer.rng);
  auto [ct, alpha] = eg_enc(dealer.enc.pub, res.res, dealer.rng);
  EncMsg enc_msg{dealer.enc.pub, ct,
                 prove_enc(dealer.oprf_kp.x, dealer.enc.pub, req.req, ct, dealer.oprf_kp.sk, alpha,
                           EncContext(params, dealer.pk_tmp, dealer.y_win), dealer.rng)};
  dealer.phase = DealerState::Phase::kServed;
  if (scenario == Scenario::kMalformedCt) enc_msg.ct.c2 = enc_msg.ct.c2 + GroupElement::generator();
  history.add(chains.height(), std::string(kDealer), "encrypted_response");

  if (!verify_enc(party.setup->oprf_pk.x, enc_msg.enc_key, req.req, enc_msg.ct, enc_msg.proof,
                  EncContext(params, party.pk_tmp, party.setup->y_win))) {
    party.phase = PartyState::Phase::kAborted;
    history.add(chains.height(), std::string(kParty), "enc_proof_rejected");
    fail(ErrorCode::kAbortProtocol, "encryption proof rejected");
  }
  party.enc = enc_msg;

  const LedgerTx tx_dp = RewardTx(params, *party.dealer_lock);
  const LedgerTx tx_pd = PaymentTx(params, *party.own_lock);

  // Session DP: statement Y_win, dealer is P1 and sees the output first.
  {
    const Bytes sid = SessionId(*party.setup, "presign-dp");
    auto [d_sess, d_first] = PresignSession::start(Role::kP1, dealer.sk_tmp, dealer.pk_tmp, tx_dp.message(),
                                                   dealer.y_win, sid, dealer.rng);
    auto [p_sess, p_first] = PresignSession::start(Role::kP0, party.sk_tmp, party.pk_tmp, tx_dp.message(),
                                                   party.setup->y_win, sid, party.rng);
    Tamper tamper;
    if (scenario == Scenario::kCorruptPresignPartial) {
      tamper = [](Role sender, PresignMessage& m) {
        if (auto* ps = std::get_if<PartialSig>(&m); ps != nullptr && sender == Role::kP1) ps->s += Scalar::one();
      };
    }
    try {
      const PresignRun run = PumpPresign(p_sess, d_sess, std::move(p_first), tamper);
      dealer.presig_dp = run.p1_out;
      party.presig_dp = run.p0_out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAbortProtocol) throw;
      party.phase = PartyState::Phase::kAborted;
      history.add(chains.height(), std::string(kParty), "presign_dp_aborted", e.what());
      throw;
    }
    history.add(chains.height(), "both", "presig_dp_done");
  }

  // Session PD: statement Z, party is P1 and sees the output first.
  {
    const Bytes sid = SessionId(*party.setup, "presign-pd");
    auto [d_sess, d_first] = PresignSession::start(Role::kP0, dealer.sk_tmp, dealer.pk_tmp, tx_pd.message(),
                                                   dealer.enc.pub, sid, dealer.rng);
    auto [p_sess, p_first] = PresignSession::start(Role::kP1, party.sk_tmp, party.pk_tmp, tx_pd.message(),
                                                   party.enc->enc_key, sid, party.rng);
    try {
      const PresignRun run = PumpPresign(d_sess, p_sess, std::move(d_first), nullptr);
      dealer.presig_pd = run.p0_out;
      party.presig_pd = run.p1_out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAbortProtocol) throw;
      party.phase = PartyState::Phase::kAborted;
      history.add(chains.height(), std::string(kParty), "presign_pd_aborted", e.what());
      throw;
    }
    history.add(chains.height(), "both", "presig_pd_done");
  }
  party.phase = PartyState::Phase::kDecided;

  if (scenario == Scenario::kWithholdSigma) {
    history.add(chains.height(), std::string(kDealer), "dealer_withholds");
    return false;
  }
  if (scenario == Scenario::kPostTimeoutClaim) {
    history.add(chains.height(), std::string(kDealer), "dealer_stalls");
    return false;
  }
  if (chains.height() >= params.t_p) fail(ErrorCode::kAbortProtocol, "dealer claim window closed");

  LedgerTx claim = tx_pd;
  const Signature sig = adapt(*dealer.presig_pd, dealer.enc.secret);
  if (!vrfy(dealer.pk_tmp, claim.message(), sig)) fail(ErrorCode::kInvariantViolation, "adapted claim invalid");
  claim.witness.push_back(sig);
  const PostResult posted = chains.party_chain().post(claim);
  if (!posted.accepted()) {
    fail(ErrorCode::kInvariantViolation,
         "dealer claim rejected by ledger: " + std::string(to_string(*posted.rejected)));
  }
  dealer.phase = DealerState::Phase::kClaimed;
  history.add(chains.height(), std::string(kDealer), "sigma_pd_posted", to_hex(posted.txid));
  return true;
}

// ---- claim party ----

bool claim_party(PartyState& party, Chains& chains, SwapHistory& history) {
  if (party.phase != PartyState::Phase::kDecided) fail(ErrorCode::kProtocolState, "party has no pre-signatures");
  const auto& params = party.params;
  if (chains.height() >= params.t_d) return false;

  const Txid pd_id = PaymentTx(params, *party.own_lock).txid();
  const auto& log = chains.party_chain().read();
  const auto it = std::find_if(log.begin(), log.end(), [&](const LedgerEntry& e) { return e.txid == pd_id; });
  if (it == log.end() || it->tx.witness.empty()) return false;
  history.add(chains.height(), std::string(kParty), "sigma_pd_read", to_hex(pd_id));

  const Scalar z = extract(*party.presig_pd, it->tx.witness[0]);
  if (GroupElement::base_mul(z) != party.enc->enc_key) {
    fail(ErrorCode::kExtractionMismatch, "extracted key does not match Z");
  }
  history.add(chains.height(), std::string(kParty), "z_extracted");

  const OprfResponse res{eg_dec(z, party.enc->ct)};
  const Bytes pk_bytes = party.setup->oprf_pk.to_bytes();
  std::map<std::size_t, Scalar> finalized;
  for (const auto& rv : party.setup->cc_proof.unopened) {
    finalized[rv.index] = finalize_with_alpha(pk_bytes, party.oprf_state, res, rv.alpha);
  }
  const auto candidates = witness_candidates(party.setup->cc_proof, finalized);
  party.candidate_count = candidates.size();
  party.candidates_agree =
      !candidates.empty() && std::all_of(candidates.begin(), candidates.end(),
                                         [&](const Scalar& w) { return w == candidates.front(); });
  party.recovered_w = recover_witness(party.setup->cc_proof, finalized, party.setup->y_win);
  if (!party.recovered_w) {
    party.phase = PartyState::Phase::kLost;
    history.add(chains.height(), std::string(kParty), "guess_lost");
    return false;
  }

  LedgerTx reward = RewardTx(params, *party.dealer_lock);
  const Signature sig = adapt(*party.presig_dp, *party.recovered_w);
  if (!vrfy(party.pk_tmp, reward.message(), sig)) fail(ErrorCode::kInvariantViolation, "adapted reward invalid");
  reward.witness.push_back(sig);
  const PostResult posted = chains.dealer_chain().post(reward);
  if (!posted.accepted()) {
    fail(ErrorCode::kInvariantViolation,
         "reward rejected by ledger: " + std::string(to_string(*posted.rejected)));
  }
  party.phase = PartyState::Phase::kWon;
  history.add(chains.height(), std::string(kParty), "sigma_dp_posted", to_hex(posted.txid));
  return true;
}

// ---- refunds ----

PostResult refund(Owner owner, const DealerState& dealer, const PartyState& party, Chains& chains,
                  SwapHistory& history) {
  const bool is_dealer = owner == Owner::kDealer;
  const auto& lock = is_dealer ? dealer.own_lock : party.own_lock;
  const SigKeyPair& key = is_dealer ? dealer.ledger_key : party.ledger_key;
  Ledger& ledger = is_dealer ? chains.dealer_chain() : chains.party_chain();
  const std::string actor(is_dealer ? kDealer : kParty);
  if (!lock) fail(ErrorCode::kProtocolState, "nothing was locked");

  const Amount value = is_dealer ? dealer.params.nu_d : 1;
  LedgerTx tx = make_tx({TxInput{*lock, SpendBranch::kFallback}}, {TxOutput{value, SingleKey{key.pk}}});
  Rng rng = (is_dealer ? dealer.rng : party.rng).fork("refund-" + std::to_string(chains.height()));
  tx.witness.push_back(sign(key, tx.message(), rng));
  const PostResult res = ledger.post(tx);
  if (res.accepted()) {
    history.add(chains.height(), actor, "refund_accepted", to_hex(res.txid));
  } else {
    history.add(chains.height(), actor, "refund_rejected", std::string(to_string(*res.rejected)));
  }
  return res;
}

// ---- end-to-end ----

Amount SwapOutcome::initial_balance(Owner owner) const {
  Amount sum = 0;
  for (const auto& row : balances) {
    if (row.owner == (owner == Owner::kDealer ? kDealer : kParty)) sum += row.initial;
  }
  return sum;
}

Amount SwapOutcome::final_balance(Owner owner) const {
  Amount sum = 0;
  for (const auto& row : balances) {
    if (row.owner == (owner == Owner::kDealer ? kDealer : kParty)) sum += row.final;
  }
  return sum;
}

SwapOutcome run_swap(const SwapConfig& cfg) {
  Rng root = Rng::from_seed(cfg.seed);
  Rng dealer_key_rng = root.fork("dealer-key");
  Rng party_key_rng = root.fork("party-key");
  const SigKeyPair dealer_key = keygen(dealer_key_rng);
  const SigKeyPair party_key = keygen(party_key_rng);

  SwapParams params;
  params.nu_d = cfg.nu_d;
  params.ell = cfg.ell;
  params.lambda = cfg.lambda;
  params.pk_d = dealer_key.pk;
  params.pk_p = party_key.pk;
  params.t_d = cfg.t_d;
  params.t_p = cfg.t_p;
  params.cc_mode = cfg.cc_mode;
  params.validate();

  SwapOutcome out;
  out.seed = cfg.seed;
  out.scenario = cfg.scenario;
  out.cross_chain = cfg.cross_chain;
  out.ell = cfg.ell;
  out.lambda = cfg.lambda;

  std::vector<Ledger> ledgers;
  if (cfg.cross_chain) {
    ledgers.push_back(Ledger::genesis({{dealer_key.pk, cfg.nu_d}}));
    ledgers.push_back(Ledger::genesis({{party_key.pk, 1}}));
  } else {
    ledgers.push_back(Ledger::genesis({{dealer_key.pk, cfg.nu_d}, {party_key.pk, 1}}));
  }
  std::vector<Amount> genesis_totals;
  for (const auto& l : ledgers) genesis_totals.push_back(l.total());
  Chains chains = cfg.cross_chain ? Chains(ledgers[0], ledgers[1]) : Chains(ledgers[0]);

  const std::vector<std::string> chain_names =
      cfg.cross_chain ? std::vector<std::string>{"A", "B"} : std::vector<std::string>{"main"};
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    for (const auto& [owner, pk] :
         {std::pair<std::string_view, GroupElement>{kDealer, dealer_key.pk}, {kParty, party_key.pk}}) {
      out.balances.push_back({chain_names[i], std::string(owner), pk, ledgers[i].balance(pk), 0});
    }
  }

  SwapHistory& history = out.history;
  DealerState dealer;
  PartyState party = party_init(params, party_key, root.fork("party"));
  try {
    auto [d, msg] = dealer_setup(params, dealer_key, root.fork("dealer"), cfg.forced_target);
    dealer = std::move(d);
    out.y_tgt = dealer.y_tgt;
    out.y_win = dealer.y_win;
    history.add(chains.height(), std::string(kDealer), "setup_sent");
    if (cfg.scenario == Scenario::kMalformedYwin && !msg.cc_proof.unopened.empty()) {
      msg.cc_proof.unopened.front().s += Scalar::one();
    }
    out.setup_accepted = party_check_setup(party, msg);
    if (!out.setup_accepted) {
      history.add(chains.height(), std::string(kParty), "setup_rejected");
      fail(ErrorCode::kAbortProtocol, "Y_win proof rejected");
    }
    history.add(chains.height(), std::string(kParty), "setup_accepted");

    run_funding(dealer, party, chains, history, cfg.scenario);
    out.funded = true;
    chains.tick(1);

    out.dealer_paid = claim_dealer(dealer, party, chains, history, cfg.scenario, cfg.forced_guess);
    out.y_gss = party.y_gss;
    if (out.dealer_paid) {
      chains.tick(1);
      out.party_won = claim_party(party, chains, history);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvariantViolation || e.code() == ErrorCode::kExtractionMismatch) throw;
    out.aborted = true;
    out.abort_reason = e.what();
    out.y_gss = party.y_gss;
    history.add(chains.height(), "both", "aborted", e.what());
  }

  // Timeout phase.
  if (BoxLive(chains.party_chain(), party.own_lock)) {
    chains.advance_to(params.t_p);
    if (!refund(Owner::kParty, dealer, party, chains, history).accepted()) {
      fail(ErrorCode::kInvariantViolation, "party refund rejected at T_P");
    }
    party.phase = PartyState::Phase::kRefunded;
    if (cfg.scenario == Scenario::kPostTimeoutClaim && dealer.presig_pd) {
      LedgerTx late = PaymentTx(params, *dealer.party_lock);
      late.witness.push_back(adapt(*dealer.presig_pd, dealer.enc.secret));
      const PostResult res = chains.party_chain().post(late);
      if (res.accepted()) fail(ErrorCode::kInvariantViolation, "late dealer claim accepted after refund");
      history.add(chains.height(), std::string(kDealer), "late_claim_rejected", std::string(to_string(*res.rejected)));
    }
  }
  if (BoxLive(chains.dealer_chain(), dealer.own_lock)) {
    chains.advance_to(params.t_d);
    if (!refund(Owner::kDealer, dealer, party, chains, history).accepted()) {
      fail(ErrorCode::kInvariantViolation, "dealer refund rejected at T_D");
    }
    dealer.phase = DealerState::Phase::kRefunded;
  } else if (dealer.phase == DealerState::Phase::kClaimed) {
    dealer.phase = DealerState::Phase::kDone;
  }

  out.candidate_count = party.candidate_count;
  out.candidates_agree = party.candidates_agree;
  out.recovered_w = party.recovered_w;
  out.conserved = true;
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    if (ledgers[i].total() != genesis_totals[i]) out.conserved = false;
    for (const auto& e : ledgers[i].read()) out.posted.push_back(e.txid);
  }
  for (auto& row : out.balances) {
    const std::size_t i = row.chain == "B" ? 1 : 0;
    row.final = ledgers[i].balance(row.pk);
  }
  if (!out.conserved) fail(ErrorCode::kInvariantViolation, "ledger total changed during the swap");
  if (out.party_won && !out.dealer_paid) fail(ErrorCode::kInvariantViolation, "party paid without dealer claim");
  if (cfg.scenario == Scenario::kHonest && out.dealer_paid && out.party_won != (out.y_gss == out.y_tgt)) {
    fail(ErrorCode::kInvariantViolation, "win bit disagrees with guess and target");
  }
  out.ledgers = std::move(ledgers);
  return out;
}

std::string export_outcome(const SwapOutcome& o) {
  std::ostringstream os;
  os << "seed=" << o.seed << '\n'
     << "scenario=" << to_string(o.scenario) << '\n'
     << "cross_chain=" << (o.cross_chain ? 1 : 0) << '\n'
     << "ell=" << o.ell << '\n'
     << "lambda=" << o.lambda << '\n'
     << "setup_accepted=" << o.setup_accepted << '\n'
     << "funded=" << o.funded << '\n'
     << "dealer_paid=" << o.dealer_paid << '\n'
     << "party_won=" << o.party_won << '\n'
     << "aborted=" << o.aborted << '\n';
  if (o.aborted) os << "abort_reason=" << o.abort_reason << '\n';
  os << "y_tgt=" << o.y_tgt << '\n' << "y_gss=" << o.y_gss << '\n';
  for (const auto& row : o.balances) {
    os << "balance." << row.chain << '.' << row.owner << ".initial=" << row.initial << '\n';
    os << "balance." << row.chain << '.' << row.owner << ".final=" << row.final << '\n';
  }
  for (std::size_t i = 0; i < o.posted.size(); ++i) os << "tx." << i << '=' << to_hex(o.posted[i]) << '\n';
  const auto& ev = o.history.events();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    os << "event." << i << '=' << ev[i].height << ' ' << ev[i].actor << ' ' << ev[i].name;
    if (!ev[i].detail.empty()) os << ' ' << ev[i].detail;
    os << '\n';
  }
  os << "conserved=" << o.conserved << '\n';
  return os.str();
}

bool scenario_safe(const SwapOutcome& o) {
  if (!o.conserved) return false;
  if (o.party_won && !o.dealer_paid) return false;
  if (o.scenario == Scenario::kHonest) {
    return o.dealer_paid && !o.aborted && o.party_won == (o.y_gss == o.y_tgt);
  }
  // Every scripted deviation ends before any payment: both sides keep their coins.
  return !o.dealer_paid && !o.party_won && o.final_balance(Owner::kDealer) == o.initial_balance(Owner::kDealer) &&
         o.final_balance(Owner::kParty) == o.initial_balance(Owner::kParty);
}

}  // namespace proswap
