#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proswap/adaptor.hpp"
#include "proswap/encryption.hpp"
#include "proswap/ledger.hpp"
#include "proswap/oprf.hpp"
#include "proswap/proofs.hpp"
#include "proswap/rng.hpp"

namespace proswap {

struct SwapParams {
  Amount nu_d = 1;
  unsigned ell = 1;
  std::size_t lambda = 16;
  GroupElement pk_d;
  GroupElement pk_p;
  Height t_d = 20;
  Height t_p = 10;
  CcMode cc_mode = CcMode::kPlain;

  /// Throws kInvalidParameter. ell = 0 (certain win) is accepted.
  void validate() const;
};

/// Scripted deviations. Every scenario except kPrematureRefund is a
/// misbehaving dealer; kPrematureRefund is a misbehaving party.
enum class Scenario {
  kHonest,
  kWithholdSigma,
  kMalformedYwin,
  kMalformedCt,
  kCorruptPresignPartial,
  kPrematureRefund,
  kPostTimeoutClaim,
};

std::string_view to_string(Scenario s);
/// Throws kInvalidParameter for an unknown name.
Scenario parse_scenario(std::string_view name);
const std::vector<Scenario>& all_scenarios();

struct SwapEvent {
  Height height = 0;
  std::string actor;
  std::string name;
  std::string detail;
};

class SwapHistory {
 public:
  void add(Height height, std::string actor, std::string name, std::string detail = {});
  const std::vector<SwapEvent>& events() const { return events_; }
  /// Index of the first event with this name, if any.
  std::optional<std::size_t> find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

 private:
  std::vector<SwapEvent> events_;
};

/// One ledger (same-chain) or two (dealer's coins on the first, party's on
/// the second). The clock of both advances together.
class Chains {
 public:
  explicit Chains(Ledger& single) : dealer_(&single), party_(&single) {}
  Chains(Ledger& dealer_chain, Ledger& party_chain) : dealer_(&dealer_chain), party_(&party_chain) {}

  Ledger& dealer_chain() { return *dealer_; }
  Ledger& party_chain() { return *party_; }
  bool cross_chain() const { return dealer_ != party_; }
  Height height() const { return dealer_->height(); }
  void tick(Height delta);
  void advance_to(Height target);

 private:
  Ledger* dealer_;
  Ledger* party_;
};

// ---- messages ----

struct SetupMsg {
  unsigned ell = 0;
  std::size_t lambda = 0;
  OprfPublicKey oprf_pk;
  GroupElement y_win;
  CutChooseProof cc_proof;
};

struct EncMsg {
  GroupElement enc_key;
  ElGamalCiphertext ct;
  EncProof proof;
};

// ---- state machines ----

struct DealerState {
  enum class Phase { kSetup, kFunded, kServed, kClaimed, kRefunded, kDone, kAborted };

  SwapParams params;
  SigKeyPair ledger_key;
  Phase phase = Phase::kSetup;
  OprfKeyPair oprf_kp;
  Guess y_tgt = 0;
  Scalar w_win;
  GroupElement y_win;
  CutChooseProof cc_proof;
  Scalar sk_tmp;
  GroupElement pk_tmp;
  EgKeyPair enc;
  std::optional<PreSignature> presig_dp;
  std::optional<PreSignature> presig_pd;
  std::optional<Outpoint> own_lock;
  std::optional<Outpoint> party_lock;
  Rng rng = Rng::from_seed(0);
};

struct PartyState {
  enum class Phase { kAwaitSetup, kFunded, kGuessed, kDecided, kWon, kLost, kRefunded, kAborted };

  SwapParams params;
  SigKeyPair ledger_key;
  Phase phase = Phase::kAwaitSetup;
  Guess y_gss = 0;
  OprfClientState oprf_state;
  Scalar sk_tmp;
  GroupElement pk_tmp;
  std::optional<SetupMsg> setup;
  std::optional<EncMsg> enc;
  std::optional<PreSignature> presig_dp;
  std::optional<PreSignature> presig_pd;
  std::optional<Outpoint> own_lock;
  std::optional<Outpoint> dealer_lock;
  std::optional<Scalar> recovered_w;
  std::size_t candidate_count = 0;
  bool candidates_agree = false;
  Rng rng = Rng::from_seed(0);
};

std::string_view to_string(DealerState::Phase p);
std::string_view to_string(PartyState::Phase p);

/// Transcript context for the Y_win proof, bound to both ledger keys.
Transcript setup_context(const SwapParams& params);

/// Samples y_tgt and w_win, proves well-formedness of Y_win. A forced target
/// outside the domain throws kInvalidWitness.
std::pair<DealerState, SetupMsg> dealer_setup(const SwapParams& params, const SigKeyPair& dealer_key, Rng rng,
                                              std::optional<Guess> forced_target = std::nullopt);

PartyState party_init(const SwapParams& params, const SigKeyPair& party_key, Rng rng);

/// Accepts iff ell/lambda echo the parameters and the Y_win proof verifies.
bool party_check_setup(PartyState& party, const SetupMsg& msg);

/// Joint key generation for pk_tmp followed by both locking transactions.
/// Throws kAbortProtocol before anything is posted when key generation fails.
void run_funding(DealerState& dealer, PartyState& party, Chains& chains, SwapHistory& history,
                 Scenario scenario = Scenario::kHonest);

/// The OPRF exchange, both pre-signing sessions and the dealer's claim.
/// Returns true when the dealer's claim was accepted. Throws kAbortProtocol
/// when a check fails before the claim.
bool claim_dealer(DealerState& dealer, PartyState& party, Chains& chains, SwapHistory& history,
                  Scenario scenario = Scenario::kHonest, std::optional<Guess> forced_guess = std::nullopt);

/// Reads the dealer's claim from the ledger, recovers the witness and posts
/// the reward if the guess matched. Returns true on a win.
bool claim_party(PartyState& party, Chains& chains, SwapHistory& history);

enum class Owner { kDealer, kParty };

/// Fallback-branch spend of the owner's lock box back to its key.
PostResult refund(Owner owner, const DealerState& dealer, const PartyState& party, Chains& chains,
                  SwapHistory& history);

// ---- end-to-end ----

struct SwapConfig {
  unsigned ell = 1;
  std::size_t lambda = 16;
  Amount nu_d = 1;
  Height t_p = 10;
  Height t_d = 20;
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::kHonest;
  bool cross_chain = false;
  CcMode cc_mode = CcMode::kPlain;
  std::optional<Guess> forced_target;
  std::optional<Guess> forced_guess;
};

struct BalanceRow {
  std::string chain;
  std::string owner;
  GroupElement pk;
  Amount initial = 0;
  Amount final = 0;
};

struct SwapOutcome {
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::kHonest;
  bool cross_chain = false;
  unsigned ell = 0;
  std::size_t lambda = 0;
  bool setup_accepted = false;
  bool funded = false;
  bool dealer_paid = false;
  bool party_won = false;
  bool aborted = false;
  std::string abort_reason;
  Guess y_tgt = 0;
  Guess y_gss = 0;
  std::size_t candidate_count = 0;
  bool candidates_agree = false;
  GroupElement y_win;
  std::optional<Scalar> recovered_w;
  std::vector<BalanceRow> balances;
  std::vector<Txid> posted;
  SwapHistory history;
  std::vector<Ledger> ledgers;  // final state, dealer chain first
  bool conserved = false;       // every ledger total equals its genesis total

  Amount initial_balance(Owner owner) const;
  Amount final_balance(Owner owner) const;
};

/// Runs all five phases to terminal states. Protocol aborts are reported in
/// the outcome, not thrown. Throws kInvariantViolation when an honest
/// transaction is rejected or value is not conserved.
SwapOutcome run_swap(const SwapConfig& cfg);

/// Line-delimited key=value record.
std::string export_outcome(const SwapOutcome& outcome);

/// Safety property for the given scenario: the honest side ends with its
/// initial balance when the other side misbehaved, and party_won implies
/// dealer_paid in every case.
bool scenario_safe(const SwapOutcome& outcome);

}  // namespace proswap
