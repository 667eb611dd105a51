#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "proswap/adaptor.hpp"
#include "proswap/algebra.hpp"
#include "proswap/bytes.hpp"

namespace proswap {

/// Coin amounts in integer base units.
using Amount = std::int64_t;
using Height = std::uint64_t;
using Txid = std::array<std::uint8_t, 32>;

struct SingleKey {
  GroupElement pk;
  bool operator==(const SingleKey&) const = default;
};

/// Spendable by pk_tmp at any height, by pk_fallback once height >= timeout.
struct TimeLocked {
  GroupElement pk_tmp;
  Height timeout = 0;
  GroupElement pk_fallback;
  bool operator==(const TimeLocked&) const = default;
};

using SpendCondition = std::variant<SingleKey, TimeLocked>;

struct Outpoint {
  Txid txid{};
  std::uint32_t index = 0;
  auto operator<=>(const Outpoint&) const = default;
};

enum class SpendBranch : std::uint8_t { kKey = 0, kFallback = 1 };

struct TxInput {
  Outpoint prev;
  SpendBranch branch = SpendBranch::kKey;
  bool operator==(const TxInput&) const = default;
};

struct TxOutput {
  Amount value = 0;
  SpendCondition condition;
  bool operator==(const TxOutput&) const = default;
};

struct LockBox {
  Outpoint id;
  Amount value = 0;
  SpendCondition condition;
};

struct LedgerTx {
  std::vector<TxInput> inputs;
  std::vector<TxOutput> outputs;
  std::vector<Signature> witness;  // one per input

  /// Canonical inputs || outputs; the bytes every witness signs.
  Bytes message() const;
  Txid txid() const;
  bool operator==(const LedgerTx&) const = default;
};

enum class RejectReason { kUnknownOutpoint, kUnauthorized, kTimelock, kConservation, kMalformed };

std::string_view to_string(RejectReason reason);

struct PostResult {
  std::optional<RejectReason> rejected;
  Txid txid{};
  bool accepted() const { return !rejected.has_value(); }
};

struct LedgerEntry {
  LedgerTx tx;
  Txid txid{};
  Height height = 0;
  bool operator==(const LedgerEntry&) const = default;
};

/// The key a spend must be signed under, or nullopt when the branch does not
/// apply to the condition.
std::optional<GroupElement> authorized_key(const SpendCondition& cond, SpendBranch branch);

class Ledger {
 public:
  /// Throws kInvalidParameter for a negative allocation.
  static Ledger genesis(const std::vector<std::pair<GroupElement, Amount>>& allocations);

  PostResult post(const LedgerTx& tx);
  /// Throws kInvalidParameter for delta = 0.
  void tick(Height delta);

  Height height() const { return height_; }
  const std::vector<LedgerEntry>& read() const { return log_; }
  const std::map<Outpoint, LockBox>& boxes() const { return boxes_; }
  std::optional<LockBox> box(const Outpoint& id) const;

  /// Value held in live SingleKey boxes of pk.
  Amount balance(const GroupElement& pk) const;
  Amount total() const;

  /// Line-delimited export of the accepted log.
  std::string export_log() const;

 private:
  std::vector<LedgerEntry> log_;
  std::map<Outpoint, LockBox> boxes_;
  Height height_ = 0;
};

/// Builds an unsigned tx; callers sign message() and fill the witness.
LedgerTx make_tx(std::vector<TxInput> inputs, std::vector<TxOutput> outputs);

inline constexpr std::string_view kLedgerExportHeader = "# proswap-ledger v1";

/// Parses export_log() output. Throws kMalformedEncoding with a
/// "line N:" prefix on the first bad line.
std::vector<LedgerEntry> parse_ledger_log(std::string_view text);

/// Human-readable rendering of parsed entries.
std::string render_ledger_log(const std::vector<LedgerEntry>& entries);

}  // namespace proswap
