#include "proswap/ledger.hpp"

#include <sodium.h>

#include <charconv>
#include <set>
#include <sstream>

#include "proswap/error.hpp"

namespace proswap {

namespace {

constexpr std::uint8_t kSingleKeyTag = 0x00;
constexpr std::uint8_t kTimeLockedTag = 0x01;

void WriteCondition(ByteWriter& w, const SpendCondition& cond) {
  if (const auto* sk = std::get_if<SingleKey>(&cond)) {
    w.u8(kSingleKeyTag);
    w.raw(sk->pk.to_bytes());
  } else {
    const auto& tl = std::get<TimeLocked>(cond);
    w.u8(kTimeLockedTag);
    w.raw(tl.pk_tmp.to_bytes());
    w.u64(tl.timeout);
    w.raw(tl.pk_fallback.to_bytes());
  }
}

Txid HashToTxid(std::string_view domain, ByteView data) {
  Txid out{};
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, out.size());
  crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(domain.data()), domain.size());
  crypto_generichash_update(&st, data.data(), data.size());
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T ParseUint(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail(ErrorCode::kMalformedEncoding, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

Txid ParseTxid(std::string_view hex) {
  const Bytes b = from_hex(hex);
  if (b.size() != 32) fail(ErrorCode::kMalformedEncoding, "txid must be 32 bytes");
  Txid t{};
  std::copy(b.begin(), b.end(), t.begin());
  return t;
}

GroupElement ParsePoint(std::string_view hex) { return GroupElement::from_bytes(from_hex(hex)); }

std::string FormatCondition(const SpendCondition& cond) {
  if (const auto* sk = std::get_if<SingleKey>(&cond)) return "key:" + to_hex(sk->pk.to_bytes());
  const auto& tl = std::get<TimeLocked>(cond);
  return "lock:" + to_hex(tl.pk_tmp.to_bytes()) + ":" + std::to_string(tl.timeout) + ":" +
         to_hex(tl.pk_fallback.to_bytes());
}

SpendCondition ParseCondition(std::string_view s) {
  const auto parts = Split(s, ':');
  if (parts.size() == 2 && parts[0] == "key") return SingleKey{ParsePoint(parts[1])};
  if (parts.size() == 4 && parts[0] == "lock") {
    return TimeLocked{ParsePoint(parts[1]), ParseUint<Height>(parts[2]), ParsePoint(parts[3])};
  }
  fail(ErrorCode::kMalformedEncoding, "bad spend condition '" + std::string(s) + "'");
}

std::string_view FieldValue(std::string_view field, std::string_view key) {
  if (field.size() <= key.size() || field.substr(0, key.size()) != key || field[key.size()] != '=') {
    fail(ErrorCode::kMalformedEncoding, "expected field '" + std::string(key) + "='");
  }
  return field.substr(key.size() + 1);
}

LedgerEntry ParseEntry(std::string_view line) {
  const auto fields = Split(line, ' ');
  if (fields.size() != 5) fail(ErrorCode::kMalformedEncoding, "expected 5 fields, found " + std::to_string(fields.size()));
  LedgerEntry e;
  e.txid = ParseTxid(FieldValue(fields[0], "tx"));
  e.height = ParseUint<Height>(FieldValue(fields[1], "height"));
  const auto in = FieldValue(fields[2], "in");
  if (in != "-") {
    for (auto item : Split(in, ',')) {
      const auto p = Split(item, ':');
      if (p.size() != 3) fail(ErrorCode::kMalformedEncoding, "bad input '" + std::string(item) + "'");
      TxInput ti;
      ti.prev = {ParseTxid(p[0]), ParseUint<std::uint32_t>(p[1])};
      if (p[2] == "key") {
        ti.branch = SpendBranch::kKey;
      } else if (p[2] == "fallback") {
        ti.branch = SpendBranch::kFallback;
      } else {
        fail(ErrorCode::kMalformedEncoding, "bad spend branch '" + std::string(p[2]) + "'");
      }
      e.tx.inputs.push_back(ti);
    }
  }
  const auto out = FieldValue(fields[3], "out");
  if (out != "-") {
    for (auto item : Split(out, ',')) {
      const auto at = item.find('@');
      if (at == std::string_view::npos) fail(ErrorCode::kMalformedEncoding, "bad output '" + std::string(item) + "'");
      TxOutput to;
      to.value = static_cast<Amount>(ParseUint<std::uint64_t>(item.substr(0, at)));
      to.condition = ParseCondition(item.substr(at + 1));
      e.tx.outputs.push_back(to);
    }
  }
  const auto wit = FieldValue(fields[4], "wit");
  if (wit != "-") {
    for (auto item : Split(wit, ',')) e.tx.witness.push_back(parse_signature(from_hex(item)));
  }
  if (e.tx.txid() != e.txid) fail(ErrorCode::kMalformedEncoding, "txid does not match transaction body");
  return e;
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kUnknownOutpoint: return "unknown-outpoint";
    case RejectReason::kUnauthorized: return "unauthorized";
    case RejectReason::kTimelock: return "timelock";
    case RejectReason::kConservation: return "conservation";
    case RejectReason::kMalformed: return "malformed";
  }
  return "unknown";
}

Bytes LedgerTx::message() const {
  ByteWriter w;
  w.raw(as_bytes("proswap/tx"));
  w.u32(static_cast<std::uint32_t>(inputs.size()));
  for (const auto& in : inputs) {
    w.raw(in.prev.txid);
    w.u32(in.prev.index);
    w.u8(static_cast<std::uint8_t>(in.branch));
  }
  w.u32(static_cast<std::uint32_t>(outputs.size()));
  for (const auto& out : outputs) {
    w.u64(static_cast<std::uint64_t>(out.value));
    WriteCondition(w, out.condition);
  }
  return std::move(w).take();
}

Txid LedgerTx::txid() const { return HashToTxid("proswap/txid", message()); }

LedgerTx make_tx(std::vector<TxInput> inputs, std::vector<TxOutput> outputs) {
  LedgerTx tx;
  tx.inputs = std::move(inputs);
  tx.outputs = std::move(outputs);
  return tx;
}

std::optional<GroupElement> authorized_key(const SpendCondition& cond, SpendBranch branch) {
  if (const auto* sk = std::get_if<SingleKey>(&cond)) {
    if (branch == SpendBranch::kKey) return sk->pk;
    return std::nullopt;
  }
  const auto& tl = std::get<TimeLocked>(cond);
  return branch == SpendBranch::kKey ? tl.pk_tmp : tl.pk_fallback;
}

Ledger Ledger::genesis(const std::vector<std::pair<GroupElement, Amount>>& allocations) {
  init_crypto();
  ByteWriter w;
  for (const auto& [pk, value] : allocations) {
    if (value < 0) fail(ErrorCode::kInvalidParameter, "genesis allocation must be non-negative");
    w.raw(pk.to_bytes());
    w.u64(static_cast<std::uint64_t>(value));
  }
  const Txid gid = HashToTxid("proswap/genesis", w.bytes());
  Ledger l;
  for (std::size_t i = 0; i < allocations.size(); ++i) {
    const Outpoint id{gid, static_cast<std::uint32_t>(i)};
    l.boxes_[id] = LockBox{id, allocations[i].second, SingleKey{allocations[i].first}};
  }
  return l;
}

PostResult Ledger::post(const LedgerTx& tx) {
  PostResult res;
  res.txid = tx.txid();
  if (tx.inputs.empty()) {
    res.rejected = RejectReason::kMalformed;
    return res;
  }
  const Bytes msg = tx.message();
  std::set<Outpoint> seen;
  Amount in_total = 0;
  for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
    const auto& in = tx.inputs[i];
    const auto it = boxes_.find(in.prev);
    if (it == boxes_.end() || !seen.insert(in.prev).second) {
      res.rejected = RejectReason::kUnknownOutpoint;
      return res;
    }
    const auto key = authorized_key(it->second.condition, in.branch);
    if (!key || i >= tx.witness.size() || !vrfy(*key, msg, tx.witness[i])) {
      res.rejected = RejectReason::kUnauthorized;
      return res;
    }
    if (in.branch == SpendBranch::kFallback && height_ < std::get<TimeLocked>(it->second.condition).timeout) {
      res.rejected = RejectReason::kTimelock;
      return res;
    }
    if (__builtin_add_overflow(in_total, it->second.value, &in_total)) {
      res.rejected = RejectReason::kConservation;
      return res;
    }
  }
  if (tx.witness.size() != tx.inputs.size()) {
    res.rejected = RejectReason::kUnauthorized;
    return res;
  }
  Amount out_total = 0;
  for (const auto& out : tx.outputs) {
    if (out.value < 0 || __builtin_add_overflow(out_total, out.value, &out_total)) {
      res.rejected = RejectReason::kConservation;
      return res;
    }
  }
  if (in_total != out_total) {
    res.rejected = RejectReason::kConservation;
    return res;
  }
  for (const auto& in : tx.inputs) boxes_.erase(in.prev);
  for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
    const Outpoint id{res.txid, static_cast<std::uint32_t>(i)};
    boxes_[id] = LockBox{id, tx.outputs[i].value, tx.outputs[i].condition};
  }
  log_.push_back({tx, res.txid, height_});
  return res;
}

void Ledger::tick(Height delta) {
  if (delta == 0) fail(ErrorCode::kInvalidParameter, "tick needs a positive delta");
  height_ += delta;
}

std::optional<LockBox> Ledger::box(const Outpoint& id) const {
  const auto it = boxes_.find(id);
  if (it == boxes_.end()) return std::nullopt;
  return it->second;
}

Amount Ledger::balance(const GroupElement& pk) const {
  Amount sum = 0;
  for (const auto& [id, b] : boxes_) {
    if (const auto* sk = std::get_if<SingleKey>(&b.condition); sk != nullptr && sk->pk == pk) sum += b.value;
  }
  return sum;
}

Amount Ledger::total() const {
  Amount sum = 0;
  for (const auto& [id, b] : boxes_) sum += b.value;
  return sum;
}

std::string Ledger::export_log() const {
  std::ostringstream os;
  os << kLedgerExportHeader << '\n';
  for (const auto& e : log_) {
    os << "tx=" << to_hex(e.txid) << " height=" << e.height << " in=";
    if (e.tx.inputs.empty()) os << '-';
    for (std::size_t i = 0; i < e.tx.inputs.size(); ++i) {
      const auto& in = e.tx.inputs[i];
      os << (i ? "," : "") << to_hex(in.prev.txid) << ':' << in.prev.index << ':'
         << (in.branch == SpendBranch::kKey ? "key" : "fallback");
    }
    os << " out=";
    if (e.tx.outputs.empty()) os << '-';
    for (std::size_t i = 0; i < e.tx.outputs.size(); ++i) {
      os << (i ? "," : "") << e.tx.outputs[i].value << '@' << FormatCondition(e.tx.outputs[i].condition);
    }
    os << " wit=";
    if (e.tx.witness.empty()) os << '-';
    for (std::size_t i = 0; i < e.tx.witness.size(); ++i) os << (i ? "," : "") << to_hex(serialize(e.tx.witness[i]));
    os << '\n';
  }
  return os.str();
}

std::vector<LedgerEntry> parse_ledger_log(std::string_view text) {
  std::vector<LedgerEntry> out;
  std::size_t line_no = 0;
  bool saw_header = false;
  for (auto line : Split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kLedgerExportHeader) {
        fail(ErrorCode::kMalformedEncoding, "line " + std::to_string(line_no) + ": missing ledger export header");
      }
      saw_header = true;
      continue;
    }
    try {
      out.push_back(ParseEntry(line));
    } catch (const Error& e) {
      fail(ErrorCode::kMalformedEncoding, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_header) fail(ErrorCode::kMalformedEncoding, "line 1: missing ledger export header");
  return out;
}

std::string render_ledger_log(const std::vector<LedgerEntry>& entries) {
  std::ostringstream os;
  os << kLedgerExportHeader << '\n';
  os << entries.size() << " transaction(s)\n";
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const auto& e = entries[n];
    os << "\n[" << n << "] tx " << to_hex(e.txid) << " at height " << e.height << '\n';
    for (const auto& in : e.tx.inputs) {
      os << "    in   " << to_hex(in.prev.txid).substr(0, 16) << ".." << ':' << in.prev.index << " via "
         << (in.branch == SpendBranch::kKey ? "key" : "fallback") << " branch\n";
    }
    for (const auto& out : e.tx.outputs) {
      os << "    out  " << out.value << " -> ";
      if (const auto* sk = std::get_if<SingleKey>(&out.condition)) {
        os << "key " << to_hex(sk->pk.to_bytes()).substr(0, 16) << "..";
      } else {
        const auto& tl = std::get<TimeLocked>(out.condition);
        os << "lock(tmp " << to_hex(tl.pk_tmp.to_bytes()).substr(0, 16) << "..; after " << tl.timeout << " -> "
           << to_hex(tl.pk_fallback.to_bytes()).substr(0, 16) << "..)";
      }
      os << '\n';
    }
    os << "    sigs " << e.tx.witness.size() << '\n';
  }
  return os.str();
}

}  // namespace proswap
