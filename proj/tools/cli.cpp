#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "proswap/error.hpp"
#include "proswap/swap.hpp"

namespace proswap::cli {

namespace {

SwapConfig ToSwapConfig(const RunConfig& cfg) {
  SwapConfig sc;
  sc.ell = cfg.ell;
  sc.lambda = cfg.lambda;
  sc.nu_d = cfg.nu;
  sc.t_p = cfg.t_p;
  sc.t_d = cfg.t_d;
  sc.seed = cfg.seed;
  sc.scenario = parse_scenario(cfg.scenario);
  sc.cross_chain = cfg.cross_chain;
  sc.cc_mode = cfg.batched ? CcMode::kBatched : CcMode::kPlain;
  return sc;
}

std::uint64_t TrialSeed(std::uint64_t seed, std::uint64_t trial) {
  return Rng::from_seed(seed).fork(trial).next_u64();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kInvalidParameter, "cannot write '" + path + "'");
  f << contents;
  if (!f) fail(ErrorCode::kInvalidParameter, "write to '" + path + "' failed");
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  const SwapOutcome o = run_swap(ToSwapConfig(cfg));
  out << export_outcome(o);
  if (!cfg.output.empty()) {
    WriteFile(cfg.output, o.ledgers.at(0).export_log());
    if (o.ledgers.size() > 1) WriteFile(cfg.output + ".b", o.ledgers.at(1).export_log());
  }
  return o.aborted ? kExitAbort : kExitOk;
}

int cmd_montecarlo(const RunConfig& cfg, std::ostream& out) {
  if (cfg.trials < 100) fail(ErrorCode::kInvalidParameter, "montecarlo needs at least 100 trials");
  std::ostringstream csv;
  csv << "trial,seed,y_tgt,y_gss,won\n";
  std::uint64_t wins = 0;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    SwapConfig sc = ToSwapConfig(cfg);
    sc.scenario = Scenario::kHonest;
    sc.seed = TrialSeed(cfg.seed, i);
    const SwapOutcome o = run_swap(sc);
    if (o.aborted) fail(ErrorCode::kInvariantViolation, "honest trial aborted: " + o.abort_reason);
    wins += o.party_won ? 1 : 0;
    csv << i << ',' << sc.seed << ',' << o.y_tgt << ',' << o.y_gss << ',' << (o.party_won ? 1 : 0) << '\n';
  }
  const double n = static_cast<double>(cfg.trials);
  const double p = 1.0 / static_cast<double>(guess_domain_size(cfg.ell));
  const double p_hat = static_cast<double>(wins) / n;
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  const double lo = p - 3.0 * sigma;
  const double hi = p + 3.0 * sigma;
  const bool within = p_hat >= lo - 1e-12 && p_hat <= hi + 1e-12;
  out << std::setprecision(6) << std::fixed;
  out << "trials=" << cfg.trials << '\n'
      << "wins=" << wins << '\n'
      << "p=" << p << '\n'
      << "p_hat=" << p_hat << '\n'
      << "sigma=" << sigma << '\n'
      << "interval_3sigma=[" << lo << ", " << hi << "]\n"
      << "within_3sigma=" << (within ? "yes" : "no") << '\n';
  if (!cfg.output.empty()) WriteFile(cfg.output, csv.str());
  return kExitOk;
}

int cmd_adversary(const RunConfig& cfg, std::ostream& out) {
  std::uint64_t passed = 0;
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    SwapConfig sc = ToSwapConfig(cfg);
    sc.seed = cfg.trials == 1 ? cfg.seed : TrialSeed(cfg.seed, i);
    const SwapOutcome o = run_swap(sc);
    const bool safe = scenario_safe(o);
    passed += safe ? 1 : 0;
    if (cfg.trials == 1) {
      out << export_outcome(o);
    } else if (!safe) {
      out << "trial " << i << " (seed " << sc.seed << ") violated the safety property\n";
    }
  }
  const bool ok = passed == cfg.trials;
  out << "scenario=" << cfg.scenario << '\n'
      << "trials=" << cfg.trials << '\n'
      << "passed=" << passed << '\n'
      << "verdict=" << (ok ? "pass" : "fail") << '\n';
  return ok ? kExitOk : kExitInvariant;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const unsigned hi = cfg.ell_max.value_or(cfg.ell);
  if (hi > kMaxEll || cfg.ell > kMaxEll) {
    fail(ErrorCode::kInvalidParameter, "ell above supported cap of " + std::to_string(kMaxEll));
  }
  if (hi < cfg.ell) fail(ErrorCode::kInvalidParameter, "--ell-max below --ell");
  Rng rng = Rng::from_seed(cfg.seed);
  const OprfKeyPair kp = oprf_keygen(cfg.lambda, rng);
  const CcMode mode = cfg.batched ? CcMode::kBatched : CcMode::kPlain;
  std::ostringstream csv;
  csv << "ell,prove_s,verify_s,proof_bytes\n";
  for (unsigned ell = cfg.ell; ell <= hi; ++ell) {
    const Scalar w = Scalar::random_nonzero(rng);
    const GroupElement y_win = GroupElement::base_mul(w);
    const auto target = static_cast<Guess>(rng.uniform(guess_domain_size(ell)));
    Transcript ctx("proswap/bench");
    ctx.absorb_u64("ell", ell);
    const auto t0 = std::chrono::steady_clock::now();
    const CutChooseProof proof = prove_ywin(kp, target, w, y_win, ell, ctx, rng, mode);
    const auto t1 = std::chrono::steady_clock::now();
    const Bytes bytes = serialize(proof);
    const bool ok = verify_ywin(kp.public_key(), y_win, ell, parse_cut_choose_proof(bytes), ctx);
    const auto t2 = std::chrono::steady_clock::now();
    if (!ok) fail(ErrorCode::kInvariantViolation, "honest proof failed to verify at ell=" + std::to_string(ell));
    csv << ell << ',' << std::fixed << std::setprecision(4) << std::chrono::duration<double>(t1 - t0).count() << ','
        << std::chrono::duration<double>(t2 - t1).count() << ',' << bytes.size() << '\n';
  }
  out << csv.str();
  if (!cfg.output.empty()) WriteFile(cfg.output, csv.str());
  return kExitOk;
}

int cmd_inspect(const std::string& path, std::ostream& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kInvalidParameter, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  out << render_ledger_log(parse_ledger_log(buf.str()));
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic atomic swap simulator"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string inspect_path;
  std::optional<std::uint64_t> trials;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--ell", cfg.ell, "Guess bit-length; win probability 2^-ell")->check(CLI::Range(0u, kMaxEll));
    sub->add_option("--lambda", cfg.lambda, "Cut-and-choose instances (even)");
    sub->add_option("--seed", seed, "64-bit seed (falls back to PROSWAP_SEED, then 0)");
    sub->add_option("--out", cfg.output, "Output path");
  };
  const auto add_swap = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--nu", cfg.nu, "Dealer's locked amount")->check(CLI::PositiveNumber);
    sub->add_option("--t-p", cfg.t_p, "Party timeout height");
    sub->add_option("--t-d", cfg.t_d, "Dealer timeout height");
    sub->add_flag("--cross-chain", cfg.cross_chain, "Dealer and party coins on separate ledgers");
    sub->add_flag("--batched", cfg.batched, "Use the batched well-formedness proof");
  };

  CLI::App* run = app.add_subcommand("run", "Run one swap and print the outcome");
  add_swap(run);
  run->add_option("--scenario", cfg.scenario, "Scripted behaviour");

  CLI::App* mc = app.add_subcommand("montecarlo", "Estimate the win probability over many honest swaps");
  add_swap(mc);
  mc->add_option("--trials", trials, "Number of swaps (>= 100)");

  CLI::App* adv = app.add_subcommand("adversary", "Run a scripted adversary and check the honest side's safety");
  add_swap(adv);
  adv->add_option("--scenario", cfg.scenario, "Scenario name")->required();
  adv->add_option("--trials", trials, "Number of seeded runs");

  CLI::App* bench = app.add_subcommand("bench", "Time and size the Y_win well-formedness proof");
  add_common(bench);
  bench->add_option("--ell-max", cfg.ell_max, "Last ell of the range (default: --ell)");
  bench->add_flag("--batched", cfg.batched, "Use the batched well-formedness proof");

  CLI::App* inspect = app.add_subcommand("inspect", "Pretty-print an exported ledger log");
  inspect->add_option("path", inspect_path, "Ledger export file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  if (!seed) {
    if (const char* env = std::getenv("PROSWAP_SEED"); env != nullptr && *env != '\0') {
      try {
        std::size_t used = 0;
        seed = std::stoull(env, &used, 0);
        if (used != std::string_view(env).size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        err << "PROSWAP_SEED is not a valid 64-bit integer\n";
        return kExitUsage;
      }
    }
  }
  cfg.seed = seed.value_or(0);
  cfg.trials = trials.value_or(mc->parsed() ? 1000 : 1);
  if (bench->parsed() && bench->count("--lambda") == 0) cfg.lambda = 80;

  try {
    if (adv->parsed() || run->parsed()) parse_scenario(cfg.scenario);
    if (cfg.trials < 1) fail(ErrorCode::kInvalidParameter, "--trials must be at least 1");
    if (run->parsed()) return cmd_run(cfg, out);
    if (mc->parsed()) return cmd_montecarlo(cfg, out);
    if (adv->parsed()) return cmd_adversary(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
    return cmd_inspect(inspect_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kInvariantViolation:
      case ErrorCode::kExtractionMismatch:
        return kExitInvariant;
      case ErrorCode::kAbortProtocol:
      case ErrorCode::kProtocolState:
        return kExitAbort;
      default:
        return kExitUsage;
    }
  }
}

}  // namespace proswap::cli
