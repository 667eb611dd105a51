#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace proswap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAbort = 2;
inline constexpr int kExitInvariant = 3;

struct RunConfig {
  unsigned ell = 8;
  std::size_t lambda = 16;
  std::int64_t nu = 1;
  std::uint64_t t_p = 10;
  std::uint64_t t_d = 20;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::string scenario = "honest";
  bool cross_chain = false;
  bool batched = false;
  std::string output;
  std::optional<unsigned> ell_max;
};

int cmd_run(const RunConfig& cfg, std::ostream& out);
int cmd_montecarlo(const RunConfig& cfg, std::ostream& out);
int cmd_adversary(const RunConfig& cfg, std::ostream& out);
int cmd_bench(const RunConfig& cfg, std::ostream& out);
int cmd_inspect(const std::string& path, std::ostream& out);

/// Parses argv, dispatches, and maps failures onto the exit codes above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proswap::cli
