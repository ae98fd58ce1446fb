#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cubeinf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailed = 1;
inline constexpr int kExitInvalidInput = 2;

/// Everything a command needs. A fixed config gives byte-identical output.
struct RunConfig {
  std::string command;
  std::string fn;
  std::string graph;
  std::size_t samples = 100'000;
  std::uint64_t seed = 1;
  std::string eps = "0.1,0.3,0.5";
  int workers = 0;
  std::string out;
  std::string mode = "bound";
  std::size_t track = 0;  // 0 = command default
  std::string alg = "natural";
  std::string suite = "all";
  std::string bits;
  double p = 2.0;
  std::string black;
};

/// Executes one command. Payload goes to `out` unless config.out names a
/// file; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (seed default from CUBEINF_SEED) and runs.
int run_main(int argc, char** argv);

/// "1..8", "1,3,5" or "2..4,9" to positions.
std::vector<std::uint64_t> parse_positions(const std::string& text);
std::vector<double> parse_reals(const std::string& text);

}  // namespace cubeinf::cli
