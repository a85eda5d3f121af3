#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ldlab::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kRange = 3 };

/// Everything a run depends on besides the fixture files.
struct RunConfig {
  std::string subcommand;
  std::string family = "primes";
  std::string model = "circle";
  std::string kind;  // empirical: zeta | characters | quadratic | psi; aih: characters | pit | quadchar | kloosterman
  double Q = 1e5;
  std::optional<double> V, s;
  double n = 100000;
  double T = 1000, q = 1009, x = 10000, P = 1000;
  double step = 0.01;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: available parallelism
  std::string method = "tilted";
  double head_cutoff = 0.0;  // 0: every coordinate fresh per sample
  std::uint64_t reuse = 1;
  std::string out;     // empty: stdout
  std::string zeros;   // empty: bundled table
  std::size_t n_zeros = 2000;
  double theta = 5.0, c = 2.0;
  std::optional<double> L;
  bool strict = false;
  std::vector<std::int64_t> primes, shifts;
  double pairs = 0;  // kloosterman: 0 means full average
  double V_min = 0, V_max = 0, s_min = 0, s_max = 0;
  int points = 10;
  std::string simulate;  // sweep: "", "tilted" or "direct"
  std::vector<double> grid;  // calibrate
  bool fit_C0 = false;
};

std::string to_json(const RunConfig& c);
RunConfig config_from_json(const std::string& text);

/// Runs one command line. Output goes to `out` unless the config names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace ldlab::cli
