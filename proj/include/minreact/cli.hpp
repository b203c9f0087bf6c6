#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace minreact::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;  // infeasible, not strongly connected, undefined consensus
inline constexpr int kExitUsage = 2;   // bad flags, unreadable or malformed input

struct RunConfig {
  std::string command;  // analyze | balance-weights | balance-links | simulate | compare | sweep | generate
  std::string input;
  std::string against;
  std::string output;
  std::string epsilon = "auto";
  std::string mode = "both";
  bool prefer_add = false;
  std::optional<double> bias;
  double sigma = 1.0;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::string x0;
  std::string x0_file;
  std::uint64_t seed = 0;
  std::vector<int> ns;
  std::vector<double> ps;
  double p = 0.5;
  double p_step = 0.05;
  int samples = 100;
  int jobs = 0;  // 0: MINREACT_JOBS, else hardware concurrency
  std::string format = "edges";
};

/// Parses argv into a RunConfig and runs it. Reports go to `out`, diagnostics to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace minreact::cli
