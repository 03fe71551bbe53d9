#ifndef MINPLUS_TOOLS_CLI_HPP_
#define MINPLUS_TOOLS_CLI_HPP_

#include "minplus/bounds.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace minplus::cli {

enum class Command { kEvolve, kSample, kBounds, kSeries, kLimit, kRegimes, kSelftest };
enum class Format { kCsv, kJson };

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// Environment variable holding the default worker count for `sample`.
inline constexpr const char* kWorkersEnv = "MINPLUS_WORKERS";

/// Bad flag, missing parameter or out-of-range value. `message` is already
/// formatted for the terminal.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, int exit_code)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

struct RunConfig {
  Command command = Command::kSelftest;
  std::string output_path;  ///< empty: stdout
  Format format = Format::kCsv;
  std::uint64_t seed = 0;
  bool strict = false;

  // evolve, limit, sample
  int N = 10;
  double p = 0.5;
  std::optional<std::int64_t> k_max;  ///< nullopt: growth rule
  std::string tail_mode = "lump";

  // sample
  std::uint64_t samples = 100000;
  int workers = 1;
  bool compare = false;

  // bounds
  std::string model = "upper";
  double C = 1.1 * kCriticalC;
  double beta = 2.0;
  double c = 1.0;
  std::int64_t K = 33;
  Range n_range{10000, 10050};
  Range k_range{1, 10000};
  bool emit_grid = false;

  // series
  std::string fn = "h";
  std::int64_t k = 2;
  double alpha = 0.01;
  std::int64_t A = 8;

  // limit
  std::int64_t max_rows = 2000;

  // regimes
  double tol = 1e-10;
  int N_max = 20;
  std::int64_t regime_k_max = 4096;
};

/// Parses and validates argv. Throws UsageError (exit code 0 for --help).
RunConfig parse_args(int argc, const char* const* argv);

struct ExecOptions {
  std::ostream* out = nullptr;  ///< data written to stdout and summaries
  std::ostream* err = nullptr;
  /// Runs the acceptance suite for `selftest`; returns its exit status.
  std::function<int(std::ostream&)> selftest;
};

/// Runs one command. Exit 0 on success, 1 on I/O or domain errors, 2 on a
/// failed check when cfg.strict is set.
int execute(const RunConfig& cfg, const ExecOptions& opts);

/// parse_args + execute with usage errors reported on opts.err.
int run(int argc, const char* const* argv, const ExecOptions& opts);

}  // namespace minplus::cli

#endif  // MINPLUS_TOOLS_CLI_HPP_
