#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace clusterexp::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kNumericFailure = 1,
  kValidationError = 2,
  kResourceError = 3,
  kCheckFailed = 4,
};

const std::vector<std::string>& commands();

// One-line summary of a command; empty for unknown names.
std::string describe(const std::string& command);

// Command-line values that replace the matching config scalars.
struct Overrides {
  std::optional<std::uint64_t> seed;     // caps.seed
  std::optional<int> threads;            // recorded; evaluation is sequential
  std::optional<double> beta;            // model.beta
  std::optional<double> activity;        // model.activity
  std::optional<int> n_max;              // caps.n_max
};

// Runs `command` on the JSON config text. Output (header plus CSV or JSON lines)
// goes to `out` only when the command completes, including a failed check.
int run(const std::string& command, const std::string& config_text, std::ostream& out, std::ostream& err,
        const Overrides& overrides = {});

// Same, reading the config from a file and writing to `output_path` ("-" is stdout).
int run_files(const std::string& command, const std::string& config_path, const std::string& output_path,
              std::ostream& err, const Overrides& overrides = {});

}  // namespace clusterexp::cli
