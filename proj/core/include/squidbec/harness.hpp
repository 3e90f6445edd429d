#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "squidbec/config.hpp"

// Orchestration layer behind the command-line tool.  Every subcommand
// resolves its RunConfig (file + overrides), runs the requested stage(s),
// writes CSV/report artifacts plus a run manifest into the output
// directory, and maps failures onto the documented exit codes.  Partial
// artifacts are removed when a run fails.

namespace squidbec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;     // ConfigError / DomainError in inputs
inline constexpr int kExitNumerical = 3;  // NumericalError
inline constexpr int kExitIo = 4;         // IoError

inline constexpr const char* kOutDirEnvVar = "SQUIDBEC_OUT_DIR";

struct CliInvocation {
  std::string subcommand;  // squid-analyze | field-sample | coupling |
                           // transfer | entangle | sweep-ramp | tomography |
                           // full-pipeline
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;   // --out; beats env and config
  std::optional<std::uint64_t> seed;    // --seed; beats config
  bool fast = false;                    // --fast integrator profile
};

// Output-directory precedence: --out flag, then SQUIDBEC_OUT_DIR, then
// [output] dir from the config, then "./out".
std::string resolve_out_dir(const CliInvocation& inv, const RunConfig& cfg);

// Runs one subcommand end to end.  Returns kExitOk or the mapped failure
// code; diagnostic text goes to err.
int run_subcommand(const CliInvocation& inv, std::string& err);

// Artifact bookkeeping: files registered while a stage runs are deleted if
// the stage throws before commit().
class ArtifactSet {
 public:
  explicit ArtifactSet(std::string dir);
  ~ArtifactSet();
  std::string dir() const { return dir_; }
  // Full path for a new artifact; registers it for cleanup-on-failure.
  std::string path(const std::string& filename);
  void commit() { committed_ = true; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

// Deterministic CSV emission (snprintf %.17g; bitwise stable per build).
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// key = value report in the config syntax.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv);

std::string format_double(double v);  // %.17g

}  // namespace squidbec
