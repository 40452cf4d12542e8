#pragma once
// CLI subcommand implementations, kept in the library so tests can drive them
// directly. Subcommands: run, ensemble, verify, inspect. Flags mirror config
// keys (--key=value or --key value, '-' and '_' interchangeable) and override
// values read with --config <file>. EMHD_OUTDIR overrides the output
// directory last.

#include <string>

#include "emhd/verification.hpp"

namespace emhd {

// Configured directory unless EMHD_OUTDIR is set and nonempty.
std::string effective_output_dir(const std::string& configured);

// One trajectory: streaming diagnostics NDJSON (<out>/run.ndjson), final
// checkpoint (<out>/final.ckpt), human-readable summary on stdout.
int cmd_run(const RunConfig& cfg);

// Ensemble: per-path NDJSON plus <out>/aggregate.json; aggregate also echoed
// to stdout.
int cmd_ensemble(const RunConfig& cfg);

// Runs the selected check suite, prints one CheckReport NDJSON line per
// check, writes them to <out>/checks.ndjson; exit 0 iff every check passed.
int cmd_verify(const std::string& selector, const AblationFlags& flags, std::uint64_t seed,
               const std::string& output_dir, const VerificationThresholds& thr = {});

// Pretty-prints a checkpoint header, field norms, and the noise basis.
int cmd_inspect(const std::string& path);

// Full argv dispatch; returns the process exit code.
int harness_main(int argc, const char* const* argv);

}  // namespace emhd
