#pragma once
// Key-value run configuration. The schema is flat `key = value` lines with
// `#` comments; emit_config writes the canonical form (every key, 17
// significant digits), and parse(emit(c)) == c exactly.
//
// Keys and defaults:
//   n=8 alpha=1.5 mu=1 r=1 s=3.1 K=0 gamma=6 dt=0.001 T=0.1 seed=0
//   scheme=exponential-EM cutoff_enabled=true hall_enabled=true
//   ladder= (empty, comma-separated increasing levels) diag_interval=1
//   init=random-hs init_mode=1,0,0 init_amp=1 init_shell=1 init_decay=3.1
//   init_checkpoint= output_dir=out ensemble_size=1 workers=1
//   deterministic=true p=2

#include <string>
#include <vector>

#include "emhd/integrator.hpp"

namespace emhd {

struct RunConfig {
    SolverConfig solver;
    std::string output_dir = "out";
    int ensemble_size = 1;
    int workers = 1;
    bool deterministic = true;
    double p = 2.0;  // moment order for ensemble aggregates

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConfigError {
    std::string key;
    std::string message;
};

struct ParsedConfig {
    RunConfig config;
    std::vector<ConfigError> errors;  // exhaustive, not first-failure
    bool ok() const { return errors.empty(); }
};

ParsedConfig parse_config(const std::string& text);
// Single `key=value` override (command-line flags reuse the same schema).
void apply_override(ParsedConfig& parsed, const std::string& key, const std::string& value);
// Re-validates cross-field constraints after overrides.
void finalize_config(ParsedConfig& parsed);

std::string emit_config(const RunConfig& cfg);

std::string scheme_name(Scheme s);
std::string family_name(InitFamily f);

}  // namespace emhd
