#pragma once
// Ensemble orchestration: paths 0..N-1 run independently on a worker pool
// (counter-based RNG keyed by path_id, so scheduling cannot affect any draw),
// then aggregates are reduced in ascending path_id order. Outputs are
// byte-identical for any worker count.

#include <optional>

#include "emhd/config.hpp"

namespace emhd {

struct PathResult {
    std::uint32_t path_id = 0;
    TrajectorySummary summary;
    bool blown_up = false;
    std::optional<double> sigma_r_hit;
};

struct EnsembleResult {
    std::vector<PathResult> paths;  // ascending path_id
    double p = 2.0;
    double mean_sup_hs_p = 0.0, se_sup_hs_p = 0.0;
    double mean_int_hs_alpha2 = 0.0, se_int_hs_alpha2 = 0.0;
    // E[ sup |B|^p_{H^s} + int |B|^{p-2}_{H^s} |B|^2_{H^{s+alpha/2}} dt ]
    double mean_energy_functional = 0.0, se_energy_functional = 0.0;
    int blowups = 0;
};

// Runs the ensemble; when write_outputs is set, emits one diagnostics NDJSON
// per path plus aggregate.json under cfg.output_dir.
EnsembleResult run_ensemble(const RunConfig& cfg, bool write_outputs);

std::string aggregate_to_json(const EnsembleResult& r);

}  // namespace emhd
