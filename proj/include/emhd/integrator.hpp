#pragma once
// Time stepping for the Galerkin system
//   dB + ( chi_r^2 P curl((curl B) x B) + mu Lambda^alpha B ) dt
//     = (1/2) sum_k P T_k^2 B dt + sum_k P T_k B dW^k          (Ito form)
// with P = Leray-project o ball-truncate and T_k B = (c_k.grad) B.
//
// Two schemes share one limit:
//   exponential-EM      Ito form; the Lambda^alpha factor is integrated
//                       exactly per mode, everything else explicit Euler-
//                       Maruyama inside the exponential bracket.
//   stratonovich-heun   predictor-corrector on the Stratonovich form (drift
//                       without the Ito correction, noise averaged over the
//                       two stages) in the same exponential integrating-
//                       factor frame: the Lambda^alpha factor is exact per
//                       mode and the Heun average covers Hall + transport.
// Both evaluate the cutoff factor chi_r(|B|_{W^{1,inf}}) afresh at every
// drift evaluation, and both apply the projected transport P T_k inside the
// noise and correction terms, which is exactly the composition whose dt -> 0
// limits coincide.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "emhd/diagnostics.hpp"
#include "emhd/hall.hpp"
#include "emhd/initial_data.hpp"
#include "emhd/noise.hpp"

namespace emhd {

enum class Scheme { exponential_em, stratonovich_heun };

struct SolverConfig {
    int n = 8;
    double alpha = 1.5;
    double mu = 1.0;
    double r = 1.0;
    double s = 3.1;
    int K = 0;
    double gamma = 6.0;  // noise amplitude decay, must exceed s + 5/2 when K > 0
    double dt = 1e-3;
    double T = 0.1;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::exponential_em;
    bool cutoff_enabled = true;
    bool hall_enabled = true;
    std::vector<double> ladder;  // strictly increasing H^s first-hit levels
    InitSpec init;
    int diag_interval = 1;  // steps between diagnostics rows

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

// All violated constraints as (key, message) pairs; empty means valid.
std::vector<std::pair<std::string, std::string>> config_violations(const SolverConfig& cfg);
// Throws std::invalid_argument naming the first violated constraint.
void validate(const SolverConfig& cfg);

struct TrajectoryState {
    double t = 0.0;
    SpectralField B;
    std::optional<double> sigma_r_hit;    // first grid time with w1inf > r/2
    std::map<double, double> ladder_hits; // level -> first grid time with |B|_{H^s} >= level
    bool blown_up = false;
};

struct TrajectorySummary {
    double sup_hs2 = 0.0;           // sup_t |B|^2_{H^s} over grid times
    double sup_hs_p = 0.0;          // sup_t |B|^p_{H^s} (p from the caller, default 2)
    double int_hs_alpha2 = 0.0;     // sum dt |B|^{p-2}_{H^s} |B|^2_{H^{s+alpha/2}}
    double final_l2 = 0.0;
    double final_hs = 0.0;
    double final_t = 0.0;
};

struct TrajectoryRecord {
    std::vector<DiagnosticsRecord> rows;
    TrajectoryState final_state;
    TrajectorySummary summary;
};

// Reference (module-composed) steppers: advance one step in place. The field
// must match cfg.n and be divergence-free; non-finite results set blown_up
// instead of throwing. Both consume the same K increments.
void step_exponential_em(TrajectoryState& state, const SolverConfig& cfg, const NoiseBasis& basis,
                         const WienerIncrement& w);
void step_stratonovich_heun(TrajectoryState& state, const SolverConfig& cfg,
                            const NoiseBasis& basis, const WienerIncrement& w);

// Updates sigma_r / ladder / blow-up bookkeeping from the current state; the
// overload without norms computes them (w1inf on the 4n grid). Returns the
// events recorded at this call ("sigma_r", "ladder:<level>", "blow_up").
std::vector<std::string> detect_stopping(TrajectoryState& state, const SolverConfig& cfg,
                                         double w1inf_value, double hs_value);
std::vector<std::string> detect_stopping(TrajectoryState& state, const SolverConfig& cfg);

// Full trajectory: builds the noise basis and initial data, steps to T (or to
// blow-up), samples diagnostics every diag_interval steps (plus the initial
// state, every event, and the final state). Deterministic in (cfg, path_id).
// p_moment enters the summary accumulators only. `sink`, when set, receives
// every diagnostics row as it is produced (streaming output).
using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;
TrajectoryRecord run_trajectory(const SolverConfig& cfg, std::uint32_t path_id,
                                double p_moment = 2.0, const DiagnosticsSink& sink = {});

namespace integrator_detail {

// Fused per-trajectory workspace: noise coefficient grids are cached, the
// grid representations of B, grad B, curl B are shared between the Hall term,
// the Ito correction, and the transport noise, and the Wiener sum is applied
// through the combined field c_eff = sum_k dW_k c_k. Step results agree with
// the module-composed steppers to roundoff; equality is pinned by tests.
class StepWorkspace {
  public:
    StepWorkspace(const SolverConfig& cfg, const NoiseBasis& basis);

    // w1inf of the pre-step field is taken from the cache (each step leaves
    // the post-step value behind); call seed_w1inf after replacing state.B.
    void seed_w1inf(const SpectralField& B);
    double current_w1inf() const { return w_current_; }

    void step(TrajectoryState& state, const WienerIncrement& w);

  private:
    struct Stage {
        SpectralField f;  // drift without dissipation and without correction
        SpectralField g;  // P T_{c_eff} B
        double chi2 = 1.0;
    };
    // Shared evaluation core; corr != nullptr also accumulates the projected
    // Ito correction (exponential-EM only).
    Stage evaluate(const SpectralField& B, const WienerIncrement& w, double w1inf_value,
                   SpectralField* corr);
    void step_em(TrajectoryState& state, const WienerIncrement& w);
    void step_heun(TrajectoryState& state, const WienerIncrement& w);
    double w1inf(const SpectralField& B) const;

    const SolverConfig& cfg_;
    const NoiseBasis& basis_;
    int n_, Mp_, Mw_;
    std::vector<GridField> c_grids_;     // one per basis field, at Mp
    std::vector<double> exp_factor_;     // e^{-mu |k|^alpha dt} over the cube
    double w_current_ = 0.0;
};

}  // namespace integrator_detail

}  // namespace emhd
