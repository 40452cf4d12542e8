#pragma once
// Analytic initial-data families. Every family yields a real, mean-free,
// divergence-free field; random coefficients are keyed per wavevector, so the
// same (seed, spec) at different truncations produces nested fields (the
// coarse field is exactly the ball truncation of the fine one).

#include <cstdint>
#include <string>

#include "emhd/spectral_ops.hpp"

namespace emhd {

enum class InitFamily {
    zero,
    single_mode,  // amplitude * cos(2 pi mode.x) along the first transverse axis
    beltrami,     // amplitude * (0, sin(2 pi m x1), cos(2 pi m x1)), curl eigenfield
    random_hs,    // per-mode Gaussian coefficients with |c_k| ~ (1+|k|)^{-(decay+2)}
    checkpoint,   // resolved by the trajectory driver via read_checkpoint
};

struct InitSpec {
    InitFamily family = InitFamily::random_hs;
    Mode mode{1, 0, 0};             // single_mode wavevector, nonzero
    double amplitude = 1.0;
    int shell = 1;                  // beltrami wavenumber m >= 1
    double decay = 3.1;             // random_hs Sobolev decay exponent
    std::string checkpoint_path;

    friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

// Deterministic in (spec, n, seed); Leray-projected and mean-free on return.
// The checkpoint family is not representable here and throws.
SpectralField make_initial_data(const InitSpec& spec, int n, std::uint64_t seed);

}  // namespace emhd
