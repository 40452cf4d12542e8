#pragma once
// Hall nonlinearity curl((curl B) x B), the smooth threshold cutoff chi_r, and
// the assembled Ito-form drift
//   -chi_r(|B|_{W^{1,inf}})^2 P( hall(B) ) - mu Lambda^alpha B + P( correction )
// with P = ball-truncate then Leray-project.

#include "emhd/noise.hpp"
#include "emhd/spectral_ops.hpp"

namespace emhd {

// curl( (curl B) x B ) with the cross product dealiased; divergence-free by
// construction (outer curl).
SpectralField hall_term(const SpectralField& B);

// Same quantity through the identity A x (curl B) = (grad B).A - (A.grad)B
// with A = B: -curl( (grad B).B - (B.grad)B ). The (grad B).B part is
// (1/2) grad |B|^2, whose curl vanishes to roundoff.
SpectralField hall_term_alt(const SpectralField& B);

struct CutoffProfile {
    double r = 1.0;  // threshold; plateau 1 on [0, r/2], 0 beyond r
};

// Exact 1.0 for x <= r/2 and exact 0.0 for x > r; smooth symmetric ramp
// between (same exp-based psi as the dyadic profile), so cutoff-consistency
// comparisons are exact rather than approximate.
double cutoff_value(const CutoffProfile& profile, double x);

struct DriftParams {
    double alpha = 1.5;  // dissipation exponent, enforced in (1, 2]
    double mu = 1.0;     // resistivity, > 0
    double r = 1.0;      // cutoff threshold
    bool cutoff_enabled = true;
    bool hall_enabled = true;
    // Leray-project between the two transport applications inside the Ito
    // correction; the time steppers use true so both schemes share one limit.
    bool project_intermediate = false;
    int w1inf_grid = 0;  // 0 -> default 4n oversampling
};

// Full Ito-form drift at truncation n. With cutoff_enabled=false the factor
// chi^2 is replaced by exactly 1.0 (the uncut system).
SpectralField drift(const SpectralField& B, const DriftParams& params, const NoiseBasis& basis,
                    int n);

}  // namespace emhd
