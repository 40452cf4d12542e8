#pragma once
// Dyadic (Littlewood-Paley) frequency decomposition on the truncated lattice.
//
// Blocks are sharp per-mode multipliers: Delta_q u has coefficients
// phi_q(|k|) u_hat(k) with phi_q(xi) = phi(xi / 2^q) for q >= 0 and chi(xi)
// at q = -1, phi(xi) = chi(xi/2) - chi(xi), lambda_q = 2^q. For band-limited
// fields this is exact; no physical-space mollification is involved.

#include <cstdint>

#include "emhd/spectral_ops.hpp"

namespace emhd {

class DyadicProfile {
  public:
    // Standard profile: chi(xi) = psi(4 (|xi| - 3/4)) with the exp(-1/t) bump
    // ramp; chi == 1 for |xi| <= 3/4 and chi == 0 for |xi| >= 1, C^infinity,
    // symmetric transition (chi(7/8) = 1/2).
    DyadicProfile() = default;
    // Shifted plateau edge for chi only (phi keeps the standard edge, so the
    // partition of unity genuinely fails); for negative controls only.
    static DyadicProfile perturbed(double edge);

    double chi(double xi) const;
    double phi(double xi) const;                // chi(xi/2) - chi(xi)
    double phi_q(int q, double xi) const;       // q >= 0: phi(2^{-q} xi); q == -1: chi(xi)
    static int qmax(int n);                     // ceil(log2 n) + 1
    static double lambda(int q) { return q >= 0 ? static_cast<double>(1 << q) : 0.5; }

  private:
    double edge_ = 0.75;
};

SpectralField dyadic_block(const SpectralField& f, int q, const DyadicProfile& profile);

// S_q = sum_{j=-1}^{q} Delta_j; evaluated through the telescoped per-mode
// weight chi(2^{-q-1} |k|), which the block-sum path must match to roundoff.
SpectralField low_pass(const SpectralField& f, int q, const DyadicProfile& profile);

// ( sum_q lambda_q^{2s} |Delta_q f|_{L^2}^2 )^{1/2}, q = -1..qmax.
double lp_sobolev_norm(const SpectralField& f, double s, const DyadicProfile& profile);

struct BonyParts {
    SpectralField low_high;  // sum_l S_{l-2} u . Delta_l v
    SpectralField high_low;  // sum_l Delta_l u . S_{l-2} v
    SpectralField resonant;  // sum_l Delta_l u . (Delta_{l-1}+Delta_l+Delta_{l+1}) v
};

// Paraproduct splitting of the scalar product u.v (components 1,2 unused);
// parts sum to dealiased_product(u, v, dot). Delta_j := 0 for j < -1.
BonyParts bony_decompose(const SpectralField& u, const SpectralField& v,
                         const DyadicProfile& profile);

struct BernsteinSummary {
    // ratio_a = |grad^k Delta_q u|_{L^r} / (lambda_q^k |Delta_q u|_{L^r}),
    // r = p_high
    double a_min, a_max;
    // ratio_b = lambda_q^{k + 3(1/s - 1/r)} |Delta_q u|_{L^s} /
    //           |grad^k Delta_q u|_{L^r},  s = p_low, r = p_high
    double b_min, b_max;
};

// Randomized two-sided Bernstein ratio measurement over `trials` fields
// supported on block q (truncation 2^{q+1}, L^p norms by quadrature on a 4x
// oversampled grid; p may be infinity).
BernsteinSummary bernstein_ratio(int q, int deriv_order, double p_low, double p_high, int trials,
                                 std::uint64_t rng_seed,
                                 const DyadicProfile& profile = DyadicProfile{});

}  // namespace emhd
