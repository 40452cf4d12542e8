#pragma once
// Divergence-free transport-noise basis, transport operators T_k B = (c_k.grad)B,
// the Ito correction (1/2) sum_k T_k^2 B, and Wiener increments.
//
// Basis construction is deterministic: wavevectors m_j enumerate canonical
// lattice points by increasing |m| (descending lexicographic tie-break, so
// (1,0,0) leads the first shell); each wavevector emits a cosine field along
// polarization eps1 and a sine field along eps2, with (eps1, eps2, m/|m|)
// orthonormal and amplitude theta_j = |m_j|^{-gamma}. Both are real, mean-free
// and divergence-free by construction.

#include <cstdint>
#include <vector>

#include "emhd/rng.hpp"
#include "emhd/spectral_ops.hpp"

namespace emhd {

struct NoiseField {
    Mode m;
    Vec3 pol;      // unit polarization, orthogonal to m
    double theta;  // amplitude |m|^{-gamma}
    bool is_sine;  // cosine otherwise
};

struct NoiseBasis {
    std::vector<NoiseField> fields;
    std::vector<SpectralField> coeff_fields;  // materialized at truncation n
    double gamma = 0.0;
    double s = 0.0;
    int n = 0;
    std::uint64_t seed = 0;  // provenance only; construction is deterministic

    int K() const { return static_cast<int>(fields.size()); }
    // Closed-form sum_k |c_k|^2_{H^{s1}} = sum_j theta_j^2 (1+|m_j|^{2 s1})/2.
    double regularity_budget(double s1) const;
};

// Orthonormal frame transverse to m != 0: eps1 = normalize(a x m_hat) with a
// the coordinate axis of least |m_hat| component (z, y, x preference),
// eps2 = m_hat x eps1.
void polarization_frame(const Mode& m, Vec3& eps1, Vec3& eps2);

// Spectral coefficients of one basis field at truncation radius n_out.
SpectralField noise_field_spectral(const NoiseField& f, int n_out);

// Enforced: K >= 1, K within the mode budget at truncation n, and
// gamma > s + 1 + 3/2 so the H^{s+1} tail sum converges.
NoiseBasis build_noise_basis(int K, double gamma, double s, int n, std::uint64_t seed);

// (c.grad)B via dealiased products; ball-truncated to the shared radius,
// NOT Leray-projected (projection is the integrator's job).
SpectralField transport_apply(const SpectralField& c, const SpectralField& B);

// (1/2) sum_k T_k(T_k B). With project_intermediate the inner field is
// Leray-projected between the two applications, matching the composition the
// time steppers generate.
SpectralField ito_correction(const NoiseBasis& basis, const SpectralField& B,
                             bool project_intermediate = false);

struct WienerIncrement {
    std::vector<double> dW;
    double dt = 0.0;
};

// K independent N(0, dt) draws, a pure function of (stream key, step).
WienerIncrement sample_increments(double dt, int K, const RngStream& stream, std::uint32_t step);

}  // namespace emhd
