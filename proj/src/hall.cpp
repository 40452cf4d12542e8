#include "emhd/hall.hpp"

#include <cmath>
#include <stdexcept>

namespace emhd {

SpectralField hall_term(const SpectralField& B) {
    SpectralField J = curl(B);
    return curl(dealiased_product(J, B, ProductOp::cross));
}

SpectralField hall_term_alt(const SpectralField& B) {
    const int n = B.n();
    // (grad B).B : component i is B . (d_i B).
    SpectralField p1(n);
    for (int axis = 1; axis <= 3; ++axis) {
        SpectralField di = dealiased_product(B, differentiate(B, axis), ProductOp::dot);
        std::copy(di.component(0), di.component(0) + di.modes(), p1.component(axis - 1));
    }
    SpectralField p2 = transport_apply(B, B);  // (B.grad)B
    p1 -= p2;
    p1 *= -1.0;
    return curl(p1);
}

namespace {
// Same exp(-1/t) ramp as the dyadic profile; exact plateaus.
double psi_ramp(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    double fa = std::exp(-1.0 / (1.0 - t));
    double fb = std::exp(-1.0 / t);
    return fa / (fa + fb);
}
}  // namespace

double cutoff_value(const CutoffProfile& profile, double x) {
    if (!(profile.r > 0.0)) throw std::invalid_argument("cutoff_value: r must be > 0");
    if (!std::isfinite(x)) throw std::invalid_argument("cutoff_value: x must be finite");
    double half = 0.5 * profile.r;
    if (x <= half) return 1.0;
    if (x > profile.r) return 0.0;
    return psi_ramp((x - half) / half);
}

SpectralField drift(const SpectralField& B, const DriftParams& params, const NoiseBasis& basis,
                    int n) {
    if (B.n() != n) throw std::invalid_argument("drift: field truncation does not match n");
    if (!(params.alpha > 1.0 && params.alpha <= 2.0))
        throw std::invalid_argument("drift: dissipation exponent alpha must lie in (1, 2]");
    if (!(params.mu > 0.0)) throw std::invalid_argument("drift: mu must be > 0");
    if (divergence_residual(B) > 1e-8)
        throw std::invalid_argument("drift: input field is not divergence-free");

    SpectralField out(n);
    if (params.hall_enabled) {
        double chi2 = 1.0;
        if (params.cutoff_enabled) {
            int M = params.w1inf_grid > 0 ? params.w1inf_grid : 4 * n;
            double w = w1inf_norm(B, M);
            double chi = cutoff_value(CutoffProfile{params.r}, w);
            chi2 = chi * chi;
        }
        if (chi2 != 0.0) {
            SpectralField hall = truncate(leray_project(hall_term(B)), n);
            out.axpy(-chi2, hall);
        }
    }
    out.axpy(-params.mu, apply_fractional_laplacian(B, params.alpha));
    if (basis.K() > 0) {
        SpectralField corr = truncate(
            leray_project(ito_correction(basis, B, params.project_intermediate)), n);
        out += corr;
    }
    return out;
}

}  // namespace emhd
