#pragma once
// Differential operators, projections, norms, and dealiased bilinear products
// for truncated Fourier vector fields on T^3.
//
// Conventions (fixed project-wide):
//   basis e^{2 pi i k.x};  d/dx_a multiplies by 2 pi i k_a;
//   Lambda^alpha multiplies by |k|^alpha with Euclidean |k| (so Lambda^2 =
//   -Laplacian / (4 pi^2) under this pairing);
//   H^s norm^2 = sum_k (1 + |k|^{2s}) |f_hat(k)|^2, homogeneous drops the 1;
//   ball truncation keeps |k| <= n with ties kept.

#include "emhd/fft.hpp"

namespace emhd {

// d/dx_axis, axis in {1,2,3}.
SpectralField differentiate(const SpectralField& f, int axis);
SpectralField curl(const SpectralField& f);
// Per mode k != 0: v -> v - (k.v) k / |k|^2; zero mode unchanged.
SpectralField leray_project(const SpectralField& f);
// Zeroes |k| > n (Euclidean); output storage radius min(f.n(), n).
SpectralField truncate(const SpectralField& f, int n);
// Zero-padded embedding into a larger cube.
SpectralField embed(const SpectralField& f, int n);
// Lambda^alpha, alpha > 0 enforced.
SpectralField apply_fractional_laplacian(const SpectralField& f, double alpha);
// Lambda^t for any real t; the zero mode maps to zero (mean-free calculus).
SpectralField lambda_power(const SpectralField& f, double t);

double l2_norm(const SpectralField& f);
// Real L2 pairing sum_k conj(f_hat).g_hat (real for Hermitian fields).
double inner_l2(const SpectralField& f, const SpectralField& g);
double sobolev_norm(const SpectralField& f, double s, bool homogeneous = false);
// max(|f|_inf, |grad f|_inf) sampled on an M^3 grid (Euclidean magnitude,
// Frobenius for the Jacobian).
double w1inf_norm(const SpectralField& f, int M);
// max_k |k . f_hat(k)| / max(l2_norm, tiny): scale-free divergence residual.
double divergence_residual(const SpectralField& f);
bool is_mean_free(const SpectralField& f, double tol = 0.0);

enum class ProductOp {
    cross,  // f x g componentwise in physical space
    dot,    // scalar f.g stored in component 0 (components 1,2 zero)
    scale   // f scaled pointwise by the scalar field in g's component 0
};

// Pointwise product via zero-padded collocation. The padded grid is the
// smallest even M >= 3n; when M == 3n the only aliasing paths into the
// retained ball |k| <= n are the six on-axis shell modes +-n e_i, and those
// are repaired by direct convolution, so retained modes are exact to roundoff.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, ProductOp op);

// Scalar field copy helper: component c of f moved into component 0.
SpectralField component_as_scalar(const SpectralField& f, int c);

// Smallest even padded-grid size for quadratic products at truncation n.
int product_pad_size(int n);

namespace detail {
// Coefficient-level bilinear op matching a pointwise product: the convolution
// contribution of f_hat(k1), g_hat(k2) to the output mode k1 + k2.
using CoeffOp = CVec3 (*)(const CVec3&, const Mode&, const CVec3&, const Mode&);
// Subtracts the M = 3n on-axis alias contamination from `out` (storage radius
// n) given the spectral inputs; no-op unless M == 3n.
void corner_alias_fix(SpectralField& out, const SpectralField& f, const SpectralField& g,
                      CoeffOp op, int M);
CVec3 coeff_cross(const CVec3& a, const Mode&, const CVec3& b, const Mode&);
CVec3 coeff_dot(const CVec3& a, const Mode&, const CVec3& b, const Mode&);
CVec3 coeff_scale(const CVec3& a, const Mode&, const CVec3& b, const Mode&);
// (a . 2 pi i k2) b : transport coefficient (c.grad)B with c=a, B=b.
CVec3 coeff_transport(const CVec3& a, const Mode& k1, const CVec3& b, const Mode& k2);
// component i: 2 pi i k2_i (a . b) : jacobian-transpose product ((grad B).A)_i
// with A=a, B=b.
CVec3 coeff_graddot(const CVec3& a, const Mode& k1, const CVec3& b, const Mode& k2);
}  // namespace detail

}  // namespace emhd
