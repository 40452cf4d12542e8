#pragma once
// FFT bridge between SpectralField (cube of coefficients, basis e^{2 pi i k.x})
// and GridField (values at x_j = j/M). Real fields only: transforms run through
// FFTW's half-spectrum r2c/c2r path, and extraction mirrors canonical modes by
// explicit conjugation so the coefficient cube is Hermitian to the last bit.
//
// Plans are FFTW_ESTIMATE (deterministic) and cached per thread per grid size;
// plan creation/destruction is serialized internally. Results do not depend on
// how work is distributed across threads.

#include "emhd/field.hpp"

namespace emhd {

// Grid values -> coefficients, n = M/2 - 1 (largest unambiguous truncation).
SpectralField forward_transform(const GridField& g);
// Grid values -> coefficients on the cube [-n_out, n_out]^3; 2*n_out + 2 <= M.
SpectralField forward_transform(const GridField& g, int n_out);

// Coefficients -> grid values on M^3 points; requires M >= 2n+2. M larger than
// 2n+2 zero-pads, which is how product grids are oversampled.
GridField inverse_transform(const SpectralField& f, int M);

// Smallest valid collocation size for truncation n.
inline int min_grid(int n) { return 2 * n + 2; }

namespace fft_detail {

// Per-thread scratch: one real M^3 buffer, one complex M^2*(M/2+1) buffer, and
// the r2c/c2r plans bound to them. Obtain via local(); never share across
// threads.
class Scratch {
  public:
    static Scratch& local(int M);

    int M;
    double* real_buf;     // M^3
    complexd* cplx_buf;   // M*M*(M/2+1)
    void exec_r2c();      // real_buf -> cplx_buf, unnormalized
    void exec_c2r();      // cplx_buf -> real_buf; clobbers cplx_buf

    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
    ~Scratch();

  private:
    explicit Scratch(int M);
    void* plan_r2c_;
    void* plan_c2r_;
};

// Embed one coefficient component (cube radius n) into the zeroed half-spectrum
// buffer of s, run c2r, leaving point values in s.real_buf.
void component_to_grid(const complexd* cube, int n, Scratch& s);
// Run r2c on s.real_buf and extract the cube [-n_out,n_out]^3 (normalized by
// 1/M^3, canonical halves mirrored by conjugation) into `cube`.
void grid_to_component(Scratch& s, int n_out, complexd* cube);

}  // namespace fft_detail

}  // namespace emhd
