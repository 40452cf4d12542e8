#include "emhd/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace emhd {
namespace fft_detail {

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Scratch::Scratch(int M_) : M(M_) {
    std::size_t nreal = static_cast<std::size_t>(M) * M * M;
    std::size_t ncplx = static_cast<std::size_t>(M) * M * (M / 2 + 1);
    real_buf = static_cast<double*>(fftw_malloc(sizeof(double) * nreal));
    cplx_buf = reinterpret_cast<complexd*>(fftw_malloc(sizeof(fftw_complex) * ncplx));
    if (!real_buf || !cplx_buf) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_r2c_ = fftw_plan_dft_r2c_3d(M, M, M, real_buf,
                                     reinterpret_cast<fftw_complex*>(cplx_buf), FFTW_ESTIMATE);
    plan_c2r_ = fftw_plan_dft_c2r_3d(M, M, M, reinterpret_cast<fftw_complex*>(cplx_buf),
                                     real_buf, FFTW_ESTIMATE);
    if (!plan_r2c_ || !plan_c2r_) throw std::runtime_error("fftw plan creation failed");
}

Scratch::~Scratch() {
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
        fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
    }
    fftw_free(real_buf);
    fftw_free(cplx_buf);
}

void Scratch::exec_r2c() { fftw_execute(static_cast<fftw_plan>(plan_r2c_)); }
void Scratch::exec_c2r() { fftw_execute(static_cast<fftw_plan>(plan_c2r_)); }

Scratch& Scratch::local(int M) {
    thread_local std::unordered_map<int, std::unique_ptr<Scratch>> cache;
    auto it = cache.find(M);
    if (it == cache.end())
        it = cache.emplace(M, std::unique_ptr<Scratch>(new Scratch(M))).first;
    return *it->second;
}

void component_to_grid(const complexd* cube, int n, Scratch& s) {
    const int M = s.M;
    const int side = 2 * n + 1;
    const std::size_t half = static_cast<std::size_t>(M / 2 + 1);
    std::fill(s.cplx_buf, s.cplx_buf + static_cast<std::size_t>(M) * M * half,
              complexd{0.0, 0.0});
    for (int kx = -n; kx <= n; ++kx) {
        int ix = kx >= 0 ? kx : kx + M;
        for (int ky = -n; ky <= n; ++ky) {
            int iy = ky >= 0 ? ky : ky + M;
            const complexd* row =
                cube + (static_cast<std::size_t>(kx + n) * side + (ky + n)) * side + n;
            complexd* out = s.cplx_buf + (static_cast<std::size_t>(ix) * M + iy) * half;
            for (int kz = 0; kz <= n; ++kz) out[kz] = row[kz];
        }
    }
    s.exec_c2r();
}

void grid_to_component(Scratch& s, int n_out, complexd* cube) {
    const int M = s.M;
    const int n = n_out;
    const int side = 2 * n + 1;
    const std::size_t half = static_cast<std::size_t>(M / 2 + 1);
    const double scale = 1.0 / (static_cast<double>(M) * M * M);
    s.exec_r2c();
    for (int kx = -n; kx <= n; ++kx) {
        for (int ky = -n; ky <= n; ++ky) {
            for (int kz = -n; kz <= n; ++kz) {
                // Read the canonical member of each Hermitian pair and mirror
                // by conjugation, so the cube is symmetric bit-for-bit.
                bool direct = kz > 0 || (kz == 0 && is_canonical(Mode{kx, ky, 0}));
                int sx = direct ? kx : -kx, sy = direct ? ky : -ky, sz = direct ? kz : -kz;
                int ix = sx >= 0 ? sx : sx + M;
                int iy = sy >= 0 ? sy : sy + M;
                complexd v = s.cplx_buf[(static_cast<std::size_t>(ix) * M + iy) * half + sz];
                v *= scale;
                cube[(static_cast<std::size_t>(kx + n) * side + (ky + n)) * side + (kz + n)] =
                    direct ? v : std::conj(v);
            }
        }
    }
}

}  // namespace fft_detail

SpectralField forward_transform(const GridField& g, int n_out) {
    if (!g.all_finite()) throw std::invalid_argument("forward_transform: non-finite grid values");
    if (min_grid(n_out) > g.M())
        throw std::invalid_argument("forward_transform: grid too small for requested truncation");
    auto& s = fft_detail::Scratch::local(g.M());
    SpectralField f(n_out);
    for (int c = 0; c < 3; ++c) {
        std::memcpy(s.real_buf, g.component(c), sizeof(double) * g.points());
        fft_detail::grid_to_component(s, n_out, f.component(c));
    }
    return f;
}

SpectralField forward_transform(const GridField& g) {
    return forward_transform(g, g.M() / 2 - 1);
}

GridField inverse_transform(const SpectralField& f, int M) {
    if (M < min_grid(f.n()))
        throw std::invalid_argument("inverse_transform: grid too small for truncation");
    auto& s = fft_detail::Scratch::local(M);
    GridField g(M);
    for (int c = 0; c < 3; ++c) {
        fft_detail::component_to_grid(f.component(c), f.n(), s);
        std::memcpy(g.component(c), s.real_buf, sizeof(double) * g.points());
    }
    return g;
}

}  // namespace emhd
