#include "emhd/initial_data.hpp"

#include <cmath>
#include <stdexcept>

#include "emhd/noise.hpp"
#include "emhd/rng.hpp"

namespace emhd {

namespace {

// Wavevector -> counter pair, independent of the truncation radius so that
// random fields nest across resolutions. 11 bits per component (|k| <= 1023).
void mode_counter(const Mode& k, int draw, std::uint32_t& a, std::uint32_t& b) {
    std::uint64_t packed = (static_cast<std::uint64_t>(k.x + 1024) << 22) |
                           (static_cast<std::uint64_t>(k.y + 1024) << 11) |
                           static_cast<std::uint64_t>(k.z + 1024);
    a = static_cast<std::uint32_t>(packed & 0xffffffffu);
    b = static_cast<std::uint32_t>((packed >> 32) << 8) | static_cast<std::uint32_t>(draw);
}

SpectralField random_hs_field(int n, double amplitude, double decay, std::uint64_t seed) {
    SpectralField out(n);
    RngStream stream(seed, 0, RngDomain::initial_data);
    const long n2 = static_cast<long>(n) * n;
    out.for_each_mode([&](const Mode& k) {
        long k2 = norm2(k);
        if (k2 == 0 || k2 > n2 || !is_canonical(k)) return;
        double rho = amplitude * std::pow(1.0 + std::sqrt(static_cast<double>(k2)), -(decay + 2.0));
        CVec3 v;
        for (int c = 0; c < 3; ++c) {
            std::uint32_t a, b;
            mode_counter(k, 2 * c, a, b);
            double re = stream.normal(a, b);
            mode_counter(k, 2 * c + 1, a, b);
            double im = stream.normal(a, b);
            v[c] = rho * complexd(re, im);
        }
        out.set_vec(k, v);
        out.set_vec(-k, conj(v));
    });
    return leray_project(out);
}

}  // namespace

SpectralField make_initial_data(const InitSpec& spec, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_initial_data: n must be >= 1");
    switch (spec.family) {
        case InitFamily::zero:
            return SpectralField(n);
        case InitFamily::single_mode: {
            if (norm2(spec.mode) == 0)
                throw std::invalid_argument("make_initial_data: single_mode wavevector must be nonzero");
            if (norm2(spec.mode) > static_cast<long>(n) * n)
                throw std::invalid_argument("make_initial_data: single_mode wavevector outside truncation");
            Vec3 e1, e2;
            polarization_frame(spec.mode, e1, e2);
            SpectralField out(n);
            CVec3 v;
            for (int c = 0; c < 3; ++c) v[c] = complexd(0.5 * spec.amplitude * e1[c], 0.0);
            out.set_vec(spec.mode, v);
            out.set_vec(-spec.mode, conj(v));
            return out;
        }
        case InitFamily::beltrami: {
            if (spec.shell < 1) throw std::invalid_argument("make_initial_data: beltrami shell must be >= 1");
            if (spec.shell > n)
                throw std::invalid_argument("make_initial_data: beltrami shell outside truncation");
            SpectralField out(n);
            Mode m{spec.shell, 0, 0};
            // (0, sin(2 pi m x1), cos(2 pi m x1)): curl B = 2 pi m B, Hall term zero.
            CVec3 v{complexd(0.0, 0.0), complexd(0.0, -0.5 * spec.amplitude),
                    complexd(0.5 * spec.amplitude, 0.0)};
            out.set_vec(m, v);
            out.set_vec(-m, conj(v));
            return out;
        }
        case InitFamily::random_hs:
            return random_hs_field(n, spec.amplitude, spec.decay, seed);
        case InitFamily::checkpoint:
            throw std::logic_error("make_initial_data: checkpoint family is resolved by the caller");
    }
    throw std::logic_error("make_initial_data: unknown family");
}

}  // namespace emhd
