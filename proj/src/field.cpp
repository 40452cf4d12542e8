#include "emhd/field.hpp"

#include <cmath>

namespace emhd {

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : a_) v *= s;
    return *this;
}

void SpectralField::axpy(double s, const SpectralField& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += s * o.a_[i];
}

bool SpectralField::all_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int kx = -n_; kx <= n_; ++kx)
            for (int ky = -n_; ky <= n_; ++ky)
                for (int kz = -n_; kz <= n_; ++kz) {
                    complexd d = at(c, kx, ky, kz) - std::conj(at(c, -kx, -ky, -kz));
                    worst = std::max(worst, std::abs(d));
                }
    return worst;
}

void SpectralField::symmetrize() {
    for (int c = 0; c < 3; ++c)
        for (int kx = -n_; kx <= n_; ++kx)
            for (int ky = -n_; ky <= n_; ++ky)
                for (int kz = -n_; kz <= n_; ++kz) {
                    if (!is_canonical(Mode{kx, ky, kz})) continue;
                    complexd a = at(c, kx, ky, kz);
                    complexd b = std::conj(at(c, -kx, -ky, -kz));
                    complexd m = 0.5 * (a + b);
                    at(c, kx, ky, kz) = m;
                    at(c, -kx, -ky, -kz) = std::conj(m);
                }
}

bool GridField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace emhd
