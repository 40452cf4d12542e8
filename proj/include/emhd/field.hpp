#pragma once
// Dense storage for truncated vector fields on T^3.
//
// SpectralField holds complex coefficients B_hat(k), k in the cube [-n,n]^3,
// component-major. Real-valued fields satisfy the Hermitian symmetry
// B_hat(-k) = conj(B_hat(k)); every operation in the solver preserves it.
//
// GridField holds real point values on a uniform M^3 collocation grid,
// x_j = j/M, component-major. M is kept even so padded product grids and the
// half-spectrum FFT layout line up.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "emhd/base.hpp"

namespace emhd {

class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(int n) : n_(n), side_(2 * n + 1) {
        if (n < 0) throw std::invalid_argument("SpectralField: truncation radius must be >= 0");
        a_.assign(3 * static_cast<std::size_t>(side_) * side_ * side_, complexd{0.0, 0.0});
    }

    int n() const { return n_; }
    int side() const { return side_; }
    std::size_t modes() const { return static_cast<std::size_t>(side_) * side_ * side_; }

    std::size_t index(int kx, int ky, int kz) const {
        return (static_cast<std::size_t>(kx + n_) * side_ + (ky + n_)) * side_ + (kz + n_);
    }

    complexd& at(int c, int kx, int ky, int kz) { return a_[c * modes() + index(kx, ky, kz)]; }
    const complexd& at(int c, int kx, int ky, int kz) const {
        return a_[c * modes() + index(kx, ky, kz)];
    }
    complexd& at(int c, const Mode& k) { return at(c, k.x, k.y, k.z); }
    const complexd& at(int c, const Mode& k) const { return at(c, k.x, k.y, k.z); }

    CVec3 vec(const Mode& k) const {
        std::size_t i = index(k.x, k.y, k.z), m = modes();
        return {a_[i], a_[m + i], a_[2 * m + i]};
    }
    void set_vec(const Mode& k, const CVec3& v) {
        std::size_t i = index(k.x, k.y, k.z), m = modes();
        a_[i] = v[0];
        a_[m + i] = v[1];
        a_[2 * m + i] = v[2];
    }

    complexd* data() { return a_.data(); }
    const complexd* data() const { return a_.data(); }
    complexd* component(int c) { return a_.data() + c * modes(); }
    const complexd* component(int c) const { return a_.data() + c * modes(); }

    // Iterates k over the full cube in lexicographic order.
    template <typename F>
    void for_each_mode(F&& f) const {
        for (int kx = -n_; kx <= n_; ++kx)
            for (int ky = -n_; ky <= n_; ++ky)
                for (int kz = -n_; kz <= n_; ++kz) f(Mode{kx, ky, kz});
    }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    // this += s * o
    void axpy(double s, const SpectralField& o);

    bool same_shape(const SpectralField& o) const { return n_ == o.n_; }
    bool all_finite() const;
    // max_k |B_hat(-k) - conj(B_hat(k))|
    double hermitian_defect() const;
    // Restores exact Hermitian symmetry by averaging each pair.
    void symmetrize();

  private:
    int n_ = 0;
    int side_ = 1;
    std::vector<complexd> a_{3, complexd{0.0, 0.0}};
};

class GridField {
  public:
    GridField() = default;
    explicit GridField(int M) : M_(M) {
        if (M < 2 || M % 2 != 0) throw std::invalid_argument("GridField: M must be even and >= 2");
        v_.assign(3 * static_cast<std::size_t>(M) * M * M, 0.0);
    }

    int M() const { return M_; }
    std::size_t points() const { return static_cast<std::size_t>(M_) * M_ * M_; }

    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * M_ + iy) * M_ + iz;
    }
    double& at(int c, int ix, int iy, int iz) { return v_[c * points() + index(ix, iy, iz)]; }
    const double& at(int c, int ix, int iy, int iz) const {
        return v_[c * points() + index(ix, iy, iz)];
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double* component(int c) { return v_.data() + c * points(); }
    const double* component(int c) const { return v_.data() + c * points(); }

    bool all_finite() const;

  private:
    int M_ = 0;
    std::vector<double> v_;
};

}  // namespace emhd
