#include <limits>
#include <stdexcept>

#include "emhd/spectral_ops.hpp"
#include "emhd/verification.hpp"
#include "oracles.hpp"
#include "test_framework.hpp"

using namespace emhd;

namespace {
SpectralField vec_field(int n, std::uint32_t tag) { return random_divfree_field(n, 1.2, 7, tag); }
SpectralField scal_field(int n, std::uint32_t tag) { return random_scalar_field(n, 1.2, 7, tag); }
}  // namespace

TEST(fft_roundtrip_exact) {
    SpectralField f = vec_field(3, 1);
    GridField g = inverse_transform(f, min_grid(3));
    SpectralField back = forward_transform(g, 3);
    CHECK(oracles::max_coeff_diff(f, back) <= 1e-14);
}

TEST(inverse_transform_matches_direct_sum) {
    SpectralField f = vec_field(2, 2);
    const int M = 8;
    GridField g = inverse_transform(f, M);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int ix = 0; ix < M; ++ix)
            for (int iy = 0; iy < M; ++iy)
                for (int iz = 0; iz < M; ++iz)
                    worst = std::max(worst, std::abs(g.at(c, ix, iy, iz) -
                                                     oracles::eval_component(f, c, ix, iy, iz, M)));
    CHECK(worst <= 1e-12);
}

TEST(forward_transform_matches_direct_dft) {
    SpectralField f = vec_field(2, 3);
    const int M = 10;
    GridField g = inverse_transform(f, M);
    SpectralField fast = forward_transform(g, 2);
    double worst = 0.0;
    fast.for_each_mode([&](const Mode& k) {
        for (int c = 0; c < 3; ++c)
            worst = std::max(worst, std::abs(fast.at(c, k) - oracles::dft_coefficient(g, c, k)));
    });
    CHECK(worst <= 1e-12);
}

TEST(forward_transform_rejects_nonfinite) {
    GridField g(4);
    g.at(0, 1, 2, 3) = std::numeric_limits<double>::quiet_NaN();
    bool threw = false;
    try {
        forward_transform(g, 1);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    CHECK(threw);
}

TEST(differentiate_single_mode) {
    SpectralField f(3);
    f.at(0, 1, 2, -1) = complexd(0.3, -0.2);
    f.at(0, -1, -2, 1) = std::conj(f.at(0, 1, 2, -1));
    SpectralField d = differentiate(f, 2);
    CHECK(std::abs(d.at(0, 1, 2, -1) - complexd(0.0, two_pi * 2.0) * complexd(0.3, -0.2)) <=
          1e-15);
    SpectralField d3 = differentiate(f, 3);
    CHECK(std::abs(d3.at(0, 1, 2, -1) - complexd(0.0, -two_pi) * complexd(0.3, -0.2)) <= 1e-15);
}

TEST(curl_of_gradient_vanishes) {
    SpectralField s = scal_field(4, 4);
    SpectralField grad(4);
    for (int axis = 1; axis <= 3; ++axis) {
        SpectralField d = differentiate(s, axis);
        const std::size_t m = grad.modes();
        for (std::size_t i = 0; i < m; ++i) grad.data()[(axis - 1) * m + i] = d.data()[i];
    }
    SpectralField c = curl(grad);
    CHECK(l2_norm(c) <= 1e-13 * (1.0 + l2_norm(grad)));
}

TEST(divergence_of_curl_vanishes) {
    SpectralField f = random_scalar_field(4, 1.0, 11, 5);
    // use three independent scalar components for a generic (non-solenoidal) field
    SpectralField g(4);
    for (int c = 0; c < 3; ++c) {
        SpectralField comp = random_scalar_field(4, 1.0, 11, 10 + c);
        const std::size_t m = g.modes();
        for (std::size_t i = 0; i < m; ++i) g.data()[c * m + i] = comp.data()[i];
    }
    CHECK(divergence_residual(curl(g)) <= 1e-13);
}

TEST(leray_divfree_idempotent) {
    SpectralField g(4);
    for (int c = 0; c < 3; ++c) {
        SpectralField comp = random_scalar_field(4, 1.0, 13, 20 + c);
        const std::size_t m = g.modes();
        for (std::size_t i = 0; i < m; ++i) g.data()[c * m + i] = comp.data()[i];
    }
    SpectralField p = leray_project(g);
    CHECK(divergence_residual(p) <= 1e-14);
    SpectralField pp = leray_project(p);
    CHECK(oracles::max_coeff_diff(p, pp) <= 1e-15);
    // orthogonality: <g - Pg, Pg> = 0
    SpectralField diff = g;
    diff -= p;
    CHECK(std::abs(inner_l2(diff, p)) <= 1e-12 * (1.0 + l2_norm(g) * l2_norm(g)));
}

TEST(truncate_ball_semantics) {
    SpectralField f(3);
    f.at(0, 2, 0, 0) = complexd(1.0, 0.0);   // |k| = 2, kept at n = 2
    f.at(0, -2, 0, 0) = complexd(1.0, 0.0);
    f.at(1, 2, 1, 0) = complexd(0.0, 1.0);   // |k| = sqrt(5) > 2, dropped
    f.at(1, -2, -1, 0) = complexd(0.0, -1.0);
    SpectralField t = truncate(f, 2);
    CHECK(t.n() == 2);
    CHECK(std::abs(t.at(0, 2, 0, 0) - complexd(1.0, 0.0)) == 0.0);
    CHECK(std::abs(t.at(1, 2, 1, 0)) == 0.0);
}

TEST(embed_preserves_and_roundtrips) {
    SpectralField f = vec_field(3, 6);
    SpectralField e = embed(f, 7);
    CHECK(e.n() == 7);
    CHECK(std::abs(sobolev_norm(e, 2.3) - sobolev_norm(f, 2.3)) <= 1e-14);
    SpectralField back = truncate(e, 3);
    CHECK(oracles::max_coeff_diff(f, back) == 0.0);
}

TEST(lambda_power_matches_brute) {
    SpectralField f = vec_field(4, 7);
    for (double s : {1.0, 1.5, -0.5, 2.6}) {
        SpectralField a = lambda_power(f, s);
        SpectralField b = oracles::lambda_brute(f, s);
        CHECK(oracles::max_coeff_diff(a, b) <= 1e-13);
    }
    SpectralField al = apply_fractional_laplacian(f, 1.2);
    CHECK(oracles::max_coeff_diff(al, oracles::lambda_brute(f, 1.2)) <= 1e-13);
    bool threw = false;
    try {
        apply_fractional_laplacian(f, -1.0);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    CHECK(threw);
}

TEST(lambda_squared_is_scaled_negative_laplacian) {
    SpectralField f = vec_field(3, 8);
    SpectralField lap(3);
    for (int axis = 1; axis <= 3; ++axis)
        lap += differentiate(differentiate(f, axis), axis);
    lap *= -1.0 / (two_pi * two_pi);
    SpectralField l2f = lambda_power(f, 2.0);
    CHECK(oracles::max_coeff_diff(lap, l2f) <= 1e-12);
}

TEST(sobolev_norm_conventions) {
    SpectralField f(2);
    f.at(0, 1, 0, 0) = complexd(0.5, 0.0);
    f.at(0, -1, 0, 0) = complexd(0.5, 0.0);
    f.at(1, 0, 0, 0) = complexd(0.25, 0.0);  // mean component
    // |f|_L2^2 = 2 * 0.25 + 0.0625
    double l2 = l2_norm(f);
    CHECK_CLOSE(l2 * l2, 0.5625, 1e-15);
    // s > 0: zero-mode weight is 1 (inhom) resp. 0 (hom)
    double hs = sobolev_norm(f, 2.0);
    CHECK_CLOSE(hs * hs, 2 * 0.25 * (1.0 + 1.0) + 0.0625, 1e-14);
    double hhs = sobolev_norm(f, 2.0, true);
    CHECK_CLOSE(hhs * hhs, 2 * 0.25, 1e-14);
    // s = 0: inhomogeneous weight 1 + |k|^0 = 2 everywhere; homogeneous norms
    // always drop the zero mode (mean-free calculus)
    double h0 = sobolev_norm(f, 0.0);
    CHECK_CLOSE(h0 * h0, 2.0 * 0.5625, 1e-14);
    double hh0 = sobolev_norm(f, 0.0, true);
    CHECK_CLOSE(hh0 * hh0, 0.5, 1e-15);
}

TEST(w1inf_matches_direct_evaluation) {
    SpectralField f = vec_field(2, 9);
    const int M = 12;
    double fast = w1inf_norm(f, M);
    double sup_f = 0.0, sup_g = 0.0;
    SpectralField d[3] = {differentiate(f, 1), differentiate(f, 2), differentiate(f, 3)};
    for (int ix = 0; ix < M; ++ix)
        for (int iy = 0; iy < M; ++iy)
            for (int iz = 0; iz < M; ++iz) {
                double v = 0.0, gsq = 0.0;
                for (int c = 0; c < 3; ++c) {
                    double fv = oracles::eval_component(f, c, ix, iy, iz, M);
                    v += fv * fv;
                    for (int a = 0; a < 3; ++a) {
                        double dv = oracles::eval_component(d[a], c, ix, iy, iz, M);
                        gsq += dv * dv;
                    }
                }
                sup_f = std::max(sup_f, std::sqrt(v));
                sup_g = std::max(sup_g, std::sqrt(gsq));
            }
    CHECK_CLOSE(fast, std::max(sup_f, sup_g), 1e-11);
}

TEST(dealiased_product_matches_convolution) {
    for (int n : {2, 4}) {
        SpectralField f = vec_field(n, 30 + n);
        SpectralField g = vec_field(n, 40 + n);
        for (auto op : {ProductOp::cross, ProductOp::dot}) {
            SpectralField fast = dealiased_product(f, g, op);
            SpectralField ref = truncate(
                oracles::convolve(f, g, op == ProductOp::cross ? oracles::Op::cross
                                                               : oracles::Op::dot, n),
                n);
            CHECK_MSG(oracles::max_coeff_diff(fast, ref) <= 1e-12,
                      "n=" + std::to_string(n));
        }
        SpectralField s = scal_field(n, 50 + n);
        SpectralField fast = dealiased_product(f, s, ProductOp::scale);
        SpectralField ref = truncate(oracles::convolve(f, s, oracles::Op::scale, n), n);
        CHECK(oracles::max_coeff_diff(fast, ref) <= 1e-12);
    }
}

TEST(corner_alias_paths_are_repaired) {
    // Only the +-n e_i outputs can alias at M = 3n; build fields concentrated
    // on the axis shell so those paths carry O(1) weight.
    const int n = 4;
    SpectralField f(n), g(n);
    auto put = [](SpectralField& h, int c, const Mode& k, complexd v) {
        h.at(c, k.x, k.y, k.z) = v;
        h.at(c, -k.x, -k.y, -k.z) = std::conj(v);
    };
    put(f, 0, {n, 0, 0}, complexd(0.7, 0.1));
    put(f, 1, {0, n, 0}, complexd(-0.3, 0.4));
    put(f, 2, {1, 1, 0}, complexd(0.2, 0.0));
    put(g, 0, {0, 0, n}, complexd(0.5, -0.5));
    put(g, 1, {n, 0, 0}, complexd(0.1, 0.9));
    put(g, 2, {0, 1, 1}, complexd(0.0, 0.3));
    for (auto op : {ProductOp::cross, ProductOp::dot}) {
        SpectralField fast = dealiased_product(f, g, op);
        SpectralField ref = truncate(
            oracles::convolve(f, g, op == ProductOp::cross ? oracles::Op::cross : oracles::Op::dot,
                              n),
            n);
        CHECK(oracles::max_coeff_diff(fast, ref) <= 1e-13);
    }
}

TEST(product_pad_size_values) {
    CHECK(product_pad_size(1) == 4);
    CHECK(product_pad_size(3) == 10);
    CHECK(product_pad_size(8) == 24);
    CHECK(product_pad_size(16) == 48);
}

TEST(mean_free_and_divergence_residual) {
    SpectralField f = vec_field(3, 60);
    CHECK(is_mean_free(f, 0.0));
    SpectralField g = f;
    g.at(0, 0, 0, 0) = complexd(0.1, 0.0);
    CHECK(!is_mean_free(g, 1e-3));
    SpectralField h(2);
    h.at(0, 1, 0, 0) = complexd(1.0, 0.0);  // k-aligned component: not div-free
    h.at(0, -1, 0, 0) = complexd(1.0, 0.0);
    CHECK(divergence_residual(h) > 0.1);
}

TEST(hermitian_symmetry_maintained) {
    SpectralField f = vec_field(4, 70);
    CHECK(f.hermitian_defect() == 0.0);
    SpectralField d = dealiased_product(f, vec_field(4, 71), ProductOp::cross);
    CHECK(d.hermitian_defect() <= 1e-15);
    f.at(0, 1, 1, 1) += complexd(0.0, 1e-3);
    CHECK(f.hermitian_defect() > 1e-4);
    f.symmetrize();
    CHECK(f.hermitian_defect() == 0.0);
}

TEST_MAIN()
