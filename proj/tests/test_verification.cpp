#include "emhd/verification.hpp"

#include <cmath>
#include <stdexcept>

#include "emhd/integrator.hpp"
#include "oracles.hpp"
#include "test_framework.hpp"

using namespace emhd;

namespace {

const CheckReport* find_report(const std::vector<CheckReport>& reports, const std::string& name) {
    for (const auto& r : reports)
        if (r.name == name) return &r;
    return nullptr;
}

// [Lambda^s, f] g with f the (vector) multiplier and g scalar, by direct
// convolution with the multiplier |k|^s - |k2|^s riding each transfer.
SpectralField d1_oracle(const SpectralField& f, const SpectralField& g, double s, int n_out) {
    SpectralField h(n_out);
    const int nf = f.n(), ng = g.n();
    for (int ax = -nf; ax <= nf; ++ax)
        for (int ay = -nf; ay <= nf; ++ay)
            for (int az = -nf; az <= nf; ++az) {
                CVec3 fa = f.vec({ax, ay, az});
                for (int bx = -ng; bx <= ng; ++bx)
                    for (int by = -ng; by <= ng; ++by)
                        for (int bz = -ng; bz <= ng; ++bz) {
                            int kx = ax + bx, ky = ay + by, kz = az + bz;
                            if (std::abs(kx) > n_out || std::abs(ky) > n_out ||
                                std::abs(kz) > n_out)
                                continue;
                            double m2 = static_cast<double>(bx) * bx +
                                        static_cast<double>(by) * by +
                                        static_cast<double>(bz) * bz;
                            double k2 = static_cast<double>(kx) * kx +
                                        static_cast<double>(ky) * ky +
                                        static_cast<double>(kz) * kz;
                            double mult = (k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * s)) -
                                          (m2 == 0.0 ? 0.0 : std::pow(m2, 0.5 * s));
                            complexd gb = g.vec({bx, by, bz})[0];
                            for (int c = 0; c < 3; ++c)
                                h.at(c, kx, ky, kz) += fa[c] * gb * mult;
                        }
            }
    return h;
}

}  // namespace

TEST(identity_suite_passes) {
    AblationFlags flags;
    auto reports = run_verification("identities", flags, 2026);
    for (const char* name : {"hall-orthogonality", "transport-skew", "ito-drift-cancellation",
                             "bony-reconstruction", "divergence-preservation",
                             "bernstein-partition"})
        CHECK_MSG(find_report(reports, name) != nullptr, name);
    for (const auto& r : reports) CHECK_MSG(r.pass, r.name + " measured " + std::to_string(r.measured));
}

TEST(aliased_products_break_hall_orthogonality) {
    SpectralField B = random_divfree_field(8, 1.5, 2026, 1);
    CheckReport good = check_hall_orthogonality(B, false);
    CheckReport bad = check_hall_orthogonality(B, true);
    CHECK(good.pass);
    CHECK(!bad.pass);
    CHECK(bad.name == "hall-orthogonality[aliased]");
    CHECK(bad.measured > 1e3 * good.measured);
}

TEST(longitudinal_noise_breaks_transport_skew) {
    AblationFlags flags;
    flags.non_divfree_noise = true;
    auto reports = run_verification("identities", flags, 2026);
    const CheckReport* skew = find_report(reports, "transport-skew");
    REQUIRE(skew != nullptr);
    CHECK(!skew->pass);
    // The Hall and Bony identities do not involve the noise basis.
    for (const char* name : {"hall-orthogonality", "bony-reconstruction"}) {
        const CheckReport* r = find_report(reports, name);
        REQUIRE(r != nullptr);
        CHECK_MSG(r->pass, name);
    }
}

TEST(perturbed_profile_breaks_partition) {
    AblationFlags flags;
    flags.perturbed_lp_profile = true;
    auto reports = run_verification("bernstein", flags, 2026);
    REQUIRE(reports.size() == 1);
    CHECK(!reports[0].pass);
    CHECK(reports[0].measured > 1e-3);

    flags.perturbed_lp_profile = false;
    auto clean = run_verification("bernstein", flags, 2026);
    REQUIRE(clean.size() == 1);
    CHECK(clean[0].pass);
}

TEST(d1_commutator_matches_convolution_oracle) {
    const double s = 2.6;
    SpectralField f = random_divfree_field(2, 1.5, 7, 1);
    SpectralField g = random_scalar_field(2, 1.5, 7, 2);
    const int ne = 4;
    SpectralField fe = embed(f, ne), ge = embed(g, ne);
    SpectralField lib = lambda_power(dealiased_product(fe, ge, ProductOp::scale), s);
    lib -= dealiased_product(fe, lambda_power(ge, s), ProductOp::scale);
    SpectralField ref = truncate(d1_oracle(f, g, s, ne), ne);
    double scale = 1.0 + l2_norm(ref);
    CHECK(oracles::max_coeff_diff(lib, ref) <= 1e-11 * scale);
}

TEST(d2_commutator_matches_convolution_oracle) {
    const double s = 2.6;
    SpectralField c = random_divfree_field(2, 1.5, 8, 1);
    SpectralField u = random_divfree_field(2, 1.5, 8, 2);
    const int ne = 4;
    SpectralField ce = embed(c, ne), ue = embed(u, ne);
    SpectralField lib = lambda_power(transport_apply(ce, ue), s);
    lib -= transport_apply(ce, lambda_power(ue, s));
    SpectralField ref = truncate(oracles::commutator_convolve(c, u, s, ne), ne);
    double scale = 1.0 + l2_norm(ref);
    CHECK(oracles::max_coeff_diff(lib, ref) <= 1e-11 * scale);
}

TEST(d3_composition_matches_brute_oracle) {
    const double s = 3.0;
    SpectralField c = random_divfree_field(1, 1.5, 9, 1);
    SpectralField u = random_divfree_field(2, 1.5, 9, 2);
    const int ne = u.n() + 2 * c.n();
    SpectralField ce = embed(c, ne), ue = embed(u, ne);

    SpectralField Bu = transport_apply(ce, ue);
    SpectralField lib = lambda_power(transport_apply(ce, Bu), s);
    SpectralField bab = transport_apply(ce, lambda_power(Bu, s));
    bab *= 2.0;
    lib -= bab;
    lib += transport_apply(ce, transport_apply(ce, lambda_power(ue, s)));

    auto T = [&](const SpectralField& x) {
        return truncate(oracles::transport_convolve(c, x, ne), ne);
    };
    SpectralField ref = oracles::lambda_brute(T(T(ue)), s);
    SpectralField mid = T(oracles::lambda_brute(T(ue), s));
    mid *= 2.0;
    ref -= mid;
    ref += T(T(oracles::lambda_brute(ue, s)));

    double scale = 1.0 + l2_norm(ref);
    CHECK(oracles::max_coeff_diff(lib, ref) <= 1e-11 * scale);
}

TEST(commutator_guards_reject_bad_exponents) {
    SpectralField c = random_divfree_field(2, 1.5, 10, 1);
    SpectralField u = random_divfree_field(2, 1.5, 10, 2);
    SpectralField g = random_scalar_field(2, 1.5, 10, 3);
    auto throws = [](auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument&) {
            return true;
        }
        return false;
    };
    VerificationThresholds thr;
    CHECK(throws([&] { check_commutator_d1(c, g, 0.0, thr.d1_ratio_max); }));
    CHECK(throws([&] { check_commutator_d2(c, u, 2.0, 0.0, thr.d2_ratio_max); }));
    CHECK(throws([&] { check_commutator_d2(c, u, 3.0, -3.5, thr.d2_ratio_max); }));
    CHECK(throws([&] { check_commutator_d3(c, u, 2.0, thr.d3_ratio_max); }));
    SpectralField biased = c;
    biased.at(0, 0, 0, 0) = complexd(0.5, 0.0);
    CHECK(throws([&] { check_commutator_d3(biased, u, 3.0, thr.d3_ratio_max); }));
}

TEST(uniqueness_zero_delta_is_bitwise_identical) {
    SolverConfig cfg;
    cfg.n = 6;
    cfg.K = 3;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 1.0;
    cfg.T = 0.02;
    cfg.dt = 1e-3;
    cfg.r = 2.0;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 3.0;
    cfg.init.decay = 3.1;
    UniquenessOutcome same = uniqueness_outcome(cfg, 0.0);
    CHECK(same.identical);
    CHECK(same.terminal_diff == 0.0);

    UniquenessOutcome moved = uniqueness_outcome(cfg, 1e-8);
    CHECK(!moved.identical);
    CHECK(moved.terminal_diff > 0.0);
    CHECK(std::isfinite(moved.sup_ratio) && moved.sup_ratio > 0.0);

    cfg.s = 2.9;  // the coupling argument needs s > 3
    bool threw = false;
    try {
        uniqueness_outcome(cfg, 0.0);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    CHECK(threw);
}

TEST(cutoff_consistency_pre_crossing_agreement) {
    SolverConfig cfg;
    cfg.n = 4;
    cfg.K = 3;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 0.0;
    cfg.T = 0.05;
    cfg.dt = 2.5e-4;
    cfg.diag_interval = 1;
    cfg.hall_enabled = true;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 2.5;
    // r far above the trajectory: never crosses, trajectories identical.
    cfg.r = 1e9;
    CutoffConsistencyOutcome high = cutoff_consistency_outcome(cfg);
    CHECK(!high.crossed);
    CHECK(high.max_diff_before == 0.0);
    CHECK(high.pass);

    // r below the initial sup-norm: crosses at t = 0 and diverges afterwards.
    SpectralField B0 = truncate(
        leray_project(make_initial_data(cfg.init, cfg.n, cfg.seed)), cfg.n);
    cfg.r = w1inf_norm(B0, 4 * cfg.n);  // w(0) > r/2 immediately
    CutoffConsistencyOutcome low = cutoff_consistency_outcome(cfg);
    CHECK(low.crossed);
    CHECK(low.first_exceed_t == 0.0);
    CHECK(low.max_diff_before == 0.0);
    CHECK(low.max_diff_after > 0.0);
    CHECK(low.pass);
}

TEST(unknown_selector_is_rejected) {
    AblationFlags flags;
    bool threw = false;
    try {
        run_verification("nonsense", flags, 0);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    CHECK(threw);
}

TEST(report_serialization_is_ndjson) {
    CheckReport rep;
    rep.name = "demo";
    rep.inputs = "n=4";
    rep.measured = 0.5;
    rep.threshold = 1.0;
    rep.pass = true;
    rep.runtime_sec = 0.25;
    rep.notes = "ok";
    std::string line = to_ndjson(rep);
    CHECK(line.front() == '{' && line.back() == '}');
    CHECK(line.find("\"name\":\"demo\"") != std::string::npos);
    CHECK(line.find("\"measured\":0.5") != std::string::npos);
    CHECK(line.find("\"pass\":true") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);
}

TEST_MAIN()
