#include "emhd/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "emhd/checkpoint.hpp"
#include "emhd/initial_data.hpp"
#include "emhd/rng.hpp"

namespace emhd {

namespace {

constexpr double tiny = 1e-300;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void mode_counter(const Mode& k, int draw, std::uint32_t& a, std::uint32_t& b) {
    std::uint64_t packed = (static_cast<std::uint64_t>(k.x + 1024) << 22) |
                           (static_cast<std::uint64_t>(k.y + 1024) << 11) |
                           static_cast<std::uint64_t>(k.z + 1024);
    a = static_cast<std::uint32_t>(packed & 0xffffffffu);
    b = static_cast<std::uint32_t>((packed >> 32) << 8) | static_cast<std::uint32_t>(draw);
}

SpectralField random_field(int n, double decay, std::uint64_t seed, std::uint32_t tag,
                           RngDomain domain, int components) {
    SpectralField out(n);
    RngStream stream(seed, tag, domain);
    const long n2 = static_cast<long>(n) * n;
    out.for_each_mode([&](const Mode& k) {
        long k2 = norm2(k);
        if (k2 == 0 || k2 > n2 || !is_canonical(k)) return;
        double rho = std::pow(1.0 + std::sqrt(static_cast<double>(k2)), -decay);
        CVec3 v{};
        for (int c = 0; c < components; ++c) {
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
    return out;
}

// Pointwise sup of |f| and |grad f| (all components) on a 4x oversampled grid.
double sup_norm(const SpectralField& f) {
    int M = std::max(min_grid(f.n()), 4 * f.n());
    if (M % 2) ++M;
    GridField g = inverse_transform(f, M);
    double m2 = 0.0;
    const std::size_t pts = g.points();
    for (std::size_t i = 0; i < pts; ++i) {
        double v = g.data()[i] * g.data()[i] + g.data()[pts + i] * g.data()[pts + i] +
                   g.data()[2 * pts + i] * g.data()[2 * pts + i];
        m2 = std::max(m2, v);
    }
    return std::sqrt(m2);
}

double grad_sup_norm(const SpectralField& f) {
    int M = std::max(min_grid(f.n()), 4 * f.n());
    if (M % 2) ++M;
    std::vector<double> acc(static_cast<std::size_t>(M) * M * M, 0.0);
    for (int axis = 1; axis <= 3; ++axis) {
        GridField g = inverse_transform(differentiate(f, axis), M);
        const std::size_t pts = g.points();
        for (std::size_t i = 0; i < pts; ++i)
            acc[i] += g.data()[i] * g.data()[i] + g.data()[pts + i] * g.data()[pts + i] +
                      g.data()[2 * pts + i] * g.data()[2 * pts + i];
    }
    double m2 = 0.0;
    for (double v : acc) m2 = std::max(m2, v);
    return std::sqrt(m2);
}

SpectralField field_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    return d;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    const std::size_t total = 3 * a.modes();
    for (std::size_t i = 0; i < total; ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

// Hall term with dealiasing disabled (negative control for the orthogonality
// identity).  A subtlety dictates the form used here: in rotational form,
// curl of the pointwise product (J x B) read back by a plain DFT, the pairing
// <hall, B> telescopes to the grid quadrature of the pointwise-zero integrand
// ((J x B) . J)(x_j) and therefore vanishes to roundoff on ANY collocation
// grid -- aliasing corrupts the coefficients but conserves this invariant, the
// classical reason unfiltered collocation schemes in rotational form conserve
// energy.  The conservative (divergence) form J x B = div(B (x) B) - grad
// (|B|^2/2) is the standard alternative evaluation, and its cancellation
// instead relies on the quadrature being exact for the CUBIC integrand
// B_i B_j d_j J_i, i.e. on the zero-padding margin.  Evaluating that form on
// the unpadded grid is therefore the faithful "dealiasing disabled" control:
// with 3/2-rule padding its retained bins are convolution-exact and the
// identity holds to roundoff, while the unpadded read-back leaves an O(aliased
// triple-product) residual.  (curl kills the gradient part exactly, so only
// the tensor divergence is formed.)
SpectralField aliased_hall_term(const SpectralField& B) {
    const int n = B.n();
    const int M = min_grid(n);  // unpadded: no 3/2-rule margin
    const double two_pi = 2.0 * std::acos(-1.0);
    GridField Bg = inverse_transform(B, M);
    SpectralField G(n);
    for (int i = 0; i < 3; ++i) {
        GridField row(M);
        for (int j = 0; j < 3; ++j) {
            const double* a = Bg.component(i);
            const double* b = Bg.component(j);
            double* p = row.component(j);
            for (std::size_t x = 0; x < row.points(); ++x) p[x] = a[x] * b[x];
        }
        SpectralField T = forward_transform(row, n);  // aliased read-back
        // G_i = div_j (B_i B_j): the derivative lands on the aliased bins.
        G.for_each_mode([&](const Mode& k) {
            complexd div = two_pi * complexd(0.0, 1.0) *
                           (static_cast<double>(k.x) * T.at(0, k) +
                            static_cast<double>(k.y) * T.at(1, k) +
                            static_cast<double>(k.z) * T.at(2, k));
            G.at(i, k) = div;
        });
    }
    return curl(truncate(G, n));
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SpectralField initial_field(const SolverConfig& cfg) {
    SpectralField B0 = make_initial_data(cfg.init, cfg.n, cfg.seed);
    return truncate(leray_project(B0), cfg.n);
}

}  // namespace

SpectralField random_divfree_field(int n, double decay, std::uint64_t seed, std::uint32_t tag) {
    return leray_project(random_field(n, decay, seed, tag, RngDomain::test_fields, 3));
}

SpectralField random_scalar_field(int n, double decay, std::uint64_t seed, std::uint32_t tag) {
    return random_field(n, decay, seed, tag, RngDomain::test_fields, 1);
}

std::string to_ndjson(const CheckReport& r) {
    std::string s = "{\"name\":\"" + r.name + "\"";
    s += ",\"inputs\":\"" + r.inputs + "\"";
    s += ",\"measured\":" + format_double(r.measured);
    s += ",\"threshold\":" + format_double(r.threshold);
    s += ",\"pass\":";
    s += r.pass ? "true" : "false";
    s += ",\"runtime_sec\":" + format_double(r.runtime_sec);
    s += ",\"notes\":\"" + r.notes + "\"}";
    return s;
}

CheckReport check_hall_orthogonality(const SpectralField& B, bool aliased, double threshold) {
    Timer timer;
    CheckReport rep;
    rep.name = aliased ? "hall-orthogonality[aliased]" : "hall-orthogonality";
    rep.inputs = "n=" + std::to_string(B.n());
    SpectralField hall = aliased ? aliased_hall_term(B) : hall_term(B);
    double denom = l2_norm(curl(B)) * l2_norm(B) * l2_norm(B) + tiny;
    rep.measured = std::abs(inner_l2(hall, B)) / denom;
    rep.threshold = threshold;
    rep.pass = rep.measured <= threshold;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_transport_skew(const NoiseBasis& basis, const SpectralField& B,
                                 double threshold) {
    Timer timer;
    CheckReport rep;
    rep.name = "transport-skew";
    rep.inputs = "K=" + std::to_string(basis.K()) + " n=" + std::to_string(B.n());
    double worst = 0.0;
    for (int k = 0; k < basis.K(); ++k) {
        SpectralField c = basis.n == B.n() ? basis.coeff_fields[k]
                                           : noise_field_spectral(basis.fields[k], B.n());
        SpectralField Tb = transport_apply(c, B);
        double denom = l2_norm(Tb) * l2_norm(B) + tiny;
        worst = std::max(worst, std::abs(inner_l2(Tb, B)) / denom);
    }
    rep.measured = worst;
    rep.threshold = threshold;
    rep.pass = worst <= threshold;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_ito_drift_cancellation(const NoiseBasis& basis, const SpectralField& B,
                                         double s_variant, double threshold) {
    Timer timer;
    CheckReport rep;
    rep.name = "ito-drift-cancellation";
    rep.inputs = "K=" + std::to_string(basis.K()) + " n=" + std::to_string(B.n());
    double worst = 0.0;
    double worst_s = 0.0;
    for (int k = 0; k < basis.K(); ++k) {
        SpectralField c = basis.n == B.n() ? basis.coeff_fields[k]
                                           : noise_field_spectral(basis.fields[k], B.n());
        SpectralField Tb = transport_apply(c, B);
        SpectralField TTb = transport_apply(c, Tb);
        double tb2 = l2_norm(Tb) * l2_norm(Tb);
        worst = std::max(worst, std::abs(inner_l2(TTb, B) + tb2) / (tb2 + tiny));
        if (s_variant > 0.0) {
            // |[Lambda^s, T_k] B| against the transport-commutator bound shape
            // 2 |c|_{H^s} |B|_{H^s}; reported only.
            SpectralField comm = lambda_power(Tb, s_variant);
            comm -= transport_apply(c, lambda_power(B, s_variant));
            double denom = 2.0 * sobolev_norm(c, s_variant) * sobolev_norm(B, s_variant) + tiny;
            worst_s = std::max(worst_s, l2_norm(comm) / denom);
        }
    }
    rep.measured = worst;
    rep.threshold = threshold;
    rep.pass = worst <= threshold;
    if (s_variant > 0.0)
        rep.notes = "s-variant ratio max " + format_double(worst_s) + " at s=" +
                    format_double(s_variant);
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_bony_reconstruction(const SpectralField& u, const SpectralField& v,
                                      double threshold) {
    Timer timer;
    CheckReport rep;
    rep.name = "bony-reconstruction";
    rep.inputs = "nu=" + std::to_string(u.n()) + " nv=" + std::to_string(v.n());
    DyadicProfile profile;
    BonyParts parts = bony_decompose(u, v, profile);
    SpectralField sum = parts.low_high;
    sum += parts.high_low;
    sum += parts.resonant;
    SpectralField ref = dealiased_product(u, v, ProductOp::dot);
    double denom = l2_norm(ref) + tiny;
    sum -= ref;
    rep.measured = l2_norm(sum) / denom;
    rep.threshold = threshold;
    rep.pass = rep.measured <= threshold;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_divergence_preservation(const SolverConfig& cfg, double threshold) {
    Timer timer;
    CheckReport rep;
    rep.name = "divergence-preservation";
    rep.inputs = "n=" + std::to_string(cfg.n) + " scheme=" +
                 (cfg.scheme == Scheme::exponential_em ? "exponential-EM" : "stratonovich-heun") +
                 " steps=" + std::to_string(std::lround(cfg.T / cfg.dt));
    TrajectoryRecord rec = run_trajectory(cfg, 0);
    double worst = 0.0;
    for (const auto& row : rec.rows) worst = std::max(worst, row.div_residual);
    rep.measured = worst;
    rep.threshold = threshold;
    rep.pass = worst <= threshold && !rec.final_state.blown_up;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_commutator_d1(const SpectralField& f, const SpectralField& g, double s,
                                double ratio_max) {
    Timer timer;
    CheckReport rep;
    rep.name = "commutator-d1";
    rep.inputs = "nf=" + std::to_string(f.n()) + " ng=" + std::to_string(g.n()) +
                 " s=" + format_double(s);
    if (!(s > 0.0)) throw std::invalid_argument("commutator-d1 requires s > 0");
    const int ne = f.n() + g.n();
    SpectralField fe = embed(f, ne);
    SpectralField ge = embed(g, ne);
    SpectralField fg = dealiased_product(fe, ge, ProductOp::scale);
    SpectralField lhs_field = lambda_power(fg, s);
    lhs_field -= dealiased_product(fe, lambda_power(ge, s), ProductOp::scale);
    double lhs = l2_norm(lhs_field);
    double rhs = grad_sup_norm(f) * l2_norm(lambda_power(g, s - 1.0)) +
                 l2_norm(lambda_power(f, s)) * sup_norm(g);
    rep.threshold = ratio_max;
    if (rhs == 0.0) {
        rep.measured = lhs;
        rep.pass = lhs <= 1e-12;
        rep.notes = "degenerate right-hand side";
    } else {
        rep.measured = lhs / rhs;
        rep.pass = rep.measured <= ratio_max;
    }
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_commutator_d2(const SpectralField& c, const SpectralField& u, double s,
                                double gamma_exp, double ratio_max) {
    Timer timer;
    CheckReport rep;
    rep.name = "commutator-d2";
    rep.inputs = "nc=" + std::to_string(c.n()) + " nu=" + std::to_string(u.n()) +
                 " s=" + format_double(s) + " gamma=" + format_double(gamma_exp);
    if (!(s > 2.5)) throw std::invalid_argument("commutator-d2 requires s > 5/2");
    if (!(gamma_exp > -s)) throw std::invalid_argument("commutator-d2 requires gamma > -s");
    const int ne = c.n() + u.n();
    SpectralField ce = embed(c, ne);
    SpectralField ue = embed(u, ne);
    SpectralField comm = lambda_power(transport_apply(ce, ue), s);
    comm -= transport_apply(ce, lambda_power(ue, s));
    double lhs = l2_norm(lambda_power(comm, gamma_exp));
    double rhs = sobolev_norm(c, s) * sobolev_norm(u, s + gamma_exp) +
                 sobolev_norm(c, s + gamma_exp) * sobolev_norm(u, s);
    rep.measured = lhs / (rhs + tiny);
    rep.threshold = ratio_max;
    rep.pass = rep.measured <= ratio_max;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_commutator_d3(const SpectralField& c, const SpectralField& u, double s,
                                double ratio_max) {
    Timer timer;
    CheckReport rep;
    rep.name = "commutator-d3";
    rep.inputs = "nc=" + std::to_string(c.n()) + " nu=" + std::to_string(u.n()) +
                 " s=" + format_double(s);
    if (!(s > 2.5)) throw std::invalid_argument("commutator-d3 requires s > 5/2");
    if (!is_mean_free(c, 1e-14))
        throw std::invalid_argument("commutator-d3 requires mean-free c");
    const int ne = u.n() + 2 * c.n();
    SpectralField ce = embed(c, ne);
    SpectralField ue = embed(u, ne);
    SpectralField Bu = transport_apply(ce, ue);
    SpectralField dc = lambda_power(transport_apply(ce, Bu), s);       // A B B u
    SpectralField bab = transport_apply(ce, lambda_power(Bu, s));      // B A B u
    bab *= 2.0;
    dc -= bab;
    dc += transport_apply(ce, transport_apply(ce, lambda_power(ue, s)));  // B B A u
    double lhs = l2_norm(dc);
    double h1 = sobolev_norm(c, s + 1.0);
    double rhs = h1 * h1 * sobolev_norm(u, s);
    rep.measured = lhs / (rhs + tiny);
    rep.threshold = ratio_max;
    rep.pass = rep.measured <= ratio_max;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport check_bernstein_partition(const DyadicProfile& profile, int n,
                                      const VerificationThresholds& thr) {
    Timer timer;
    CheckReport rep;
    rep.name = "bernstein-partition";
    rep.inputs = "n=" + std::to_string(n);
    const int qmax = DyadicProfile::qmax(n);
    double resid = 0.0;
    for (long k2 = 0; k2 <= static_cast<long>(n) * n; ++k2) {
        double kk = std::sqrt(static_cast<double>(k2));
        double sum = profile.chi(kk);
        for (int q = 0; q <= qmax; ++q) sum += profile.phi(kk / DyadicProfile::lambda(q));
        resid = std::max(resid, std::abs(sum - 1.0));
    }
    rep.measured = resid;
    rep.threshold = thr.partition_residual;
    bool ok = resid <= thr.partition_residual;

    double a_lo = std::numeric_limits<double>::infinity(), a_hi = 0.0;
    double b_lo = std::numeric_limits<double>::infinity(), b_hi = 0.0;
    const double p_pairs[3][2] = {{2.0, 2.0}, {2.0, 6.0},
                                  {2.0, std::numeric_limits<double>::infinity()}};
    for (int q = 0; q <= 4; ++q)
        for (int deriv = 1; deriv <= 2; ++deriv)
            for (const auto& pp : p_pairs) {
                BernsteinSummary s =
                    bernstein_ratio(q, deriv, pp[0], pp[1], 7, 2026u + q, profile);
                a_lo = std::min(a_lo, s.a_min);
                a_hi = std::max(a_hi, s.a_max);
                b_lo = std::min(b_lo, s.b_min);
                b_hi = std::max(b_hi, s.b_max);
                if (!(std::isfinite(s.a_min) && std::isfinite(s.b_max))) ok = false;
            }
    if (!(a_lo >= thr.bernstein_a_lo && a_hi <= thr.bernstein_a_hi && b_lo >= thr.bernstein_b_lo &&
          b_hi <= thr.bernstein_b_hi))
        ok = false;
    rep.pass = ok;
    rep.notes = "ratio_a in [" + format_double(a_lo) + ", " + format_double(a_hi) +
                "], ratio_b in [" + format_double(b_lo) + ", " + format_double(b_hi) + "]";
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport energy_estimate_experiment(SolverConfig base, const std::vector<int>& resolutions,
                                       int paths, double p, const VerificationThresholds& thr) {
    Timer timer;
    CheckReport rep;
    rep.name = "energy-uniformity";
    if (!base.cutoff_enabled)
        throw std::invalid_argument("energy_estimate_experiment requires the cutoff system");
    if (resolutions.size() < 2 || paths < 2)
        throw std::invalid_argument("energy_estimate_experiment: need >= 2 resolutions, >= 2 paths");
    std::string inputs = "paths=" + std::to_string(paths) + " p=" + format_double(p) + " n={";
    std::vector<double> log_n, log_e;
    double e_min = std::numeric_limits<double>::infinity(), e_max = 0.0;
    int blowups = 0;
    std::string estimates;
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        SolverConfig cfg = base;
        cfg.n = resolutions[i];
        RunConfig rc;
        rc.solver = cfg;
        rc.ensemble_size = paths;
        rc.workers = 1;
        rc.p = p;
        EnsembleResult agg = run_ensemble(rc, false);
        blowups += agg.blowups;
        double e = agg.mean_sup_hs_p;  // E sup_t |B|^p_{H^s}
        double hs0 = sobolev_norm(initial_field(cfg), cfg.s);
        log_n.push_back(std::log(static_cast<double>(cfg.n)));
        log_e.push_back(std::log(e));
        e_min = std::min(e_min, e);
        e_max = std::max(e_max, e);
        inputs += (i ? "," : "") + std::to_string(cfg.n);
        estimates += (i ? " " : "") + std::to_string(cfg.n) + ":" + format_double(e) +
                     " full:" + format_double(agg.mean_energy_functional) +
                     " (C=" + format_double(e / (1.0 + std::pow(hs0, p))) + ")";
    }
    inputs += "}";
    rep.inputs = inputs;
    double uniformity = e_max / e_min;
    double slope = fit_slope(log_n, log_e);
    rep.measured = uniformity;
    rep.threshold = thr.energy_uniformity;
    rep.pass = uniformity < thr.energy_uniformity && slope <= thr.energy_slope;
    rep.notes = "slope=" + format_double(slope) + " estimates " + estimates +
                (blowups ? " blowups=" + std::to_string(blowups) : "");
    rep.runtime_sec = timer.seconds();
    return rep;
}

namespace {

struct PairRun {
    std::vector<double> integral;  // int_0^{t_i} (1 + |B1|^2 + |B2|^2)_{H^{s+a/2}}
    std::vector<double> diff2;     // |B1 - B2|^2_{H^{s-1/2}} at t_i
    double max_bit_diff = 0.0;
};

// Two trajectories from B1_0 and B2_0 under one Brownian path, sampled every
// step. Coarse runs reuse the fine increments by block summation (`stride`).
PairRun run_pair(const SolverConfig& cfg, const NoiseBasis& basis, const SpectralField& B1_0,
                 const SpectralField& B2_0, const std::vector<WienerIncrement>& fine,
                 int stride) {
    SolverConfig c = cfg;
    c.dt = cfg.dt * stride;
    TrajectoryState s1, s2;
    s1.B = B1_0;
    s2.B = B2_0;
    integrator_detail::StepWorkspace w1(c, basis), w2(c, basis);
    w1.seed_w1inf(s1.B);
    w2.seed_w1inf(s2.B);
    const long steps = std::lround(cfg.T / c.dt);
    PairRun out;
    const double sdiff = cfg.s - 0.5;
    auto d2 = [&]() {
        double d = sobolev_norm(field_diff(s1.B, s2.B), sdiff);
        return d * d;
    };
    auto dens = [&]() {
        double a = sobolev_norm(s1.B, cfg.s + 0.5 * cfg.alpha);
        double b = sobolev_norm(s2.B, cfg.s + 0.5 * cfg.alpha);
        return 1.0 + a * a + b * b;
    };
    out.integral.push_back(0.0);
    out.diff2.push_back(d2());
    out.max_bit_diff = max_abs_diff(s1.B, s2.B);
    double acc = 0.0;
    for (long j = 1; j <= steps; ++j) {
        double density = dens();
        WienerIncrement w;
        w.dt = c.dt;
        if (basis.K() > 0) {
            w.dW.assign(static_cast<std::size_t>(basis.K()), 0.0);
            for (int m = 0; m < stride; ++m) {
                const WienerIncrement& fw = fine[static_cast<std::size_t>((j - 1) * stride + m)];
                for (int k = 0; k < basis.K(); ++k) w.dW[static_cast<std::size_t>(k)] += fw.dW[static_cast<std::size_t>(k)];
            }
        }
        w1.step(s1, w);
        w2.step(s2, w);
        acc += c.dt * density;  // left endpoint of the Gronwall density
        out.integral.push_back(acc);
        out.diff2.push_back(d2());
        out.max_bit_diff = std::max(out.max_bit_diff, max_abs_diff(s1.B, s2.B));
        if (s1.blown_up || s2.blown_up) break;
    }
    return out;
}

}  // namespace

UniquenessOutcome uniqueness_outcome(const SolverConfig& cfg, double delta0) {
    if (!(cfg.s > 3.0))
        throw std::invalid_argument("uniqueness_experiment requires s > 3");
    validate(cfg);
    NoiseBasis basis;
    if (cfg.K > 0) basis = build_noise_basis(cfg.K, cfg.gamma, cfg.s, cfg.n, cfg.seed);
    SpectralField B1_0 = initial_field(cfg);
    SpectralField pert = leray_project(
        random_field(cfg.n, 2.0, cfg.seed, 0, RngDomain::perturbation, 3));
    pert *= 1.0 / sobolev_norm(pert, cfg.s - 0.5);
    SpectralField B2_0 = B1_0;
    B2_0.axpy(delta0, pert);

    const long fine_steps = std::lround(cfg.T / cfg.dt);
    std::vector<WienerIncrement> fine;
    RngStream stream(cfg.seed, 0, RngDomain::increments);
    for (long i = 1; i <= fine_steps; ++i)
        fine.push_back(cfg.K > 0
                           ? sample_increments(cfg.dt, cfg.K, stream, static_cast<std::uint32_t>(i))
                           : WienerIncrement{{}, cfg.dt});

    UniquenessOutcome out;
    if (delta0 == 0.0) {
        PairRun fine_run = run_pair(cfg, basis, B1_0, B2_0, fine, 1);
        out.identical = fine_run.max_bit_diff == 0.0;
        out.sup_ratio = 0.0;
        out.terminal_diff = std::sqrt(fine_run.diff2.back());
        return out;
    }

    // Calibrate C_r on a coarse pass over the same Brownian path, then rerun
    // fine and measure the Gronwall-normalized ratio.
    PairRun coarse = run_pair(cfg, basis, B1_0, B2_0, fine, 4);
    double c_r = 0.0;
    for (std::size_t i = 1; i < coarse.diff2.size(); ++i) {
        if (coarse.diff2[i] <= 0.0 || coarse.diff2.front() <= 0.0 || coarse.integral[i] <= 0.0)
            continue;
        c_r = std::max(c_r, std::log(coarse.diff2[i] / coarse.diff2.front()) / coarse.integral[i]);
    }
    c_r *= 1.05;
    out.c_r = c_r;

    PairRun fine_run = run_pair(cfg, basis, B1_0, B2_0, fine, 1);
    double sup = 0.0;
    for (std::size_t i = 0; i < fine_run.diff2.size(); ++i)
        sup = std::max(sup,
                       std::exp(-c_r * fine_run.integral[i]) * fine_run.diff2[i] /
                           fine_run.diff2.front());
    out.sup_ratio = sup;
    out.terminal_diff = std::sqrt(fine_run.diff2.back());
    return out;
}

CheckReport uniqueness_experiment(const SolverConfig& cfg, double delta0,
                                  const VerificationThresholds& thr) {
    Timer timer;
    CheckReport rep;
    rep.inputs = "n=" + std::to_string(cfg.n) + " delta0=" + format_double(delta0);
    UniquenessOutcome out = uniqueness_outcome(cfg, delta0);
    if (delta0 == 0.0) {
        rep.name = "uniqueness-identical";
        rep.measured = out.identical ? 0.0 : 1.0;
        rep.threshold = 0.0;
        rep.pass = out.identical;
        rep.notes = "bitwise coincidence of the two trajectories";
    } else {
        rep.name = "uniqueness-gronwall";
        rep.measured = out.sup_ratio;
        rep.threshold = thr.uniqueness_margin;
        rep.pass = out.sup_ratio <= thr.uniqueness_margin && out.sup_ratio > 0.0;
        rep.notes = "C_r=" + format_double(out.c_r) +
                    " terminal_diff=" + format_double(out.terminal_diff);
    }
    rep.runtime_sec = timer.seconds();
    return rep;
}

CutoffConsistencyOutcome cutoff_consistency_outcome(const SolverConfig& cfg) {
    validate(cfg);
    NoiseBasis basis;
    if (cfg.K > 0) basis = build_noise_basis(cfg.K, cfg.gamma, cfg.s, cfg.n, cfg.seed);
    SolverConfig on = cfg, off = cfg;
    on.cutoff_enabled = true;
    off.cutoff_enabled = false;
    SpectralField B0 = initial_field(cfg);
    TrajectoryState s_on, s_off;
    s_on.B = B0;
    s_off.B = B0;
    integrator_detail::StepWorkspace w_on(on, basis), w_off(off, basis);
    w_on.seed_w1inf(s_on.B);
    w_off.seed_w1inf(s_off.B);
    RngStream stream(cfg.seed, 0, RngDomain::increments);
    const long steps = std::lround(cfg.T / cfg.dt);

    CutoffConsistencyOutcome out;
    auto observe = [&]() {
        double diff = max_abs_diff(s_on.B, s_off.B);
        bool exceeded_now = w_on.current_w1inf() > 0.5 * cfg.r;
        if (!out.crossed) {
            out.max_diff_before = std::max(out.max_diff_before, diff);
            if (exceeded_now) {
                out.crossed = true;
                out.first_exceed_t = s_on.t;
            }
        } else {
            out.max_diff_after = std::max(out.max_diff_after, diff);
        }
    };
    observe();
    for (long i = 1; i <= steps && !s_on.blown_up && !s_off.blown_up; ++i) {
        WienerIncrement w;
        w.dt = cfg.dt;
        if (cfg.K > 0) w = sample_increments(cfg.dt, cfg.K, stream, static_cast<std::uint32_t>(i));
        w_on.step(s_on, w);
        w_off.step(s_off, w);
        observe();
    }
    out.pass = out.crossed ? (out.max_diff_before == 0.0 && out.max_diff_after > 0.0)
                           : out.max_diff_before == 0.0;
    return out;
}

CheckReport cutoff_consistency_experiment(const SolverConfig& cfg) {
    Timer timer;
    CheckReport rep;
    rep.name = "cutoff-consistency";
    rep.inputs = "n=" + std::to_string(cfg.n) + " r=" + format_double(cfg.r) +
                 " seed=" + std::to_string(cfg.seed);
    CutoffConsistencyOutcome out = cutoff_consistency_outcome(cfg);
    rep.measured = out.max_diff_before;
    rep.threshold = 0.0;
    rep.pass = out.pass;
    rep.notes = out.crossed ? "sigma_r at t=" + format_double(out.first_exceed_t) +
                                  ", post-divergence " + format_double(out.max_diff_after)
                            : "no crossing in horizon";
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport ito_stratonovich_convergence(SolverConfig cfg, std::vector<double> dts,
                                         double order_min, int paths) {
    Timer timer;
    CheckReport rep;
    rep.name = "scheme-consistency";
    std::sort(dts.begin(), dts.end(), std::greater<double>());
    const double dt_min = dts.back();
    cfg.dt = dt_min;
    validate(cfg);
    if (paths < 1) throw std::invalid_argument("scheme-consistency: need >= 1 path");
    NoiseBasis basis;
    if (cfg.K > 0) basis = build_noise_basis(cfg.K, cfg.gamma, cfg.s, cfg.n, cfg.seed);
    SpectralField B0 = initial_field(cfg);
    const long fine_steps = std::lround(cfg.T / dt_min);

    std::vector<double> err_mean(dts.size(), 0.0);
    for (int pid = 0; pid < paths; ++pid) {
        std::vector<WienerIncrement> fine;
        RngStream stream(cfg.seed, static_cast<std::uint32_t>(pid), RngDomain::increments);
        for (long i = 1; i <= fine_steps; ++i)
            fine.push_back(
                cfg.K > 0 ? sample_increments(dt_min, cfg.K, stream, static_cast<std::uint32_t>(i))
                          : WienerIncrement{{}, dt_min});
        for (std::size_t di = 0; di < dts.size(); ++di) {
            const double dt = dts[di];
            const int stride = static_cast<int>(std::lround(dt / dt_min));
            if (std::abs(stride * dt_min - dt) > 1e-12)
                throw std::invalid_argument(
                    "scheme-consistency: dts must nest over the finest grid");
            SolverConfig ce = cfg, ch = cfg;
            ce.dt = dt;
            ch.dt = dt;
            ce.scheme = Scheme::exponential_em;
            ch.scheme = Scheme::stratonovich_heun;
            TrajectoryState se, sh;
            se.B = B0;
            sh.B = B0;
            integrator_detail::StepWorkspace we(ce, basis), wh(ch, basis);
            we.seed_w1inf(se.B);
            wh.seed_w1inf(sh.B);
            const long steps = std::lround(cfg.T / dt);
            for (long j = 1; j <= steps; ++j) {
                WienerIncrement w;
                w.dt = dt;
                if (cfg.K > 0) {
                    w.dW.assign(static_cast<std::size_t>(cfg.K), 0.0);
                    for (int m = 0; m < stride; ++m) {
                        const WienerIncrement& fw =
                            fine[static_cast<std::size_t>((j - 1) * stride + m)];
                        for (int k = 0; k < cfg.K; ++k)
                            w.dW[static_cast<std::size_t>(k)] += fw.dW[static_cast<std::size_t>(k)];
                    }
                }
                we.step(se, w);
                wh.step(sh, w);
            }
            if (se.blown_up || sh.blown_up)
                throw std::runtime_error("scheme-consistency: trajectory blew up");
            err_mean[di] += l2_norm(field_diff(se.B, sh.B)) / static_cast<double>(paths);
        }
    }

    std::vector<double> log_dt, log_err;
    std::string errs;
    for (std::size_t di = 0; di < dts.size(); ++di) {
        log_dt.push_back(std::log(dts[di]));
        log_err.push_back(std::log(err_mean[di] + tiny));
        errs += " " + format_double(dts[di]) + ":" + format_double(err_mean[di]);
    }
    double order = fit_slope(log_dt, log_err);
    rep.inputs = "n=" + std::to_string(cfg.n) + " K=" + std::to_string(cfg.K) +
                 " T=" + format_double(cfg.T) + " paths=" + std::to_string(paths);
    rep.measured = order;
    rep.threshold = order_min;
    rep.pass = order >= order_min;
    rep.notes = "mean strong differences" + errs;
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport ito_energy_bookkeeping(SolverConfig cfg, int steps, const VerificationThresholds& thr) {
    Timer timer;
    CheckReport rep;
    rep.name = "ito-energy-bookkeeping";
    cfg.scheme = Scheme::exponential_em;
    cfg.T = cfg.dt * steps;
    validate(cfg);
    if (steps < 16) throw std::invalid_argument("ito_energy_bookkeeping: need >= 16 steps");
    NoiseBasis basis;
    if (cfg.K > 0) basis = build_noise_basis(cfg.K, cfg.gamma, cfg.s, cfg.n, cfg.seed);
    TrajectoryState st;
    st.B = initial_field(cfg);
    integrator_detail::StepWorkspace ws(cfg, basis);
    ws.seed_w1inf(st.B);
    RngStream stream(cfg.seed, 0, RngDomain::increments);

    std::vector<double> residual, qv;
    double i1_max = 0.0;
    for (int i = 1; i <= steps; ++i) {
        const SpectralField& B = st.B;
        SpectralField LsB = lambda_power(B, cfg.s);
        double before = l2_norm(LsB);
        before *= before;
        double chi2 = 1.0;
        if (cfg.cutoff_enabled) {
            double chi = cutoff_value(CutoffProfile{cfg.r}, ws.current_w1inf());
            chi2 = chi * chi;
        }
        SpectralField drift_det(cfg.n);
        if (cfg.hall_enabled && chi2 != 0.0)
            drift_det.axpy(-chi2, truncate(leray_project(hall_term(B)), cfg.n));
        drift_det.axpy(-cfg.mu, apply_fractional_laplacian(B, cfg.alpha));
        double I1 = 2.0 * inner_l2(lambda_power(drift_det, cfg.s), LsB);
        double I2 = 0.0, qv_i = 0.0;
        if (basis.K() > 0) {
            SpectralField corr =
                truncate(leray_project(ito_correction(basis, B, true)), cfg.n);
            I2 += 2.0 * inner_l2(lambda_power(corr, cfg.s), LsB);
            for (int k = 0; k < basis.K(); ++k) {
                SpectralField Gk = leray_project(transport_apply(basis.coeff_fields[k], B));
                double gs = l2_norm(lambda_power(Gk, cfg.s));
                I2 += gs * gs;
                double mart = 2.0 * inner_l2(lambda_power(Gk, cfg.s), LsB);
                qv_i += mart * mart * cfg.dt;
            }
        }
        i1_max = std::max(i1_max, std::abs(I1) + std::abs(I2));
        WienerIncrement w;
        w.dt = cfg.dt;
        if (cfg.K > 0) w = sample_increments(cfg.dt, cfg.K, stream, static_cast<std::uint32_t>(i));
        ws.step(st, w);
        if (st.blown_up) throw std::runtime_error("ito_energy_bookkeeping: blow-up");
        double after = l2_norm(lambda_power(st.B, cfg.s));
        after *= after;
        residual.push_back(after - before - cfg.dt * (I1 + I2));
        qv.push_back(qv_i);
    }

    rep.inputs = "n=" + std::to_string(cfg.n) + " K=" + std::to_string(cfg.K) +
                 " dt=" + format_double(cfg.dt) + " steps=" + std::to_string(steps);
    const double N = static_cast<double>(residual.size());
    double mean = 0.0;
    for (double x : residual) mean += x;
    mean /= N;
    if (cfg.K == 0) {
        double worst = 0.0;
        for (double x : residual) worst = std::max(worst, std::abs(x));
        // The O(dt^2) remainder is dominated by the curvature of the
        // per-mode factor e^{-2 mu |k|^alpha dt}, which exceeds the
        // first-order pairing I1 by up to mu n^alpha (the worst ratio of the
        // Taylor coefficients over retained modes), so the admissible scale
        // carries that factor.
        double curvature = std::max(1.0, cfg.mu * std::pow(static_cast<double>(cfg.n), cfg.alpha));
        double scale =
            thr.bookkeeping_det_scale * cfg.dt * cfg.dt * std::max(1.0, i1_max) * curvature;
        rep.measured = worst / scale;
        rep.threshold = 1.0;
        rep.pass = worst <= scale;
        rep.notes = "deterministic residual max " + format_double(worst);
    } else {
        double var = 0.0;
        for (double x : residual) var += (x - mean) * (x - mean);
        var /= (N - 1.0);
        double se = std::sqrt(var / N);
        double qv_mean = 0.0;
        for (double x : qv) qv_mean += x;
        qv_mean /= N;
        double var_ratio = var / (qv_mean + tiny);
        double mean_sigmas = std::abs(mean) / (se + tiny);
        rep.measured = mean_sigmas;
        rep.threshold = 3.0;
        rep.pass = mean_sigmas <= 3.0 && var_ratio >= 1.0 / thr.bookkeeping_var_factor &&
                   var_ratio <= thr.bookkeeping_var_factor;
        rep.notes = "var/qv=" + format_double(var_ratio);
    }
    rep.runtime_sec = timer.seconds();
    return rep;
}

CheckReport stratonovich_conservation_experiment(SolverConfig cfg, int paths, double sigmas) {
    Timer timer;
    CheckReport rep;
    rep.name = "stratonovich-l2-conservation";
    // Ito form with correction: its L2 drift cancels in expectation, so the
    // sample mean is an unbiased-to-O(dt^2) estimator of the conserved
    // Stratonovich energy.  (The Heun update U = I + S + S^2/2 on a skew S
    // gains |S^2 B|^2/4 every step deterministically, a one-sided bias that
    // averaging over paths cannot remove.)
    cfg.scheme = Scheme::exponential_em;
    cfg.hall_enabled = false;
    cfg.mu = 0.0;
    validate(cfg);
    if (paths < 2) throw std::invalid_argument("conservation experiment: need >= 2 paths");
    // Keyed by sample time: event rows may appear on individual paths, so the
    // statistic uses only times present on every path. Grid times accumulate
    // through the identical t += dt sequence on each path, hence compare
    // bitwise equal.
    std::map<double, std::vector<double>> by_time;
    for (int pid = 0; pid < paths; ++pid) {
        TrajectoryRecord rec = run_trajectory(cfg, static_cast<std::uint32_t>(pid));
        if (rec.final_state.blown_up)
            throw std::runtime_error("conservation experiment: trajectory blew up");
        for (const auto& row : rec.rows) by_time[row.t].push_back(row.l2 * row.l2);
    }
    auto it0 = by_time.find(0.0);
    if (it0 == by_time.end() || it0->second.size() != static_cast<std::size_t>(paths))
        throw std::runtime_error("conservation experiment: missing initial samples");
    double e0 = it0->second.front();  // deterministic initial energy
    double worst = 0.0;
    int shared = 0;
    for (const auto& [t, xs] : by_time) {
        if (t == 0.0 || xs.size() != static_cast<std::size_t>(paths)) continue;
        ++shared;
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size() - 1);
        double se = std::sqrt(var / static_cast<double>(xs.size()));
        worst = std::max(worst, std::abs(mean - e0) / (se + tiny));
    }
    if (shared == 0) throw std::runtime_error("conservation experiment: misaligned sample grids");
    rep.inputs = "n=" + std::to_string(cfg.n) + " K=" + std::to_string(cfg.K) +
                 " paths=" + std::to_string(paths) + " T=" + format_double(cfg.T);
    rep.measured = worst;
    rep.threshold = sigmas;
    rep.pass = worst <= sigmas;
    rep.notes = "shared sample times " + std::to_string(shared);
    rep.runtime_sec = timer.seconds();
    return rep;
}

namespace {

NoiseBasis longitudinal_basis(int K, double gamma, double s, int n) {
    // Deliberately non-divergence-free: polarization along m
    // (negative control for the skew-symmetry identity).
    NoiseBasis good = build_noise_basis(K, gamma, s, n, 0);
    NoiseBasis bad = good;
    for (int k = 0; k < K; ++k) {
        NoiseField& f = bad.fields[static_cast<std::size_t>(k)];
        double mm = norm(f.m);
        f.pol = {f.m.x / mm, f.m.y / mm, f.m.z / mm};
        bad.coeff_fields[static_cast<std::size_t>(k)] = noise_field_spectral(f, n);
    }
    return bad;
}

void append(std::vector<CheckReport>& all, CheckReport rep) { all.push_back(std::move(rep)); }

void run_identities(std::vector<CheckReport>& all, const AblationFlags& flags, std::uint64_t seed,
                    const VerificationThresholds& thr) {
    const int n = 8;
    InitSpec beltrami;
    beltrami.family = InitFamily::beltrami;
    beltrami.shell = 2;
    SpectralField Bb = make_initial_data(beltrami, n, seed);
    SpectralField Br = random_divfree_field(n, 1.5, seed, 1);
    append(all, check_hall_orthogonality(Bb, false, thr.hall_orthogonality));
    append(all, check_hall_orthogonality(Br, flags.aliased_products, thr.hall_orthogonality));
    NoiseBasis basis = flags.non_divfree_noise ? longitudinal_basis(8, 6.0, 3.1, n)
                                               : build_noise_basis(8, 6.0, 3.1, n, seed);
    append(all, check_transport_skew(basis, Br, thr.transport_skew));
    append(all, check_ito_drift_cancellation(basis, Br, 1.5, thr.ito_drift_cancellation));
    append(all, check_bony_reconstruction(random_divfree_field(n, 1.2, seed, 2),
                                          random_divfree_field(n, 1.2, seed, 3)));
    SolverConfig short_run;
    short_run.n = n;
    short_run.K = 4;
    short_run.gamma = 6.0;
    short_run.s = 3.1;
    short_run.mu = 50.0;
    short_run.r = 10.0;
    short_run.T = 0.02;
    short_run.dt = 1e-3;
    short_run.seed = seed;
    short_run.init.family = InitFamily::random_hs;
    short_run.init.amplitude = 1.0;
    short_run.init.decay = 2.5;
    for (Scheme sch : {Scheme::exponential_em, Scheme::stratonovich_heun}) {
        short_run.scheme = sch;
        append(all, check_divergence_preservation(short_run));
    }
    DyadicProfile profile =
        flags.perturbed_lp_profile ? DyadicProfile::perturbed(0.85) : DyadicProfile{};
    append(all, check_bernstein_partition(profile, 32, thr));
}

void run_commutators(std::vector<CheckReport>& all, const AblationFlags&, std::uint64_t seed,
                     const VerificationThresholds& thr) {
    // d1: 50 pairs per (s, n) group (200 total); stability of the group maxima across n.
    double group_max[2][2] = {{0, 0}, {0, 0}};
    const double svals[2] = {1.0, 2.6};
    const int nvals[2] = {8, 16};
    std::uint32_t tag = 100;
    for (int si = 0; si < 2; ++si)
        for (int ni = 0; ni < 2; ++ni)
            for (int trial = 0; trial < 200; ++trial) {
                SpectralField f = random_scalar_field(nvals[ni], 2.5, seed, tag++);
                SpectralField g = random_scalar_field(nvals[ni], 2.5, seed, tag++);
                CheckReport rep = check_commutator_d1(f, g, svals[si], thr.d1_ratio_max);
                group_max[si][ni] = std::max(group_max[si][ni], rep.measured);
                if (trial == 0 || !rep.pass) append(all, rep);
            }
    CheckReport stab;
    stab.name = "commutator-d1-stability";
    stab.inputs = "s={1,2.6} n={8,16} 200 pairs";
    double ratio = 1.0;
    for (int si = 0; si < 2; ++si) {
        double a = group_max[si][0], b = group_max[si][1];
        ratio = std::max(ratio, std::max(a / b, b / a));
    }
    stab.measured = ratio;
    stab.threshold = thr.d1_stability;
    stab.pass = ratio <= thr.d1_stability &&
                std::max(std::max(group_max[0][0], group_max[0][1]),
                         std::max(group_max[1][0], group_max[1][1])) <= thr.d1_ratio_max;
    stab.notes = "group maxima " + format_double(group_max[0][0]) + " " +
                 format_double(group_max[0][1]) + " " + format_double(group_max[1][0]) + " " +
                 format_double(group_max[1][1]);
    append(all, stab);

    // d2: gamma in {0, alpha/2 - 2} at alpha = 1.5, 100 instances each (200 total).
    for (double g_exp : {0.0, -1.25}) {
        double worst = 0.0;
        CheckReport last;
        for (int trial = 0; trial < 100; ++trial) {
            SpectralField c = random_divfree_field(6, 3.0, seed, tag++);
            SpectralField u = random_divfree_field(6, 3.0, seed, tag++);
            last = check_commutator_d2(c, u, 2.6, g_exp, thr.d2_ratio_max);
            worst = std::max(worst, last.measured);
            if (!last.pass) append(all, last);
        }
        last.measured = worst;
        last.inputs += " (100 instances, max)";
        last.pass = worst <= thr.d2_ratio_max;
        append(all, last);
    }

    // d3: 200 instances at s = 3.
    {
        double worst = 0.0;
        CheckReport last;
        for (int trial = 0; trial < 200; ++trial) {
            SpectralField c = random_divfree_field(4, 3.0, seed, tag++);
            SpectralField u = random_divfree_field(4, 3.0, seed, tag++);
            last = check_commutator_d3(c, u, 3.0, thr.d3_ratio_max);
            worst = std::max(worst, last.measured);
            if (!last.pass) append(all, last);
        }
        last.measured = worst;
        last.inputs += " (200 instances, max)";
        last.pass = worst <= thr.d3_ratio_max;
        append(all, last);
    }
}

// The noise basis pins the shell-1 coefficient amplitudes at 1 (theta_j =
// |m_j|^{-gamma}), so the transport operator norm at n = 8 is ~ 2 pi n
// regardless of gamma, and the largest ladder step dt = 2e-3 sits at
// lambda sqrt(dt) ~ 1.8.  Mode-by-mode mean-square stability of both
// integrating-factor schemes then requires dissipation at least
// e^{-2 mu |k|^alpha dt} (3/4)(lambda_k^2 dt)^2 < 1 for every k <= n;
// mu = 50 at alpha = 1.5 satisfies this through k = 16 with margin (the
// worst factor, at k = 1, is ~0.82 per step).
SolverConfig scheme_config(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.n = 8;
    cfg.K = 4;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 50.0;
    cfg.T = 0.25;
    cfg.seed = seed;
    cfg.cutoff_enabled = true;
    cfg.r = 10.0;
    cfg.hall_enabled = true;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 3.1;
    return cfg;
}

// With mu = 0 nothing damps the O(dt^2) per-step energy bias of the scheme,
// so the bias-to-noise ratio of the mean-energy statistic at horizon T is
// ~ lambda_eff^2 sqrt(dt T P) (P paths): the truncation is kept small
// (lambda_eff ~ 10 at n = 2) and dt fine enough that the ratio stays below
// one standard error while the martingale spread still dominates.
SolverConfig conservation_config(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.n = 2;
    cfg.K = 4;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 0.0;
    cfg.hall_enabled = false;
    cfg.cutoff_enabled = false;
    cfg.r = 1e12;
    cfg.T = 0.5;
    cfg.dt = 5e-5;
    cfg.diag_interval = 500;
    cfg.seed = seed;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 2.0;
    return cfg;
}

// Uniformity in n needs (a) initial data whose H^s norm is essentially
// n-independent (random_hs draws per-mode coefficients keyed by the
// wavevector, so refining n only appends a convergent k^{-2} tail here) and
// (b) dynamics that stay mean-square stable at the finest truncation n = 16,
// where the pinned noise amplitudes make the transport norm ~ 2 pi 16; at
// mu = 50, alpha = 1.5 the dissipation factor beats the quartic noise gain
// for every mode through k = 16 even at dt = 4e-3.
SolverConfig energy_config(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.K = 4;
    cfg.gamma = 6.0;
    cfg.s = 2.6;
    cfg.alpha = 1.5;
    cfg.mu = 50.0;
    cfg.T = 0.5;
    cfg.dt = 4e-3;
    cfg.diag_interval = 25;
    cfg.seed = seed;
    cfg.cutoff_enabled = true;
    cfg.r = 10.0;
    cfg.hall_enabled = true;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 2.6;
    return cfg;
}

// A small stable regime (transport norm ~ 2 pi 4 at n = 4, damped by mu = 5
// at dt = 2.5e-4) with the cutoff sitting on its plateau: w1inf of this
// initial data is ~2, so chi = 1 throughout and the Hall term acts at full
// strength while the coupled difference stays Gronwall-controlled.
SolverConfig uniqueness_config(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.n = 4;
    cfg.K = 2;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 5.0;
    cfg.T = 0.1;
    cfg.dt = 2.5e-4;
    cfg.seed = seed;
    cfg.cutoff_enabled = true;
    cfg.r = 4.0;
    cfg.hall_enabled = true;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 3.1;
    return cfg;
}

SolverConfig bookkeeping_config(std::uint64_t seed, int K) {
    SolverConfig cfg;
    cfg.n = 4;
    cfg.K = K;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 5.0;
    cfg.dt = 2.5e-4;
    cfg.seed = seed;
    cfg.cutoff_enabled = true;
    cfg.r = 1e6;
    cfg.hall_enabled = true;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 2.5;
    return cfg;
}

// Picks r so that the w1inf trajectory crosses r/2 strictly inside the
// horizon: pilot the uncut run, then split the observed range.
SolverConfig cutoff_config(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.n = 4;
    cfg.K = 4;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    // Undamped, so the transport martingale drives w1inf upward (a few tenths
    // of a percent per step in the mean at this dt) and the crossing happens
    // strictly inside the horizon without the trajectory leaving the stable
    // range.
    cfg.mu = 0.0;
    cfg.T = 0.05;
    cfg.dt = 2.5e-4;
    cfg.diag_interval = 1;
    cfg.seed = seed;
    cfg.cutoff_enabled = false;
    cfg.r = 1e12;
    cfg.hall_enabled = true;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 2.5;
    TrajectoryRecord pilot = run_trajectory(cfg, 0);
    double w0 = pilot.rows.front().w1inf;
    double wmax = w0;
    for (const auto& row : pilot.rows)
        if (std::isfinite(row.w1inf)) wmax = std::max(wmax, row.w1inf);
    // Threshold 40% of the way from the initial to the peak sup-norm; if the
    // pilot never grows, fall back to an immediate crossing at t = 0.
    double threshold = wmax > w0 ? w0 + 0.4 * (wmax - w0) : 0.5 * w0;
    cfg.r = 2.0 * threshold;
    cfg.cutoff_enabled = true;
    cfg.diag_interval = 1;
    return cfg;
}

}  // namespace

std::vector<CheckReport> run_verification(const std::string& selector, const AblationFlags& flags,
                                          std::uint64_t seed, const VerificationThresholds& thr) {
    std::vector<CheckReport> all;
    bool everything = selector == "all";
    bool known = everything;
    if (everything || selector == "identities") {
        run_identities(all, flags, seed, thr);
        known = true;
    }
    if (everything || selector == "commutators") {
        run_commutators(all, flags, seed, thr);
        known = true;
    }
    if (everything || selector == "bernstein") {
        DyadicProfile profile =
            flags.perturbed_lp_profile ? DyadicProfile::perturbed(0.85) : DyadicProfile{};
        append(all, check_bernstein_partition(profile, 32, thr));
        known = true;
    }
    if (everything || selector == "scheme") {
        append(all, ito_stratonovich_convergence(scheme_config(seed), {2e-3, 1e-3, 5e-4},
                                                 thr.scheme_order_min));
        known = true;
    }
    if (everything || selector == "conservation") {
        append(all, stratonovich_conservation_experiment(conservation_config(seed), 64,
                                                         thr.conservation_sigmas));
        known = true;
    }
    if (everything || selector == "energy") {
        append(all, energy_estimate_experiment(energy_config(seed), {8, 12, 16}, 64, 2.0, thr));
        known = true;
    }
    if (everything || selector == "uniqueness") {
        SolverConfig cfg = uniqueness_config(seed);
        append(all, uniqueness_experiment(cfg, 0.0, thr));
        CheckReport full = uniqueness_experiment(cfg, 1e-8, thr);
        UniquenessOutcome a = uniqueness_outcome(cfg, 1e-8);
        UniquenessOutcome b = uniqueness_outcome(cfg, 5e-9);
        CheckReport halving;
        halving.name = "uniqueness-halving";
        halving.inputs = "delta0 1e-8 vs 5e-9";
        halving.measured = (a.terminal_diff / (b.terminal_diff + tiny)) / 2.0;
        halving.threshold = thr.halving_hi;
        halving.pass = halving.measured >= thr.halving_lo && halving.measured <= thr.halving_hi;
        halving.notes = "terminal diffs " + format_double(a.terminal_diff) + " / " +
                        format_double(b.terminal_diff);
        append(all, full);
        append(all, halving);
        known = true;
    }
    if (everything || selector == "cutoff") {
        append(all, cutoff_consistency_experiment(cutoff_config(seed)));
        known = true;
    }
    if (everything || selector == "bookkeeping") {
        append(all, ito_energy_bookkeeping(bookkeeping_config(seed, 2), 400, thr));
        append(all, ito_energy_bookkeeping(bookkeeping_config(seed, 0), 64, thr));
        known = true;
    }
    if (!known) throw std::invalid_argument("verify: unknown selector '" + selector + "'");
    return all;
}

}  // namespace emhd
