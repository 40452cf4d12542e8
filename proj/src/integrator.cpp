#include "emhd/integrator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "emhd/checkpoint.hpp"

namespace emhd {

namespace {

// Shared by the reference and fused steppers so the per-mode dissipation
// factor is bit-identical between them.
double em_dissipation_factor(const Mode& k, double alpha, double mu, double dt) {
    return std::exp(-mu * std::pow(norm(k), alpha) * dt);
}

void apply_em_dissipation(SpectralField& f, double alpha, double mu, double dt) {
    const std::size_t m = f.modes();
    f.for_each_mode([&](const Mode& k) {
        double factor = em_dissipation_factor(k, alpha, mu, dt);
        std::size_t i = f.index(k.x, k.y, k.z);
        f.data()[i] *= factor;
        f.data()[m + i] *= factor;
        f.data()[2 * m + i] *= factor;
    });
}

SpectralField noise_coeff_at(const NoiseBasis& basis, int k, int n) {
    return basis.n == n ? basis.coeff_fields[k] : noise_field_spectral(basis.fields[k], n);
}

double chi2_of(const SolverConfig& cfg, double w1inf_value) {
    if (!cfg.cutoff_enabled) return 1.0;
    double chi = cutoff_value(CutoffProfile{cfg.r}, w1inf_value);
    return chi * chi;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_violations(const SolverConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> v;
    if (cfg.n < 1 || cfg.n > 512) v.emplace_back("n", "n must lie in [1, 512]");
    if (!(cfg.alpha > 1.0 && cfg.alpha <= 2.0))
        v.emplace_back("alpha", "alpha must lie in (1, 2]");
    if (!(cfg.mu >= 0.0)) v.emplace_back("mu", "mu must be >= 0");
    if (!(cfg.r > 0.0)) v.emplace_back("r", "r must be > 0");
    if (!(cfg.s > 0.0)) v.emplace_back("s", "s must be > 0");
    if (cfg.K < 0) v.emplace_back("K", "K must be >= 0");
    if (cfg.K > 0 && !(cfg.gamma > cfg.s + 2.5))
        v.emplace_back("gamma", "gamma must exceed s + 5/2");
    if (!(cfg.dt > 0.0)) v.emplace_back("dt", "dt must be > 0");
    if (cfg.dt > 0.0 && !(cfg.T == 0.0 || cfg.T >= cfg.dt))
        v.emplace_back("T", "T must be 0 or >= dt");
    for (std::size_t i = 0; i + 1 < cfg.ladder.size(); ++i)
        if (!(cfg.ladder[i] < cfg.ladder[i + 1])) {
            v.emplace_back("ladder", "ladder levels must be strictly increasing");
            break;
        }
    if (cfg.diag_interval < 1) v.emplace_back("diag_interval", "diag_interval must be >= 1");
    if (cfg.init.family == InitFamily::single_mode &&
        (norm2(cfg.init.mode) == 0 || norm2(cfg.init.mode) > static_cast<long>(cfg.n) * cfg.n))
        v.emplace_back("init_mode",
                       "single-mode wavevector must be nonzero and inside the truncation ball");
    if (cfg.init.family == InitFamily::beltrami &&
        (cfg.init.shell < 1 || cfg.init.shell > cfg.n))
        v.emplace_back("init_shell", "beltrami shell must lie in [1, n]");
    if (cfg.init.family == InitFamily::checkpoint && cfg.init.checkpoint_path.empty())
        v.emplace_back("init_checkpoint", "checkpoint initial data requires a path");
    return v;
}

void validate(const SolverConfig& cfg) {
    auto v = config_violations(cfg);
    if (!v.empty())
        throw std::invalid_argument("config: " + v.front().second);
}

void step_exponential_em(TrajectoryState& state, const SolverConfig& cfg, const NoiseBasis& basis,
                         const WienerIncrement& w) {
    const int n = cfg.n;
    if (state.B.n() != n)
        throw std::invalid_argument("step: field truncation does not match the config");
    try {
        SpectralField acc(n);
        if (cfg.hall_enabled) {
            double chi2 = chi2_of(cfg, w1inf_norm(state.B, 4 * n));
            if (chi2 != 0.0)
                acc.axpy(-chi2, truncate(leray_project(hall_term(state.B)), n));
        }
        if (basis.K() > 0)
            acc += truncate(leray_project(ito_correction(basis, state.B, true)), n);
        SpectralField bracket = state.B;
        bracket.axpy(cfg.dt, acc);
        for (int k = 0; k < basis.K(); ++k)
            bracket.axpy(w.dW[k], transport_apply(noise_coeff_at(basis, k, n), state.B));
        apply_em_dissipation(bracket, cfg.alpha, cfg.mu, cfg.dt);
        state.B = leray_project(bracket);
    } catch (const std::invalid_argument&) {
        // Overflow mid-evaluation (non-finite grids); record, do not abort.
        state.blown_up = true;
    }
    state.t += cfg.dt;
    if (!state.B.all_finite()) state.blown_up = true;
}

void step_stratonovich_heun(TrajectoryState& state, const SolverConfig& cfg,
                            const NoiseBasis& basis, const WienerIncrement& w) {
    const int n = cfg.n;
    if (state.B.n() != n)
        throw std::invalid_argument("step: field truncation does not match the config");
    // Integrating-factor (Lawson) Heun: the stiff dissipation is applied as the
    // exact per-mode factor E = e^{-mu |k|^alpha dt} and the Heun average acts
    // on the remaining Hall + Stratonovich-transport field,
    //   k1   = dt f(B) + g(B),          pred = E (B + k1),
    //   B+   = E (B + k1/2) + (dt f(pred) + g(pred)) / 2.
    // With mu = 0 this is the classical stochastic Heun step; without noise it
    // is a deterministic Heun step in the integrating-factor frame (exact for
    // pure dissipation).  Treating the diagonal dissipation exactly removes
    // the stiffness constraint and the noise-dissipation mean-square
    // instability an explicit treatment would reintroduce at large mu.
    auto f_eval = [&](const SpectralField& B) {
        SpectralField f(n);
        if (cfg.hall_enabled) {
            double chi2 = chi2_of(cfg, w1inf_norm(B, 4 * n));
            if (chi2 != 0.0) f.axpy(-chi2, truncate(leray_project(hall_term(B)), n));
        }
        return f;
    };
    auto g_eval = [&](const SpectralField& B) {
        SpectralField g(n);
        for (int k = 0; k < basis.K(); ++k)
            g.axpy(w.dW[k], transport_apply(noise_coeff_at(basis, k, n), B));
        return leray_project(g);
    };
    try {
        SpectralField k1 = g_eval(state.B);
        k1.axpy(cfg.dt, f_eval(state.B));
        SpectralField pred = state.B;
        pred += k1;
        apply_em_dissipation(pred, cfg.alpha, cfg.mu, cfg.dt);
        if (!pred.all_finite()) {
            state.B = pred;
        } else {
            SpectralField f2 = f_eval(pred);
            SpectralField g2 = g_eval(pred);
            SpectralField next = state.B;
            next.axpy(0.5, k1);
            apply_em_dissipation(next, cfg.alpha, cfg.mu, cfg.dt);
            next.axpy(0.5 * cfg.dt, f2);
            next.axpy(0.5, g2);
            state.B = leray_project(next);
        }
    } catch (const std::invalid_argument&) {
        state.blown_up = true;
    }
    state.t += cfg.dt;
    if (!state.B.all_finite()) state.blown_up = true;
}

std::vector<std::string> detect_stopping(TrajectoryState& state, const SolverConfig& cfg,
                                         double w1inf_value, double hs_value) {
    std::vector<std::string> events;
    if (!state.B.all_finite() || !std::isfinite(w1inf_value) || !std::isfinite(hs_value)) {
        // The stepper may have set blown_up already; the event still belongs to
        // this detection (the driver stops at the first non-finite sample).
        events.push_back("blow_up");
        state.blown_up = true;
        return events;
    }
    if (!state.sigma_r_hit && w1inf_value > 0.5 * cfg.r) {
        state.sigma_r_hit = state.t;
        events.push_back("sigma_r");
    }
    for (double level : cfg.ladder) {
        if (hs_value >= level && state.ladder_hits.find(level) == state.ladder_hits.end()) {
            state.ladder_hits[level] = state.t;
            events.push_back("ladder:" + format_double(level));
        }
    }
    if (!cfg.ladder.empty() && state.ladder_hits.count(cfg.ladder.back()) && !state.blown_up) {
        state.blown_up = true;
        events.push_back("blow_up");
    }
    return events;
}

std::vector<std::string> detect_stopping(TrajectoryState& state, const SolverConfig& cfg) {
    double wv = state.B.all_finite() ? w1inf_norm(state.B, 4 * cfg.n)
                                     : std::numeric_limits<double>::quiet_NaN();
    double hs = sobolev_norm(state.B, cfg.s);
    return detect_stopping(state, cfg, wv, hs);
}

namespace integrator_detail {

StepWorkspace::StepWorkspace(const SolverConfig& cfg, const NoiseBasis& basis)
    : cfg_(cfg), basis_(basis), n_(cfg.n), Mp_(product_pad_size(cfg.n)), Mw_(4 * cfg.n) {
    for (int k = 0; k < basis_.K(); ++k)
        c_grids_.push_back(inverse_transform(noise_coeff_at(basis_, k, n_), Mp_));
    SpectralField probe(n_);
    exp_factor_.assign(probe.modes(), 1.0);
    probe.for_each_mode([&](const Mode& k) {
        exp_factor_[probe.index(k.x, k.y, k.z)] =
            em_dissipation_factor(k, cfg_.alpha, cfg_.mu, cfg_.dt);
    });
}

double StepWorkspace::w1inf(const SpectralField& B) const {
    if (!B.all_finite()) return std::numeric_limits<double>::quiet_NaN();
    return w1inf_norm(B, Mw_);
}

void StepWorkspace::seed_w1inf(const SpectralField& B) { w_current_ = w1inf(B); }

StepWorkspace::Stage StepWorkspace::evaluate(const SpectralField& B, const WienerIncrement& w,
                                             double w1inf_value, SpectralField* corr) {
    Stage stage;
    stage.f = SpectralField(n_);
    stage.chi2 = chi2_of(cfg_, w1inf_value);
    const std::size_t pts = static_cast<std::size_t>(Mp_) * Mp_ * Mp_;

    // Gradient grids, shared by the transport noise and the Ito correction.
    std::array<GridField, 3> dB;
    const bool need_grad = basis_.K() > 0;
    if (need_grad)
        for (int a = 0; a < 3; ++a) dB[a] = inverse_transform(differentiate(B, a + 1), Mp_);

    if (cfg_.hall_enabled && stage.chi2 != 0.0) {
        SpectralField Jspec = curl(B);
        GridField Jg = inverse_transform(Jspec, Mp_);
        GridField Bg = inverse_transform(B, Mp_);
        GridField prod(Mp_);
        const double* fx = Jg.component(0);
        const double* fy = Jg.component(1);
        const double* fz = Jg.component(2);
        const double* gx = Bg.component(0);
        const double* gy = Bg.component(1);
        const double* gz = Bg.component(2);
        double* px = prod.component(0);
        double* py = prod.component(1);
        double* pz = prod.component(2);
        for (std::size_t i = 0; i < pts; ++i) {
            px[i] = fy[i] * gz[i] - fz[i] * gy[i];
            py[i] = fz[i] * gx[i] - fx[i] * gz[i];
            pz[i] = fx[i] * gy[i] - fy[i] * gx[i];
        }
        SpectralField cross_spec = truncate(forward_transform(prod, n_), n_);
        detail::corner_alias_fix(cross_spec, Jspec, B, detail::coeff_cross, Mp_);
        stage.f.axpy(-stage.chi2, leray_project(curl(cross_spec)));
    }

    auto transport_grid = [&](const GridField& cg, const std::array<GridField, 3>& grads,
                              const SpectralField& c_spec, const SpectralField& src) {
        GridField prod(Mp_);
        const double* cx = cg.component(0);
        const double* cy = cg.component(1);
        const double* cz = cg.component(2);
        for (int i = 0; i < 3; ++i) {
            const double* a1 = grads[0].component(i);
            const double* a2 = grads[1].component(i);
            const double* a3 = grads[2].component(i);
            double* out = prod.component(i);
            for (std::size_t p = 0; p < pts; ++p)
                out[p] = cx[p] * a1[p] + cy[p] * a2[p] + cz[p] * a3[p];
        }
        SpectralField res = truncate(forward_transform(prod, n_), n_);
        detail::corner_alias_fix(res, c_spec, src, detail::coeff_transport, Mp_);
        return res;
    };

    if (corr != nullptr && basis_.K() > 0) {
        SpectralField acc(n_);
        for (int k = 0; k < basis_.K(); ++k) {
            SpectralField c_spec = noise_coeff_at(basis_, k, n_);
            SpectralField u = leray_project(transport_grid(c_grids_[k], dB, c_spec, B));
            std::array<GridField, 3> du;
            for (int a = 0; a < 3; ++a) du[a] = inverse_transform(differentiate(u, a + 1), Mp_);
            acc += transport_grid(c_grids_[k], du, c_spec, u);
        }
        acc *= 0.5;
        *corr = leray_project(acc);
    }

    if (basis_.K() > 0) {
        GridField ceff_grid(Mp_);
        SpectralField ceff_spec(n_);
        for (int k = 0; k < basis_.K(); ++k) {
            double* dst = ceff_grid.data();
            const double* srcg = c_grids_[k].data();
            const double dWk = w.dW[k];
            for (std::size_t i = 0; i < 3 * pts; ++i) dst[i] += dWk * srcg[i];
            ceff_spec.axpy(dWk, noise_coeff_at(basis_, k, n_));
        }
        stage.g = leray_project(transport_grid(ceff_grid, dB, ceff_spec, B));
    } else {
        stage.g = SpectralField(n_);
    }
    return stage;
}

void StepWorkspace::step_em(TrajectoryState& state, const WienerIncrement& w) {
    SpectralField corr(n_);
    Stage st = evaluate(state.B, w, w_current_, &corr);
    SpectralField bracket = state.B;
    bracket.axpy(cfg_.dt, st.f);
    if (basis_.K() > 0) bracket.axpy(cfg_.dt, corr);
    bracket += st.g;
    const std::size_t m = bracket.modes();
    for (std::size_t i = 0; i < m; ++i) {
        double factor = exp_factor_[i];
        bracket.data()[i] *= factor;
        bracket.data()[m + i] *= factor;
        bracket.data()[2 * m + i] *= factor;
    }
    state.B = leray_project(bracket);
}

void StepWorkspace::step_heun(TrajectoryState& state, const WienerIncrement& w) {
    auto decay = [&](SpectralField& X) {
        const std::size_t m = X.modes();
        for (std::size_t i = 0; i < m; ++i) {
            double factor = exp_factor_[i];
            X.data()[i] *= factor;
            X.data()[m + i] *= factor;
            X.data()[2 * m + i] *= factor;
        }
    };
    Stage s1 = evaluate(state.B, w, w_current_, nullptr);
    SpectralField k1 = s1.g;
    k1.axpy(cfg_.dt, s1.f);
    SpectralField pred = state.B;
    pred += k1;
    decay(pred);
    if (!pred.all_finite()) {
        state.B = pred;
        return;
    }
    Stage s2 = evaluate(pred, w, w1inf(pred), nullptr);
    SpectralField next = state.B;
    next.axpy(0.5, k1);
    decay(next);
    next.axpy(0.5 * cfg_.dt, s2.f);
    next.axpy(0.5, s2.g);
    state.B = leray_project(next);
}

void StepWorkspace::step(TrajectoryState& state, const WienerIncrement& w) {
    try {
        if (cfg_.scheme == Scheme::exponential_em)
            step_em(state, w);
        else
            step_heun(state, w);
    } catch (const std::invalid_argument&) {
        state.blown_up = true;
    }
    state.t += cfg_.dt;
    if (!state.B.all_finite()) state.blown_up = true;
    w_current_ = w1inf(state.B);
}

}  // namespace integrator_detail

TrajectoryRecord run_trajectory(const SolverConfig& cfg, std::uint32_t path_id, double p_moment,
                                const DiagnosticsSink& sink) {
    validate(cfg);
    NoiseBasis basis;
    if (cfg.K > 0) basis = build_noise_basis(cfg.K, cfg.gamma, cfg.s, cfg.n, cfg.seed);

    SpectralField B0;
    if (cfg.init.family == InitFamily::checkpoint) {
        CheckpointData ck = read_checkpoint(cfg.init.checkpoint_path);
        if (ck.B.n() > cfg.n)
            throw std::invalid_argument(
                "config: checkpoint truncation exceeds the run truncation");
        B0 = ck.B.n() == cfg.n ? std::move(ck.B) : embed(ck.B, cfg.n);
    } else {
        B0 = make_initial_data(cfg.init, cfg.n, cfg.seed);
    }
    B0 = truncate(leray_project(B0), cfg.n);

    TrajectoryState state;
    state.B = std::move(B0);

    integrator_detail::StepWorkspace ws(cfg, basis);
    ws.seed_w1inf(state.B);
    RngStream stream(cfg.seed, path_id, RngDomain::increments);
    const long steps = std::lround(cfg.T / cfg.dt);

    TrajectoryRecord rec;
    double hs = sobolev_norm(state.B, cfg.s);
    double hs_a2 = sobolev_norm(state.B, cfg.s + 0.5 * cfg.alpha);
    rec.summary.sup_hs2 = hs * hs;
    rec.summary.sup_hs_p = std::pow(hs, p_moment);

    auto chi_now = [&]() {
        return cfg.cutoff_enabled ? cutoff_value(CutoffProfile{cfg.r}, ws.current_w1inf()) : 1.0;
    };
    auto emit_row = [&](const std::vector<std::string>& evs, double w1inf_value) {
        rec.rows.push_back(sample_diagnostics(state.B, state.t, cfg.s, cfg.alpha, chi_now(),
                                              w1inf_value, evs));
        if (sink) sink(rec.rows.back());
    };
    std::vector<std::string> events = detect_stopping(state, cfg, ws.current_w1inf(), hs);
    emit_row(events, ws.current_w1inf());

    for (long i = 1; i <= steps && !state.blown_up; ++i) {
        WienerIncrement w;
        w.dt = cfg.dt;
        if (cfg.K > 0)
            w = sample_increments(cfg.dt, cfg.K, stream, static_cast<std::uint32_t>(i));
        ws.step(state, w);

        hs = state.B.all_finite() ? sobolev_norm(state.B, cfg.s)
                                  : std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(hs)) {
            hs_a2 = sobolev_norm(state.B, cfg.s + 0.5 * cfg.alpha);
            rec.summary.sup_hs2 = std::max(rec.summary.sup_hs2, hs * hs);
            rec.summary.sup_hs_p = std::max(rec.summary.sup_hs_p, std::pow(hs, p_moment));
            rec.summary.int_hs_alpha2 +=
                cfg.dt * std::pow(hs, p_moment - 2.0) * hs_a2 * hs_a2;
        }
        events = detect_stopping(state, cfg, ws.current_w1inf(), hs);
        if (i % cfg.diag_interval == 0 || i == steps || !events.empty() || state.blown_up)
            emit_row(events, ws.current_w1inf());
    }

    rec.summary.final_l2 = l2_norm(state.B);
    rec.summary.final_hs = state.B.all_finite() ? sobolev_norm(state.B, cfg.s)
                                                : std::numeric_limits<double>::quiet_NaN();
    rec.summary.final_t = state.t;
    rec.final_state = std::move(state);
    return rec;
}

}  // namespace emhd
