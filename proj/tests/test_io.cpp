// Config schema, checkpoint format, NDJSON diagnostics, CLI harness, and
// ensemble determinism: parse/emit round trips, bitwise checkpoint fidelity,
// corruption detection, byte-identical reruns, worker-count invariance, and
// exit-code contracts.

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include "emhd/checkpoint.hpp"
#include "emhd/config.hpp"
#include "emhd/diagnostics.hpp"
#include "emhd/ensemble.hpp"
#include "emhd/harness.hpp"
#include "emhd/initial_data.hpp"
#include "emhd/integrator.hpp"
#include "test_framework.hpp"

using namespace emhd;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    fs::path p = fs::temp_directory_path() /
                 ("emhd_io_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small, stable run: n = 4 damped transport noise with the cutoff on its
// plateau; 10 steps.
SolverConfig small_solver() {
    SolverConfig cfg;
    cfg.n = 4;
    cfg.K = 2;
    cfg.gamma = 6.0;
    cfg.s = 3.1;
    cfg.alpha = 1.5;
    cfg.mu = 5.0;
    cfg.r = 10.0;
    cfg.dt = 1e-3;
    cfg.T = 0.01;
    cfg.seed = 11;
    cfg.init.family = InitFamily::random_hs;
    cfg.init.amplitude = 1.0;
    cfg.init.decay = 2.5;
    return cfg;
}

bool has_error(const ParsedConfig& pc, const std::string& key, const std::string& fragment) {
    for (const auto& e : pc.errors)
        if (e.key == key && e.message.find(fragment) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(config_empty_text_yields_defaults) {
    ParsedConfig pc = parse_config("");
    CHECK(pc.ok());
    CHECK(pc.config == RunConfig{});
}

TEST(config_emit_parse_round_trip_is_exact) {
    ParsedConfig defaults = parse_config(emit_config(RunConfig{}));
    CHECK(defaults.ok());
    CHECK(defaults.config == RunConfig{});

    RunConfig c;
    c.solver.n = 5;
    c.solver.alpha = 1.2;
    c.solver.mu = 0.25;
    c.solver.r = 2.5;
    c.solver.s = 3.5;
    c.solver.K = 3;
    c.solver.gamma = 6.5;
    c.solver.dt = 5e-4;
    c.solver.T = 0.25;
    c.solver.seed = 987654321;
    c.solver.scheme = Scheme::stratonovich_heun;
    c.solver.cutoff_enabled = false;
    c.solver.hall_enabled = false;
    c.solver.ladder = {1.5, 2.75, 9.0};
    c.solver.diag_interval = 7;
    c.solver.init.family = InitFamily::single_mode;
    c.solver.init.mode = Mode{2, -1, 0};
    c.solver.init.amplitude = 0.75;
    c.solver.init.shell = 2;
    c.solver.init.decay = 2.25;
    c.solver.init.checkpoint_path = "warm.ckpt";
    c.output_dir = "custom_out";
    c.ensemble_size = 12;
    c.workers = 3;
    c.deterministic = false;
    c.p = 4.0;
    ParsedConfig back = parse_config(emit_config(c));
    CHECK(back.ok());
    CHECK(back.config == c);
}

TEST(config_alpha_out_of_range_names_the_interval) {
    ParsedConfig pc = parse_config("alpha = 3\n");
    CHECK(!pc.ok());
    CHECK(has_error(pc, "alpha", "(1, 2]"));
    pc = parse_config("alpha = 1\n");  // boundary: interval is open at 1
    CHECK(has_error(pc, "alpha", "(1, 2]"));
    pc = parse_config("alpha = 2\n");  // closed at 2
    CHECK(pc.ok());
}

TEST(config_errors_are_exhaustive_not_first_failure) {
    ParsedConfig pc = parse_config(
        "frobnicate = 1\n"
        "n = soup\n"
        "dt = -1\n"
        "just a line\n");
    CHECK(!pc.ok());
    CHECK(pc.errors.size() == 4);
    CHECK(has_error(pc, "frobnicate", "unknown key"));
    CHECK(has_error(pc, "n", "cannot parse value 'soup'"));
    CHECK(has_error(pc, "dt", "dt must be > 0"));
    CHECK(has_error(pc, "just a line", "expected key = value"));
}

TEST(config_overrides_revalidate_cross_field_constraints) {
    ParsedConfig pc = parse_config("K = 2\n");
    CHECK(pc.ok());  // default gamma 6 > s + 5/2 = 5.6
    apply_override(pc, "gamma", "5");
    finalize_config(pc);
    CHECK(has_error(pc, "gamma", "gamma must exceed s + 5/2"));

    ParsedConfig pc2 = parse_config("K = 2\ngamma = 7\n");
    CHECK(pc2.ok());
    apply_override(pc2, "bogus_key", "1");
    finalize_config(pc2);
    CHECK(has_error(pc2, "bogus_key", "unknown key"));
}

TEST(checkpoint_round_trip_is_bitwise) {
    CheckpointData ck;
    ck.alpha = 1.7;
    ck.mu = 0.3;
    ck.r = 2.5;
    ck.s = 3.2;
    ck.t = 0.375;
    ck.seed = 123456789;
    ck.path_id = 42;
    InitSpec spec;
    spec.family = InitFamily::random_hs;
    spec.amplitude = 1.3;
    spec.decay = 2.2;
    ck.B = make_initial_data(spec, 5, 7);
    ck.basis = build_noise_basis(3, 6.0, 3.1, 5, 7);

    fs::path dir = fresh_dir("ckpt");
    fs::path file = dir / "state.ckpt";
    write_checkpoint(ck, file.string());
    CheckpointData rt = read_checkpoint(file.string());

    CHECK(rt.alpha == ck.alpha);
    CHECK(rt.mu == ck.mu);
    CHECK(rt.r == ck.r);
    CHECK(rt.s == ck.s);
    CHECK(rt.t == ck.t);
    CHECK(rt.seed == ck.seed);
    CHECK(rt.path_id == ck.path_id);
    REQUIRE(rt.B.n() == ck.B.n());
    CHECK(std::memcmp(rt.B.data(), ck.B.data(), 3 * ck.B.modes() * sizeof(complexd)) == 0);
    REQUIRE(rt.basis.K() == ck.basis.K());
    CHECK(rt.basis.gamma == ck.basis.gamma);
    CHECK(rt.basis.s == ck.basis.s);
    CHECK(rt.basis.seed == ck.basis.seed);
    for (int k = 0; k < ck.basis.K(); ++k) {
        const NoiseField& a = ck.basis.fields[static_cast<std::size_t>(k)];
        const NoiseField& b = rt.basis.fields[static_cast<std::size_t>(k)];
        CHECK(a.m.x == b.m.x && a.m.y == b.m.y && a.m.z == b.m.z);
        CHECK(a.pol[0] == b.pol[0] && a.pol[1] == b.pol[1] && a.pol[2] == b.pol[2]);
        CHECK(a.theta == b.theta);
        CHECK(a.is_sine == b.is_sine);
    }
    CHECK(rt.basis.regularity_budget(4.1) == ck.basis.regularity_budget(4.1));
    fs::remove_all(dir);
}

TEST(checkpoint_corruption_is_detected) {
    CheckpointData ck;
    InitSpec spec;
    spec.family = InitFamily::random_hs;
    spec.amplitude = 1.0;
    spec.decay = 2.5;
    ck.B = make_initial_data(spec, 3, 1);
    fs::path dir = fresh_dir("corrupt");
    fs::path file = dir / "state.ckpt";
    write_checkpoint(ck, file.string());
    std::string bytes = slurp(file);

    auto expect_throw = [&](const std::string& mutated, const char* label) {
        fs::path victim = dir / (std::string(label) + ".ckpt");
        std::ofstream out(victim, std::ios::binary | std::ios::trunc);
        out.write(mutated.data(), static_cast<std::streamsize>(mutated.size()));
        out.close();
        bool threw = false;
        try {
            read_checkpoint(victim.string());
        } catch (const std::runtime_error&) {
            threw = true;
        }
        CHECK_MSG(threw, label);
    };

    std::string truncated = bytes.substr(0, bytes.size() / 2);
    expect_throw(truncated, "truncated");

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    expect_throw(bad_magic, "bad_magic");

    std::string bad_version = bytes;
    bad_version[4] = static_cast<char>(bad_version[4] + 1);
    expect_throw(bad_version, "bad_version");

    bool threw_missing = false;
    try {
        read_checkpoint((dir / "does_not_exist.ckpt").string());
    } catch (const std::runtime_error&) {
        threw_missing = true;
    }
    CHECK(threw_missing);
    fs::remove_all(dir);
}

TEST(ndjson_rows_round_trip_losslessly) {
    InitSpec spec;
    spec.family = InitFamily::random_hs;
    spec.amplitude = 1.1;
    spec.decay = 2.4;
    SpectralField B = make_initial_data(spec, 4, 3);

    DiagnosticsRecord rec = sample_diagnostics(B, 1.0 / 3.0, 3.1, 1.5, 0.8125, 3.14159265358979,
                                               {"sigma_r", "ladder:1.5"});
    DiagnosticsRecord back = diagnostics_from_ndjson(to_ndjson(rec));
    CHECK(back == rec);

    DiagnosticsRecord plain = sample_diagnostics(B, 0.7, 2.6, 2.0, 1.0, 0.1, {});
    CHECK(diagnostics_from_ndjson(to_ndjson(plain)) == plain);

    bool threw = false;
    try {
        diagnostics_from_ndjson("{\"t\":0.0");
    } catch (const std::exception&) {
        threw = true;
    }
    CHECK(threw);
}

TEST(run_command_is_byte_identical_across_reruns) {
    RunConfig rc;
    rc.solver = small_solver();
    fs::path a = fresh_dir("runA"), b = fresh_dir("runB");
    rc.output_dir = a.string();
    CHECK(cmd_run(rc) == 0);
    rc.output_dir = b.string();
    CHECK(cmd_run(rc) == 0);
    CHECK(slurp(a / "run.ndjson") == slurp(b / "run.ndjson"));
    CHECK(slurp(a / "final.ckpt") == slurp(b / "final.ckpt"));
    CHECK(!slurp(a / "run.ndjson").empty());
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(outdir_environment_variable_wins) {
    fs::path envdir = fresh_dir("envout");
    fs::path ignored = fs::temp_directory_path() / "emhd_io_should_not_exist";
    fs::remove_all(ignored);

    ::setenv("EMHD_OUTDIR", envdir.string().c_str(), 1);
    CHECK(effective_output_dir("whatever") == envdir.string());
    RunConfig rc;
    rc.solver = small_solver();
    rc.solver.T = 0.002;
    rc.output_dir = ignored.string();
    CHECK(cmd_run(rc) == 0);
    CHECK(fs::exists(envdir / "run.ndjson"));
    CHECK(!fs::exists(ignored));

    ::setenv("EMHD_OUTDIR", "", 1);  // empty value falls back to the config
    CHECK(effective_output_dir("configured") == "configured");
    ::unsetenv("EMHD_OUTDIR");
    CHECK(effective_output_dir("configured") == "configured");
    fs::remove_all(envdir);
}

TEST(ensemble_of_one_reproduces_the_single_path) {
    RunConfig rc;
    rc.solver = small_solver();
    rc.ensemble_size = 1;
    rc.workers = 1;
    EnsembleResult agg = run_ensemble(rc, false);
    TrajectoryRecord rec = run_trajectory(rc.solver, 0, rc.p);
    REQUIRE(agg.paths.size() == 1);
    CHECK(agg.paths[0].summary.sup_hs_p == rec.summary.sup_hs_p);
    CHECK(agg.paths[0].summary.int_hs_alpha2 == rec.summary.int_hs_alpha2);
    CHECK(agg.paths[0].summary.final_l2 == rec.summary.final_l2);
    CHECK(agg.paths[0].summary.final_hs == rec.summary.final_hs);
    CHECK(agg.paths[0].summary.final_t == rec.summary.final_t);
    CHECK(agg.mean_sup_hs_p == rec.summary.sup_hs_p);
}

TEST(ensemble_outputs_invariant_under_worker_count) {
    RunConfig rc;
    rc.solver = small_solver();
    rc.ensemble_size = 6;
    fs::path w1 = fresh_dir("workers1"), w3 = fresh_dir("workers3");

    rc.workers = 1;
    rc.output_dir = w1.string();
    EnsembleResult a = run_ensemble(rc, true);
    rc.workers = 3;
    rc.output_dir = w3.string();
    EnsembleResult b = run_ensemble(rc, true);

    CHECK(aggregate_to_json(a) == aggregate_to_json(b));
    for (int id = 0; id < rc.ensemble_size; ++id) {
        std::string name = "path_" + std::to_string(id) + ".ndjson";
        CHECK_MSG(slurp(w1 / name) == slurp(w3 / name), name);
    }
    CHECK(slurp(w1 / "aggregate.json") == slurp(w3 / "aggregate.json"));
    fs::remove_all(w1);
    fs::remove_all(w3);
}

TEST(zero_initial_data_is_absorbing) {
    SolverConfig cfg = small_solver();
    cfg.init = InitSpec{};
    cfg.init.family = InitFamily::zero;
    cfg.T = 0.005;
    TrajectoryRecord rec = run_trajectory(cfg, 0);
    CHECK(rec.summary.final_l2 == 0.0);
    for (const auto& row : rec.rows) {
        CHECK(row.l2 == 0.0);
        CHECK(row.hs == 0.0);
    }
}

TEST(verify_command_exit_codes_and_checks_file) {
    fs::path dir = fresh_dir("verify");
    AblationFlags flags;
    CHECK(cmd_verify("bookkeeping", flags, 0, dir.string()) == 0);
    std::string checks = slurp(dir / "checks.ndjson");
    int lines = 0;
    for (char c : checks)
        if (c == '\n') ++lines;
    CHECK(lines == 2);
    CHECK(cmd_verify("nonsense", flags, 0, dir.string()) == 2);
    CHECK(cmd_verify("", flags, 0, dir.string()) == 2);
    fs::remove_all(dir);
}

TEST(inspect_and_harness_dispatch_exit_codes) {
    CHECK(cmd_inspect("/nonexistent/definitely_missing.ckpt") == 1);

    CheckpointData ck;
    InitSpec spec;
    spec.family = InitFamily::random_hs;
    spec.amplitude = 1.0;
    spec.decay = 2.5;
    ck.B = make_initial_data(spec, 3, 2);
    ck.basis = build_noise_basis(2, 6.0, 3.1, 3, 2);
    fs::path dir = fresh_dir("inspect");
    fs::path file = dir / "state.ckpt";
    write_checkpoint(ck, file.string());
    CHECK(cmd_inspect(file.string()) == 0);

    auto run_main = [](std::initializer_list<const char*> argv) {
        std::vector<const char*> v(argv);
        return harness_main(static_cast<int>(v.size()), v.data());
    };
    CHECK(run_main({"emhd", "help"}) == 0);
    CHECK(run_main({"emhd"}) == 2);
    CHECK(run_main({"emhd", "bogus"}) == 2);
    CHECK(run_main({"emhd", "inspect"}) == 2);
    CHECK(run_main({"emhd", "run", "--n", "0"}) == 2);
    CHECK(run_main({"emhd", "run", "--not-a-key", "1"}) == 2);
    CHECK(run_main({"emhd", "verify"}) == 2);
    fs::remove_all(dir);
}

TEST_MAIN()
