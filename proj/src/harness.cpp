#include "emhd/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "emhd/checkpoint.hpp"

namespace emhd {

namespace {

const char* usage_text =
    "usage: emhd <subcommand> [options]\n"
    "\n"
    "subcommands:\n"
    "  run       one trajectory; writes <out>/run.ndjson and <out>/final.ckpt\n"
    "  ensemble  N paths on a worker pool; per-path NDJSON + <out>/aggregate.json\n"
    "  verify    <selector> [--ablate-aliased] [--ablate-nondivfree] [--ablate-lp]\n"
    "            selectors: identities commutators bernstein scheme conservation\n"
    "                       energy uniqueness cutoff bookkeeping all\n"
    "  inspect   <checkpoint>; pretty-prints header, norms, noise basis\n"
    "\n"
    "options (run/ensemble/verify):\n"
    "  --config <file>   key=value config file (see README for the schema)\n"
    "  --<key> <value>   override any config key, e.g. --n 16 --dt 5e-4\n"
    "\n"
    "EMHD_OUTDIR overrides the output directory.\n";

std::string normalize_key(std::string key) {
    for (char& c : key)
        if (c == '-') c = '_';
    return key;
}

void print_errors(const std::vector<ConfigError>& errors) {
    for (const auto& e : errors)
        std::cerr << "{\"key\":\"" << e.key << "\",\"message\":\"" << e.message << "\"}\n";
}

// Shared flag parsing for run/ensemble: --config file first, then overrides
// in order of appearance. Returns false (after printing errors) on failure.
bool parse_cli_config(const std::vector<std::string>& args, ParsedConfig& parsed) {
    parsed = ParsedConfig{};
    std::vector<std::pair<std::string, std::string>> overrides;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string a = args[i];
        if (a.rfind("--", 0) != 0) {
            std::cerr << "unexpected argument: " << a << "\n";
            return false;
        }
        a = a.substr(2);
        std::string key, value;
        auto eq = a.find('=');
        if (eq != std::string::npos) {
            key = a.substr(0, eq);
            value = a.substr(eq + 1);
        } else {
            key = a;
            if (i + 1 >= args.size()) {
                std::cerr << "missing value for --" << key << "\n";
                return false;
            }
            value = args[++i];
        }
        key = normalize_key(key);
        if (key == "config") {
            std::ifstream in(value);
            if (!in) {
                std::cerr << "cannot read config file: " << value << "\n";
                return false;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            ParsedConfig file_parsed = parse_config(ss.str());
            parsed.config = file_parsed.config;
            parsed.errors = file_parsed.errors;
        } else {
            overrides.emplace_back(key, value);
        }
    }
    for (const auto& [k, v] : overrides) apply_override(parsed, k, v);
    finalize_config(parsed);
    if (!parsed.ok()) {
        print_errors(parsed.errors);
        return false;
    }
    return true;
}

}  // namespace

std::string effective_output_dir(const std::string& configured) {
    const char* env = std::getenv("EMHD_OUTDIR");
    if (env && *env) return env;
    return configured;
}

int cmd_run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    const std::string outdir = effective_output_dir(cfg.output_dir);
    fs::create_directories(outdir);
    const std::string ndjson_path = outdir + "/run.ndjson";
    std::ofstream out(ndjson_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "cannot open " << ndjson_path << " for writing\n";
        return 1;
    }
    TrajectoryRecord rec = run_trajectory(cfg.solver, 0, cfg.p, [&](const DiagnosticsRecord& row) {
        out << to_ndjson(row) << "\n";
        out.flush();
    });
    out.close();

    CheckpointData ck;
    ck.alpha = cfg.solver.alpha;
    ck.mu = cfg.solver.mu;
    ck.r = cfg.solver.r;
    ck.s = cfg.solver.s;
    ck.t = rec.final_state.t;
    ck.seed = cfg.solver.seed;
    ck.path_id = 0;
    ck.B = rec.final_state.B;
    if (cfg.solver.K > 0)
        ck.basis = build_noise_basis(cfg.solver.K, cfg.solver.gamma, cfg.solver.s, cfg.solver.n,
                                     cfg.solver.seed);
    const std::string ck_path = outdir + "/final.ckpt";
    write_checkpoint(ck, ck_path);

    std::cout << "run: t=" << format_double(rec.summary.final_t)
              << " l2=" << format_double(rec.summary.final_l2)
              << " hs=" << format_double(rec.summary.final_hs)
              << " sup_hs2=" << format_double(rec.summary.sup_hs2) << "\n";
    if (rec.final_state.sigma_r_hit)
        std::cout << "event: sigma_r at t=" << format_double(*rec.final_state.sigma_r_hit)
                  << "\n";
    for (const auto& [level, t] : rec.final_state.ladder_hits)
        std::cout << "event: ladder " << format_double(level) << " at t=" << format_double(t)
                  << "\n";
    if (rec.final_state.blown_up) std::cout << "event: blow_up\n";
    std::cout << "wrote " << ndjson_path << " (" << rec.rows.size() << " rows), " << ck_path
              << "\n";
    return 0;
}

int cmd_ensemble(const RunConfig& cfg) {
    RunConfig effective = cfg;
    effective.output_dir = effective_output_dir(cfg.output_dir);
    EnsembleResult agg = run_ensemble(effective, true);
    std::cout << aggregate_to_json(agg) << "\n";
    return 0;
}

int cmd_verify(const std::string& selector, const AblationFlags& flags, std::uint64_t seed,
               const std::string& output_dir, const VerificationThresholds& thr) {
    if (selector.empty()) {
        std::cerr << "verify: selector required\n" << usage_text;
        return 2;
    }
    std::vector<CheckReport> reports;
    try {
        reports = run_verification(selector, flags, seed, thr);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    namespace fs = std::filesystem;
    const std::string outdir = effective_output_dir(output_dir);
    fs::create_directories(outdir);
    std::ofstream out(outdir + "/checks.ndjson", std::ios::binary | std::ios::trunc);
    bool all_pass = true;
    for (const auto& rep : reports) {
        std::string line = to_ndjson(rep);
        std::cout << line << "\n";
        out << line << "\n";
        all_pass = all_pass && rep.pass;
    }
    std::cout << (all_pass ? "verify: all checks passed" : "verify: FAILURES present") << " ("
              << reports.size() << " checks)\n";
    return all_pass ? 0 : 1;
}

int cmd_inspect(const std::string& path) {
    CheckpointData ck;
    try {
        ck = read_checkpoint(path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    std::cout << "checkpoint " << path << "\n"
              << "  version " << checkpoint_version << ", n=" << ck.B.n()
              << ", K=" << ck.basis.K() << "\n"
              << "  alpha=" << format_double(ck.alpha) << " mu=" << format_double(ck.mu)
              << " r=" << format_double(ck.r) << " s=" << format_double(ck.s) << "\n"
              << "  t=" << format_double(ck.t) << " seed=" << ck.seed
              << " path_id=" << ck.path_id << "\n"
              << "  l2=" << format_double(l2_norm(ck.B))
              << " hs=" << format_double(sobolev_norm(ck.B, ck.s))
              << " div_residual=" << format_double(divergence_residual(ck.B)) << "\n";
    for (int k = 0; k < ck.basis.K(); ++k) {
        const NoiseField& f = ck.basis.fields[static_cast<std::size_t>(k)];
        std::cout << "  c_" << k << ": m=(" << f.m.x << "," << f.m.y << "," << f.m.z << ") "
                  << (f.is_sine ? "sin" : "cos") << " theta=" << format_double(f.theta) << "\n";
    }
    return 0;
}

int harness_main(int argc, const char* const* argv) {
    if (argc < 2) {
        std::cerr << usage_text;
        return 2;
    }
    std::string sub = argv[1];
    std::vector<std::string> args(argv + 2, argv + argc);

    if (sub == "run" || sub == "ensemble") {
        ParsedConfig parsed;
        if (!parse_cli_config(args, parsed)) return 2;
        return sub == "run" ? cmd_run(parsed.config) : cmd_ensemble(parsed.config);
    }
    if (sub == "verify") {
        std::string selector;
        AblationFlags flags;
        std::uint64_t seed = 0;
        std::string outdir = "out";
        for (std::size_t i = 0; i < args.size(); ++i) {
            const std::string& a = args[i];
            if (a == "--ablate-aliased") {
                flags.aliased_products = true;
            } else if (a == "--ablate-nondivfree") {
                flags.non_divfree_noise = true;
            } else if (a == "--ablate-lp") {
                flags.perturbed_lp_profile = true;
            } else if (a.rfind("--", 0) == 0) {
                std::string body = a.substr(2);
                std::string key, value;
                auto eq = body.find('=');
                if (eq != std::string::npos) {
                    key = body.substr(0, eq);
                    value = body.substr(eq + 1);
                } else {
                    key = body;
                    if (i + 1 >= args.size()) {
                        std::cerr << "verify: missing value for --" << key << "\n";
                        return 2;
                    }
                    value = args[++i];
                }
                key = normalize_key(key);
                if (key == "seed") {
                    seed = std::strtoull(value.c_str(), nullptr, 10);
                } else if (key == "output_dir") {
                    outdir = value;
                } else {
                    std::cerr << "verify: unknown option --" << key << "\n";
                    return 2;
                }
            } else if (selector.empty()) {
                selector = a;
            } else {
                std::cerr << "verify: unexpected argument " << a << "\n";
                return 2;
            }
        }
        return cmd_verify(selector, flags, seed, outdir);
    }
    if (sub == "inspect") {
        if (args.size() != 1) {
            std::cerr << "inspect: exactly one checkpoint path required\n";
            return 2;
        }
        return cmd_inspect(args[0]);
    }
    if (sub == "--help" || sub == "-h" || sub == "help") {
        std::cout << usage_text;
        return 0;
    }
    std::cerr << "unknown subcommand: " << sub << "\n" << usage_text;
    return 2;
}

}  // namespace emhd
