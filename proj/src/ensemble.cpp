#include "emhd/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "emhd/diagnostics.hpp"

namespace emhd {

namespace {

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
    const double n = static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += x;
    mean = acc / n;
    if (xs.size() < 2) {
        se = 0.0;
        return;
    }
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    se = std::sqrt(var / n);
}

}  // namespace

EnsembleResult run_ensemble(const RunConfig& cfg, bool write_outputs) {
    validate(cfg.solver);
    if (cfg.ensemble_size < 1)
        throw std::invalid_argument("config: ensemble_size must be >= 1");
    const int N = cfg.ensemble_size;
    const int workers = std::max(1, std::min(cfg.workers, N));

    if (write_outputs) std::filesystem::create_directories(cfg.output_dir);

    std::vector<PathResult> results(static_cast<std::size_t>(N));
    std::vector<std::string> failures(static_cast<std::size_t>(N));
    std::atomic<int> next{0};

    auto worker = [&]() {
        while (true) {
            int id = next.fetch_add(1);
            if (id >= N) return;
            try {
                TrajectoryRecord rec =
                    run_trajectory(cfg.solver, static_cast<std::uint32_t>(id), cfg.p);
                PathResult pr;
                pr.path_id = static_cast<std::uint32_t>(id);
                pr.summary = rec.summary;
                pr.blown_up = rec.final_state.blown_up;
                pr.sigma_r_hit = rec.final_state.sigma_r_hit;
                results[static_cast<std::size_t>(id)] = pr;
                if (write_outputs) {
                    std::filesystem::path file =
                        std::filesystem::path(cfg.output_dir) /
                        ("path_" + std::to_string(id) + ".ndjson");
                    std::ofstream out(file, std::ios::trunc);
                    if (!out)
                        throw std::runtime_error("cannot open '" + file.string() + "'");
                    for (const DiagnosticsRecord& row : rec.rows) out << to_ndjson(row) << '\n';
                }
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(id)] = e.what();
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (int id = 0; id < N; ++id)
        if (!failures[static_cast<std::size_t>(id)].empty())
            throw std::runtime_error("path " + std::to_string(id) + ": " +
                                     failures[static_cast<std::size_t>(id)]);

    EnsembleResult agg;
    agg.paths = std::move(results);
    agg.p = cfg.p;
    std::vector<double> sups, ints, totals;
    for (const PathResult& pr : agg.paths) {
        sups.push_back(pr.summary.sup_hs_p);
        ints.push_back(pr.summary.int_hs_alpha2);
        totals.push_back(pr.summary.sup_hs_p + pr.summary.int_hs_alpha2);
        if (pr.blown_up) ++agg.blowups;
    }
    mean_se(sups, agg.mean_sup_hs_p, agg.se_sup_hs_p);
    mean_se(ints, agg.mean_int_hs_alpha2, agg.se_int_hs_alpha2);
    mean_se(totals, agg.mean_energy_functional, agg.se_energy_functional);

    if (write_outputs) {
        std::filesystem::path file = std::filesystem::path(cfg.output_dir) / "aggregate.json";
        std::ofstream out(file, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + file.string() + "'");
        out << aggregate_to_json(agg) << '\n';
    }
    return agg;
}

std::string aggregate_to_json(const EnsembleResult& r) {
    std::string s = "{\"paths\":" + std::to_string(r.paths.size());
    s += ",\"p\":" + format_double(r.p);
    s += ",\"mean_sup_hs_p\":" + format_double(r.mean_sup_hs_p);
    s += ",\"se_sup_hs_p\":" + format_double(r.se_sup_hs_p);
    s += ",\"mean_int_hs_alpha2\":" + format_double(r.mean_int_hs_alpha2);
    s += ",\"se_int_hs_alpha2\":" + format_double(r.se_int_hs_alpha2);
    s += ",\"mean_energy_functional\":" + format_double(r.mean_energy_functional);
    s += ",\"se_energy_functional\":" + format_double(r.se_energy_functional);
    s += ",\"blowups\":" + std::to_string(r.blowups);
    s += ",\"per_path\":[";
    for (std::size_t i = 0; i < r.paths.size(); ++i) {
        const PathResult& pr = r.paths[i];
        if (i) s += ',';
        s += "{\"path_id\":" + std::to_string(pr.path_id);
        s += ",\"sup_hs_p\":" + format_double(pr.summary.sup_hs_p);
        s += ",\"int_hs_alpha2\":" + format_double(pr.summary.int_hs_alpha2);
        s += ",\"final_l2\":" + format_double(pr.summary.final_l2);
        s += ",\"final_hs\":" + format_double(pr.summary.final_hs);
        s += ",\"final_t\":" + format_double(pr.summary.final_t);
        s += ",\"sigma_r_hit\":";
        s += pr.sigma_r_hit ? format_double(*pr.sigma_r_hit) : "null";
        s += ",\"blown_up\":";
        s += pr.blown_up ? "true" : "false";
        s += '}';
    }
    s += "]}";
    return s;
}

}  // namespace emhd
