#include "emhd/config.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>

#include "emhd/diagnostics.hpp"

namespace emhd {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool parse_double(const std::string& v, double& out) {
    char* end = nullptr;
    out = std::strtod(v.c_str(), &end);
    return end != v.c_str() && *end == '\0';
}

bool parse_int(const std::string& v, int& out) {
    char* end = nullptr;
    long r = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') return false;
    out = static_cast<int>(r);
    return true;
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
    if (v.empty() || v[0] == '-') return false;
    char* end = nullptr;
    out = std::strtoull(v.c_str(), &end, 10);
    return end != v.c_str() && *end == '\0';
}

bool parse_bool(const std::string& v, bool& out) {
    std::string l = lower(v);
    if (l == "true" || l == "1") {
        out = true;
        return true;
    }
    if (l == "false" || l == "0") {
        out = false;
        return true;
    }
    return false;
}

bool parse_ladder(const std::string& v, std::vector<double>& out) {
    out.clear();
    if (trim(v).empty()) return true;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t comma = v.find(',', pos);
        std::string item = trim(v.substr(pos, comma == std::string::npos ? comma : comma - pos));
        double x;
        if (!parse_double(item, x)) return false;
        out.push_back(x);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return true;
}

bool parse_mode(const std::string& v, Mode& out) {
    std::vector<double> xs;
    if (!parse_ladder(v, xs) || xs.size() != 3) return false;
    for (double x : xs)
        if (x != static_cast<int>(x)) return false;
    out = Mode{static_cast<int>(xs[0]), static_cast<int>(xs[1]), static_cast<int>(xs[2])};
    return true;
}

using Setter = std::function<bool(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"n", [](RunConfig& c, const std::string& v) { return parse_int(v, c.solver.n); }},
        {"alpha", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.alpha); }},
        {"mu", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.mu); }},
        {"r", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.r); }},
        {"s", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.s); }},
        {"K", [](RunConfig& c, const std::string& v) { return parse_int(v, c.solver.K); }},
        {"gamma", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.gamma); }},
        {"dt", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.dt); }},
        {"T", [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.T); }},
        {"seed", [](RunConfig& c, const std::string& v) { return parse_u64(v, c.solver.seed); }},
        {"scheme",
         [](RunConfig& c, const std::string& v) {
             std::string l = lower(v);
             if (l == "exponential-em") {
                 c.solver.scheme = Scheme::exponential_em;
                 return true;
             }
             if (l == "stratonovich-heun") {
                 c.solver.scheme = Scheme::stratonovich_heun;
                 return true;
             }
             return false;
         }},
        {"cutoff_enabled",
         [](RunConfig& c, const std::string& v) { return parse_bool(v, c.solver.cutoff_enabled); }},
        {"hall_enabled",
         [](RunConfig& c, const std::string& v) { return parse_bool(v, c.solver.hall_enabled); }},
        {"ladder",
         [](RunConfig& c, const std::string& v) { return parse_ladder(v, c.solver.ladder); }},
        {"diag_interval",
         [](RunConfig& c, const std::string& v) { return parse_int(v, c.solver.diag_interval); }},
        {"init",
         [](RunConfig& c, const std::string& v) {
             std::string l = lower(v);
             if (l == "zero") c.solver.init.family = InitFamily::zero;
             else if (l == "single-mode") c.solver.init.family = InitFamily::single_mode;
             else if (l == "beltrami") c.solver.init.family = InitFamily::beltrami;
             else if (l == "random-hs") c.solver.init.family = InitFamily::random_hs;
             else if (l == "checkpoint") c.solver.init.family = InitFamily::checkpoint;
             else return false;
             return true;
         }},
        {"init_mode",
         [](RunConfig& c, const std::string& v) { return parse_mode(v, c.solver.init.mode); }},
        {"init_amp",
         [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.init.amplitude); }},
        {"init_shell",
         [](RunConfig& c, const std::string& v) { return parse_int(v, c.solver.init.shell); }},
        {"init_decay",
         [](RunConfig& c, const std::string& v) { return parse_double(v, c.solver.init.decay); }},
        {"init_checkpoint",
         [](RunConfig& c, const std::string& v) {
             c.solver.init.checkpoint_path = trim(v);
             return true;
         }},
        {"output_dir",
         [](RunConfig& c, const std::string& v) {
             c.output_dir = trim(v);
             return !c.output_dir.empty();
         }},
        {"ensemble_size",
         [](RunConfig& c, const std::string& v) { return parse_int(v, c.ensemble_size); }},
        {"workers", [](RunConfig& c, const std::string& v) { return parse_int(v, c.workers); }},
        {"deterministic",
         [](RunConfig& c, const std::string& v) { return parse_bool(v, c.deterministic); }},
        {"p", [](RunConfig& c, const std::string& v) { return parse_double(v, c.p); }},
    };
    return table;
}

}  // namespace

void apply_override(ParsedConfig& parsed, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) {
        parsed.errors.push_back({key, "unknown key"});
        return;
    }
    if (!it->second(parsed.config, value))
        parsed.errors.push_back({key, "cannot parse value '" + value + "'"});
}

void finalize_config(ParsedConfig& parsed) {
    for (const auto& [key, message] : config_violations(parsed.config.solver))
        parsed.errors.push_back({key, message});
    if (parsed.config.ensemble_size < 1)
        parsed.errors.push_back({"ensemble_size", "ensemble_size must be >= 1"});
    if (parsed.config.workers < 1) parsed.errors.push_back({"workers", "workers must be >= 1"});
    if (!(parsed.config.p >= 2.0)) parsed.errors.push_back({"p", "p must be >= 2"});
}

ParsedConfig parse_config(const std::string& text) {
    ParsedConfig parsed;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            parsed.errors.push_back({line, "expected key = value"});
            continue;
        }
        apply_override(parsed, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    finalize_config(parsed);
    return parsed;
}

std::string scheme_name(Scheme s) {
    return s == Scheme::exponential_em ? "exponential-EM" : "stratonovich-heun";
}

std::string family_name(InitFamily f) {
    switch (f) {
        case InitFamily::zero: return "zero";
        case InitFamily::single_mode: return "single-mode";
        case InitFamily::beltrami: return "beltrami";
        case InitFamily::random_hs: return "random-hs";
        case InitFamily::checkpoint: return "checkpoint";
    }
    return "?";
}

std::string emit_config(const RunConfig& c) {
    std::string out;
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    kv("n", std::to_string(c.solver.n));
    kv("alpha", format_double(c.solver.alpha));
    kv("mu", format_double(c.solver.mu));
    kv("r", format_double(c.solver.r));
    kv("s", format_double(c.solver.s));
    kv("K", std::to_string(c.solver.K));
    kv("gamma", format_double(c.solver.gamma));
    kv("dt", format_double(c.solver.dt));
    kv("T", format_double(c.solver.T));
    kv("seed", std::to_string(c.solver.seed));
    kv("scheme", scheme_name(c.solver.scheme));
    kv("cutoff_enabled", c.solver.cutoff_enabled ? "true" : "false");
    kv("hall_enabled", c.solver.hall_enabled ? "true" : "false");
    std::string ladder;
    for (std::size_t i = 0; i < c.solver.ladder.size(); ++i) {
        if (i) ladder += ',';
        ladder += format_double(c.solver.ladder[i]);
    }
    kv("ladder", ladder);
    kv("diag_interval", std::to_string(c.solver.diag_interval));
    kv("init", family_name(c.solver.init.family));
    kv("init_mode", std::to_string(c.solver.init.mode.x) + "," +
                        std::to_string(c.solver.init.mode.y) + "," +
                        std::to_string(c.solver.init.mode.z));
    kv("init_amp", format_double(c.solver.init.amplitude));
    kv("init_shell", std::to_string(c.solver.init.shell));
    kv("init_decay", format_double(c.solver.init.decay));
    kv("init_checkpoint", c.solver.init.checkpoint_path);
    kv("output_dir", c.output_dir);
    kv("ensemble_size", std::to_string(c.ensemble_size));
    kv("workers", std::to_string(c.workers));
    kv("deterministic", c.deterministic ? "true" : "false");
    kv("p", format_double(c.p));
    return out;
}

}  // namespace emhd
