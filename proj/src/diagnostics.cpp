#include "emhd/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "emhd/littlewood_paley.hpp"

namespace emhd {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> lp_spectrum(const SpectralField& B, double s) {
    DyadicProfile profile;
    const int qmax = DyadicProfile::qmax(B.n());
    std::vector<double> out(static_cast<std::size_t>(qmax) + 2, 0.0);
    B.for_each_mode([&](const Mode& k) {
        double kk = norm(k);
        double e = abs2(B.vec(k));
        if (e == 0.0) return;
        for (int q = -1; q <= qmax; ++q) {
            double w = profile.phi_q(q, kk);
            if (w != 0.0) out[q + 1] += w * w * e;
        }
    });
    for (int q = -1; q <= qmax; ++q)
        out[q + 1] *= std::pow(DyadicProfile::lambda(q), 2.0 * s);
    return out;
}

DiagnosticsRecord sample_diagnostics(const SpectralField& B, double t, double s, double alpha,
                                     double chi_r, double w1inf_value,
                                     std::vector<std::string> events) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.l2 = l2_norm(B);
    rec.hs = sobolev_norm(B, s);
    rec.hs_alpha2 = sobolev_norm(B, s + 0.5 * alpha);
    rec.w1inf = w1inf_value;
    rec.chi_r = chi_r;
    rec.lp = lp_spectrum(B, s);
    rec.div_residual = divergence_residual(B);
    rec.events = std::move(events);
    return rec;
}

std::string to_ndjson(const DiagnosticsRecord& rec) {
    std::string s = "{\"t\":" + format_double(rec.t);
    s += ",\"l2\":" + format_double(rec.l2);
    s += ",\"hs\":" + format_double(rec.hs);
    s += ",\"hs_alpha2\":" + format_double(rec.hs_alpha2);
    s += ",\"w1inf\":" + format_double(rec.w1inf);
    s += ",\"chi_r\":" + format_double(rec.chi_r);
    s += ",\"lp\":[";
    for (std::size_t i = 0; i < rec.lp.size(); ++i) {
        if (i) s += ',';
        s += format_double(rec.lp[i]);
    }
    s += "],\"div_residual\":" + format_double(rec.div_residual);
    s += ",\"events\":";
    if (rec.events.empty()) {
        s += "null";
    } else {
        s += '[';
        for (std::size_t i = 0; i < rec.events.size(); ++i) {
            if (i) s += ',';
            s += '"' + rec.events[i] + '"';
        }
        s += ']';
    }
    s += '}';
    return s;
}

namespace {

struct Cursor {
    const char* p;
    const std::string* src;

    void expect(const char* lit) {
        std::size_t len = std::strlen(lit);
        if (std::strncmp(p, lit, len) != 0)
            throw std::runtime_error("diagnostics_from_ndjson: malformed row near '" +
                                     std::string(p).substr(0, 24) + "'");
        p += len;
    }
    bool peek(char c) const { return *p == c; }
    double number() {
        char* end = nullptr;
        double v = std::strtod(p, &end);
        if (end == p) throw std::runtime_error("diagnostics_from_ndjson: expected number");
        p = end;
        return v;
    }
    std::string string_lit() {
        expect("\"");
        std::string out;
        while (*p && *p != '"') out += *p++;
        expect("\"");
        return out;
    }
};

}  // namespace

DiagnosticsRecord diagnostics_from_ndjson(const std::string& line) {
    DiagnosticsRecord rec;
    Cursor c{line.c_str(), &line};
    c.expect("{\"t\":");
    rec.t = c.number();
    c.expect(",\"l2\":");
    rec.l2 = c.number();
    c.expect(",\"hs\":");
    rec.hs = c.number();
    c.expect(",\"hs_alpha2\":");
    rec.hs_alpha2 = c.number();
    c.expect(",\"w1inf\":");
    rec.w1inf = c.number();
    c.expect(",\"chi_r\":");
    rec.chi_r = c.number();
    c.expect(",\"lp\":[");
    if (!c.peek(']'))
        while (true) {
            rec.lp.push_back(c.number());
            if (c.peek(',')) {
                c.expect(",");
                continue;
            }
            break;
        }
    c.expect("],\"div_residual\":");
    rec.div_residual = c.number();
    c.expect(",\"events\":");
    if (c.peek('n')) {
        c.expect("null");
    } else {
        c.expect("[");
        if (!c.peek(']'))
            while (true) {
                rec.events.push_back(c.string_lit());
                if (c.peek(',')) {
                    c.expect(",");
                    continue;
                }
                break;
            }
        c.expect("]");
    }
    c.expect("}");
    return rec;
}

}  // namespace emhd
