#pragma once
// Per-sample diagnostics rows and their canonical NDJSON encoding. One line
// per record, every field always present (events is an explicit null when
// empty), floats printed with 17 significant digits so rows parse back
// losslessly.

#include <string>
#include <vector>

#include "emhd/spectral_ops.hpp"

namespace emhd {

struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    double hs = 0.0;         // |B|_{H^s}
    double hs_alpha2 = 0.0;  // |B|_{H^{s+alpha/2}}
    double w1inf = 0.0;
    double chi_r = 1.0;      // cutoff factor in effect at this sample
    std::vector<double> lp;  // lambda_q^{2s} |Delta_q B|_{L2}^2, q = -1..qmax
    double div_residual = 0.0;
    std::vector<std::string> events;  // "sigma_r", "ladder:<level>", "blow_up"

    friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

// Dyadic energies lambda_q^{2s} |Delta_q B|^2_{L2} for q = -1..qmax(n),
// evaluated per mode (no transforms).
std::vector<double> lp_spectrum(const SpectralField& B, double s);

// Assembles a record from the state; w1inf_value is passed in (the stepper
// already has it), events are appended by the caller.
DiagnosticsRecord sample_diagnostics(const SpectralField& B, double t, double s, double alpha,
                                     double chi_r, double w1inf_value,
                                     std::vector<std::string> events);

std::string to_ndjson(const DiagnosticsRecord& rec);
// Strict parser for the canonical encoding above; throws on malformed rows.
DiagnosticsRecord diagnostics_from_ndjson(const std::string& line);

// Canonical float formatting shared by all emitters (17 significant digits).
std::string format_double(double x);

}  // namespace emhd
