#pragma once

#include <string>

namespace cnt {

// Rate constants and forcing setup for the coupled Novak-Tyson pair.
// O1 is the light-driven central oscillator, O2 the peripheral one.
struct ModelParams {
    double phi1 = 2.1;  // rate scaling of O1, 1/h
    double phi2 = 2.1;  // rate scaling of O2, 1/h
    double eps1 = 0.05; // time-scale separation of O1
    double eps2 = 0.05; // time-scale separation of O2
    double k_f = 1.0;   // fast degradation weight
    double k_D = 0.05;  // dark degradation rate, 1/h
    double k_L1 = 0.05; // light-driven degradation into O1, 1/h
    double k_L2 = 0.0;  // light-driven degradation into O2, 1/h (semi-hierarchy)
    double alpha1 = 2.0;           // O1 -> O2 coupling strength, >= 0
    double photoperiod_on = 12.0;  // hours of light per 24-h cycle

    // Throws Error(invariant_violation) if any rate is out of range.
    void validate() const;
};

ModelParams canonical_params();
ModelParams semi_hierarchical_params(); // canonical with k_L2 = 0.025

// Flat key=value files; '#' starts a comment. Unknown keys are an error.
ModelParams load_params_file(const std::string& path);
void apply_override(ModelParams& p, const std::string& key, double value);

// Stable short hex digest of the parameter values, for output sidecars.
std::string params_fingerprint(const ModelParams& p);

} // namespace cnt
