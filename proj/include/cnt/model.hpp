#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cnt/params.hpp"

namespace cnt {

// Hill-type production term, 1/(1 + P^4), in (0, 1] for P >= 0.
double hill_g(double P);

// Michaelis-Menten-like degradation term, P/(0.1 + P + 2 P^2).
double hill_h(double P);

// Square-wave forcing: 1 on [0, photoperiod_on), 0 on [photoperiod_on, 24).
double light(double t_mod, const ModelParams& p);

struct FullState {
    double P1 = 0, M1 = 0, P2 = 0, M2 = 0;
    double t_mod = 0; // hours since most recent lights-on, in [0, 24)
};

// Coupled system right-hand side with the light value supplied explicitly.
// y = (P1, M1, P2, M2).
std::array<double, 4> cnt_deriv(const std::array<double, 4>& y, double f, const ModelParams& p);

// Single-oscillator right-hand side (O1 constants). y = (P, M).
std::array<double, 2> nt_deriv(const std::array<double, 2>& y, double f, const ModelParams& p);

// Time derivative of the full state; t_mod advances at unit rate.
FullState cnt_rhs(const FullState& s, const ModelParams& p);

enum class NullclineKind { P_dark, P_light, M1, M2_min, M2_max };

struct NullclineCurve {
    NullclineKind kind;
    std::vector<std::array<double, 2>> samples; // (P, M), strictly ascending P
};

// Samples the requested phase-plane nullcline on [P_lo, P_hi].
// M2_min / M2_max need the range of M1 over the entrained O1 cycle.
NullclineCurve nullcline(NullclineKind kind, const ModelParams& p,
                         double P_lo, double P_hi, int n_samples,
                         std::optional<std::pair<double, double>> m1_range = std::nullopt);

// P where the dark P-nullcline meets the M-nullcline of an uncoupled
// oscillator: k_f h(P) + k_D P = g(P). Used as the phase-angle origin.
std::array<double, 2> dark_nullcline_intersection(const ModelParams& p);

} // namespace cnt
