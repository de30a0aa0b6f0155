#include "cnt/model.hpp"

#include <cmath>
#include <string>

#include "cnt/errors.hpp"
#include "cnt/torus.hpp"

namespace cnt {

double hill_g(double P) {
    const double p2 = P * P;
    return 1.0 / (1.0 + p2 * p2);
}

double hill_h(double P) {
    return P / (0.1 + P + 2.0 * P * P);
}

double light(double t_mod, const ModelParams& p) {
    return t_mod < p.photoperiod_on ? 1.0 : 0.0;
}

std::array<double, 4> cnt_deriv(const std::array<double, 4>& y, double f, const ModelParams& p) {
    const double P1 = y[0], M1 = y[1], P2 = y[2], M2 = y[3];
    const double g2 = hill_g(P2);
    return {
        p.phi1 * (M1 - p.k_f * hill_h(P1) - p.k_D * P1 - p.k_L1 * f * P1),
        p.phi1 * p.eps1 * (hill_g(P1) - M1),
        p.phi2 * (M2 - p.k_f * hill_h(P2) - p.k_D * P2 - p.k_L2 * f * P2),
        p.phi2 * p.eps2 * (g2 - M2 + p.alpha1 * M1 * g2),
    };
}

std::array<double, 2> nt_deriv(const std::array<double, 2>& y, double f, const ModelParams& p) {
    const double P = y[0], M = y[1];
    return {
        p.phi1 * (M - p.k_f * hill_h(P) - p.k_D * P - p.k_L1 * f * P),
        p.phi1 * p.eps1 * (hill_g(P) - M),
    };
}

FullState cnt_rhs(const FullState& s, const ModelParams& p) {
    const double f = light(s.t_mod, p);
    const auto d = cnt_deriv({s.P1, s.M1, s.P2, s.M2}, f, p);
    return {d[0], d[1], d[2], d[3], 1.0};
}

NullclineCurve nullcline(NullclineKind kind, const ModelParams& p,
                         double P_lo, double P_hi, int n_samples,
                         std::optional<std::pair<double, double>> m1_range) {
    if (!(P_lo >= 0.0) || !(P_hi > P_lo))
        fail(ErrorCode::usage, "nullcline: need 0 <= P_lo < P_hi");
    if (n_samples < 2) fail(ErrorCode::usage, "nullcline: need n_samples >= 2");
    if ((kind == NullclineKind::M2_min || kind == NullclineKind::M2_max) && !m1_range)
        fail(ErrorCode::missing_dependency,
             "nullcline: M2_min/M2_max need the M1 range of the entrained O1 cycle");

    NullclineCurve curve;
    curve.kind = kind;
    curve.samples.reserve(static_cast<std::size_t>(n_samples));
    const double dP = (P_hi - P_lo) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double P = P_lo + i * dP;
        double M = 0;
        switch (kind) {
        case NullclineKind::P_dark:  M = p.k_f * hill_h(P) + p.k_D * P; break;
        case NullclineKind::P_light: M = p.k_f * hill_h(P) + (p.k_D + p.k_L1) * P; break;
        case NullclineKind::M1:      M = hill_g(P); break;
        case NullclineKind::M2_min:  M = hill_g(P) * (1.0 + p.alpha1 * m1_range->first); break;
        case NullclineKind::M2_max:  M = hill_g(P) * (1.0 + p.alpha1 * m1_range->second); break;
        }
        curve.samples.push_back({P, M});
    }
    return curve;
}

std::array<double, 2> dark_nullcline_intersection(const ModelParams& p) {
    auto resid = [&](double P) { return p.k_f * hill_h(P) + p.k_D * P - hill_g(P); };
    // g(0) = 1 > 0 = N_P(0); the residual is negative at P = 0 and grows
    // without bound, so a bracket always exists on the right.
    double lo = 0.0, hi = 1.0;
    int expand = 0;
    while (resid(hi) < 0.0) {
        hi *= 2.0;
        if (++expand > 60) fail(ErrorCode::invariant_violation,
                                "dark_nullcline_intersection: no sign change found");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (resid(mid) < 0.0 ? lo : hi) = mid;
    }
    const double P = 0.5 * (lo + hi);
    return {P, hill_g(P)};
}

} // namespace cnt
