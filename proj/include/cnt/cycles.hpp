#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "cnt/flow.hpp"
#include "cnt/odeint.hpp"
#include "cnt/params.hpp"

namespace cnt {

enum class Oscillator { O1, O2Driven };

// Rotated polar frame for reading the phase of O1 off its limit cycle.
// origin lies inside the cycle; rotation puts the reference point at angle 0.
struct AngleFrame {
    std::array<double, 2> origin{};
    double rotation = 0.0;
    bool fallback_centroid = false; // origin fell back to the cycle centroid
};

struct LimitCycle {
    LightMode mode = LightMode::LD;
    Oscillator oscillator = Oscillator::O1;
    double period = 0.0;   // hours; exactly 24 for LD
    double dt_sample = 0.005;
    std::size_t x0_index = 0; // sample where lights just turn on (LD)
    double t_mod0 = 0.0;      // light phase at sample 0 (LD)
    double closure_error = 0.0;
    std::vector<std::array<double, 2>> samples; // (P, M), uniform dt_sample

    // attached angle geometry (meaningful for the O1 LD cycle)
    std::optional<AngleFrame> frame;
    std::vector<double> unwrapped; // angle per sample, unwrapped from X0
    int orientation = 0;           // sign of d(angle)/dt along the cycle

    std::size_t size() const { return samples.size(); }
    // Position at cycle time t measured from sample 0 (wraps at the period).
    std::array<double, 2> at_time(double t) const;
    // gamma(x): position at phase x in (0, 24], measured from X0.
    std::array<double, 2> at_phase(double x) const;
    double min_M() const;
    double max_M() const;
    // One marker per integer phase hour, 24 in total.
    std::vector<std::array<double, 2>> hourly_markers() const;
};

inline IntegratorConfig cycle_integrator_defaults() {
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    return cfg;
}

// Computes the attracting cycle of the requested oscillator under the given
// light condition. DD/LL converge on successive returns to an internal
// section (the P-maximum of the tracked oscillator); LD converges
// stroboscopically every 24 h. t_mod_start picks the light phase of sample 0
// for LD cycles. Throws non_oscillatory / not_entrained after 300 cycles.
LimitCycle find_limit_cycle(const ModelParams& p, LightMode mode, Oscillator osc,
                            const IntegratorConfig& cfg = cycle_integrator_defaults(),
                            double t_mod_start = 0.0, double dt_sample = 0.005);

// Index of the sample where t_mod crosses 0 (== cycle.x0_index).
std::size_t reference_point(const LimitCycle& cycle);

// Signed winding of the sampled curve about a point, in turns.
double winding_number(const LimitCycle& cycle, const std::array<double, 2>& origin);

// Origin at the dark-nullcline intersection of the uncoupled oscillator,
// falling back to the sample centroid if the curve does not wind around it.
AngleFrame make_angle_frame(const LimitCycle& ld_cycle, const ModelParams& p);

// Builds the per-sample unwrapped angle table; validates that the angle is
// strictly monotone along the cycle with total change +-2pi.
void attach_frame(LimitCycle& cycle, const AngleFrame& frame);

// Rotated-frame argument of a point, in (0, 2pi]; the reference point reads 2pi.
double angle_of(const std::array<double, 2>& pt, const AngleFrame& frame);

// Inverts the angle parameterization: phase x in (0, 24] whose cycle point
// has the given angle. Requires an attached frame.
double phase_from_angle(double theta, const LimitCycle& cycle);

void write_cycle_csv(const LimitCycle& cycle, const std::string& path);

} // namespace cnt
