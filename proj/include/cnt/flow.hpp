#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cnt/model.hpp"
#include "cnt/odeint.hpp"
#include "cnt/params.hpp"
#include "cnt/torus.hpp"

namespace cnt {

enum class LightMode { DD, LL, LD };

// Maps integrator time to the forcing value. t_mod0 is the phase of light
// (hours since lights-on) at integrator time zero.
struct LightSchedule {
    LightMode mode = LightMode::LD;
    double on_hours = 12.0;
    double t_mod0 = 0.0;

    double t_mod(double t) const {
        double m = std::fmod(t_mod0 + t, kDayHours);
        if (m < 0) m += kDayHours;
        return m;
    }

    double value(double t) const {
        switch (mode) {
        case LightMode::DD: return 0.0;
        case LightMode::LL: return 1.0;
        case LightMode::LD: return t_mod(t) < on_hours ? 1.0 : 0.0;
        }
        return 0.0;
    }

    // Switch instants in (t0, t1), ascending. Empty for DD/LL.
    std::vector<double> switch_times(double t0, double t1) const {
        std::vector<double> out;
        if (mode != LightMode::LD || on_hours <= 0.0 || on_hours >= kDayHours)
            return out;
        // lights-on at t with t_mod(t) = 0, lights-off at t_mod(t) = on_hours
        const double first_cycle = std::floor((t_mod0 + t0) / kDayHours);
        for (double base = first_cycle * kDayHours - t_mod0;; base += kDayHours) {
            const double on = base, off = base + on_hours;
            if (on > t1 && off > t1) break;
            if (on > t0 && on < t1) out.push_back(on);
            if (off > t0 && off < t1) out.push_back(off);
        }
        return out;
    }
};

inline LightSchedule make_schedule(LightMode mode, const ModelParams& p, double t_mod_at_0) {
    return {mode, p.photoperiod_on, t_mod_at_0};
}

struct CntRhs {
    ModelParams p;
    LightSchedule ls;
    void operator()(double t, const State<4>& y, State<4>& dy) const {
        dy = cnt_deriv(y, ls.value(t), p);
    }
};

struct NtRhs {
    ModelParams p;
    LightSchedule ls;
    void operator()(double t, const State<2>& y, State<2>& dy) const {
        dy = nt_deriv(y, ls.value(t), p);
    }
};

} // namespace cnt
