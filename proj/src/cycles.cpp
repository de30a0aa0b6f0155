#include "cnt/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "cnt/errors.hpp"
#include "cnt/model.hpp"
#include "cnt/torus.hpp"

namespace cnt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxCycles = 300;
constexpr double kStateTol = 1e-7;

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Tracks the (P, M) pair of the oscillator whose cycle we sample.
template <std::size_t N>
struct Tracked {
    std::size_t ip, im;
};

// DD/LL: converge on successive P-maxima of the tracked oscillator, then
// resample one period through the dense output.
template <std::size_t N, class RHS>
void autonomous_cycle(RHS rhs, State<N> y, Tracked<N> tr, const IntegratorConfig& cfg,
                      double dt_sample, LimitCycle& out) {
    // derivative of the tracked P coordinate
    EventSpec<N> pmax;
    pmax.fn = [rhs, tr](double t, const State<N>& s) {
        State<N> dy;
        rhs(t, s, dy);
        return dy[tr.ip];
    };
    pmax.direction = -1;
    pmax.terminal = true;
    pmax.guard = 0.5;

    // settle the transient before measuring returns
    {
        auto sol = integrate<N>(rhs, y, 0.0, 200.0, {}, cfg);
        y = sol.y_end;
    }

    const std::array<EventSpec<N>, 1> evs{pmax};
    State<N> prev = y;
    double period = 0;
    bool converged = false;
    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
        auto sol = integrate<N>(rhs, y, 0.0, 120.0, std::span<const EventSpec<N>>(evs), cfg);
        if (!sol.terminated_by_event)
            fail(ErrorCode::non_oscillatory,
                 "limit cycle: no P-maximum return within 120 h (non-oscillatory parameters?)");
        y = sol.y_end;
        period = sol.t_end;
        if (cycle > 0 && max_abs_diff(prev.data(), y.data(), N) < kStateTol) {
            converged = true;
            break;
        }
        prev = y;
    }
    if (!converged)
        fail(ErrorCode::non_oscillatory, "limit cycle: returns did not settle within 300 cycles");

    out.period = period;
    const auto n = static_cast<std::size_t>(std::lround(period / dt_sample));
    out.dt_sample = period / static_cast<double>(n);
    out.samples.resize(n);
    auto sol = integrate<N>(rhs, y, 0.0, period, {}, cfg, {}, /*store_dense=*/true);
    std::size_t si = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * out.dt_sample;
        while (si + 1 < sol.dense.size() && sol.dense[si].t1() < t) ++si;
        const auto s = sol.dense[si].eval(t);
        out.samples[i] = {s[tr.ip], s[tr.im]};
    }
    out.closure_error = std::hypot(sol.y_end[tr.ip] - out.samples[0][0],
                                   sol.y_end[tr.im] - out.samples[0][1]);
    out.x0_index = 0;
    out.t_mod0 = 0.0;
}

// LD: converge the 24-h stroboscopic map from a state at light phase
// t_mod_start, then resample the entrained cycle over one forcing period.
template <std::size_t N, class RHS>
void forced_cycle(RHS rhs, State<N> y, Tracked<N> tr, const LightSchedule& ls,
                  const IntegratorConfig& cfg, double dt_sample, LimitCycle& out) {
    auto bps = ls.switch_times(0.0, kDayHours);
    {
        // settle ten days first
        for (int day = 0; day < 10; ++day) {
            auto sol = integrate<N>(rhs, y, 0.0, kDayHours, {}, cfg, bps);
            y = sol.y_end;
        }
    }
    State<N> prev = y;
    bool converged = false;
    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
        auto sol = integrate<N>(rhs, y, 0.0, kDayHours, {}, cfg, bps);
        y = sol.y_end;
        if (max_abs_diff(prev.data(), y.data(), N) < kStateTol) {
            converged = true;
            break;
        }
        prev = y;
    }
    if (!converged)
        fail(ErrorCode::not_entrained,
             "limit cycle: stroboscopic map did not settle within 300 cycles");

    out.period = kDayHours;
    const auto n = static_cast<std::size_t>(std::lround(kDayHours / dt_sample));
    out.dt_sample = kDayHours / static_cast<double>(n);
    out.samples.resize(n);
    auto sol = integrate<N>(rhs, y, 0.0, kDayHours, {}, cfg, bps, /*store_dense=*/true);
    std::size_t si = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * out.dt_sample;
        while (si + 1 < sol.dense.size() && sol.dense[si].t1() < t) ++si;
        const auto s = sol.dense[si].eval(t);
        out.samples[i] = {s[tr.ip], s[tr.im]};
    }
    out.closure_error = std::hypot(sol.y_end[tr.ip] - out.samples[0][0],
                                   sol.y_end[tr.im] - out.samples[0][1]);
    out.t_mod0 = ls.t_mod0;
    const double to_lights_on = wrap_phase(kDayHours - ls.t_mod0); // in (0,24]
    std::size_t idx = static_cast<std::size_t>(std::lround(to_lights_on / out.dt_sample));
    out.x0_index = idx % n;
}

} // namespace

LimitCycle find_limit_cycle(const ModelParams& p, LightMode mode, Oscillator osc,
                            const IntegratorConfig& cfg, double t_mod_start,
                            double dt_sample) {
    p.validate();
    if (!(dt_sample > 0)) fail(ErrorCode::usage, "find_limit_cycle: dt_sample must be > 0");

    LimitCycle out;
    out.mode = mode;
    out.oscillator = osc;
    out.dt_sample = dt_sample;

    const LightSchedule ls = make_schedule(mode, p, t_mod_start);
    if (osc == Oscillator::O1) {
        const NtRhs rhs{p, ls};
        const State<2> seed{0.1, 0.6};
        if (mode == LightMode::LD)
            forced_cycle<2>(rhs, seed, Tracked<2>{0, 1}, ls, cfg, dt_sample, out);
        else
            autonomous_cycle<2>(rhs, seed, Tracked<2>{0, 1}, cfg, dt_sample, out);
    } else {
        const CntRhs rhs{p, ls};
        const State<4> seed{0.1, 0.6, 0.1, 0.6};
        if (mode == LightMode::LD)
            forced_cycle<4>(rhs, seed, Tracked<4>{2, 3}, ls, cfg, dt_sample, out);
        else
            autonomous_cycle<4>(rhs, seed, Tracked<4>{2, 3}, cfg, dt_sample, out);
    }

    if (out.closure_error > 1e-6)
        fail(ErrorCode::invariant_violation,
             "limit cycle failed to close: error " + std::to_string(out.closure_error));
    return out;
}

std::array<double, 2> LimitCycle::at_time(double t) const {
    const auto n = samples.size();
    double tt = std::fmod(t, period);
    if (tt < 0) tt += period;
    const double u = tt / dt_sample;
    auto i = static_cast<std::size_t>(u);
    if (i >= n) i = n - 1;
    const double frac = u - static_cast<double>(i);
    const auto& a = samples[i];
    const auto& b = samples[(i + 1) % n];
    return {a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])};
}

std::array<double, 2> LimitCycle::at_phase(double x) const {
    const double t = static_cast<double>(x0_index) * dt_sample + wrap_phase(x) * period / kDayHours;
    return at_time(t);
}

double LimitCycle::min_M() const {
    double m = samples[0][1];
    for (const auto& s : samples) m = std::min(m, s[1]);
    return m;
}

double LimitCycle::max_M() const {
    double m = samples[0][1];
    for (const auto& s : samples) m = std::max(m, s[1]);
    return m;
}

std::vector<std::array<double, 2>> LimitCycle::hourly_markers() const {
    std::vector<std::array<double, 2>> out;
    out.reserve(24);
    for (int h = 1; h <= 24; ++h) out.push_back(at_phase(static_cast<double>(h)));
    return out;
}

std::size_t reference_point(const LimitCycle& cycle) { return cycle.x0_index; }

double winding_number(const LimitCycle& cycle, const std::array<double, 2>& origin) {
    double total = 0;
    const auto n = cycle.samples.size();
    double prev = std::atan2(cycle.samples[0][1] - origin[1], cycle.samples[0][0] - origin[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& s = cycle.samples[i % n];
        const double a = std::atan2(s[1] - origin[1], s[0] - origin[0]);
        double d = a - prev;
        while (d > std::numbers::pi) d -= kTwoPi;
        while (d <= -std::numbers::pi) d += kTwoPi;
        total += d;
        prev = a;
    }
    return total / kTwoPi;
}

AngleFrame make_angle_frame(const LimitCycle& ld_cycle, const ModelParams& p) {
    AngleFrame frame;
    frame.origin = dark_nullcline_intersection(p);
    const double w = winding_number(ld_cycle, frame.origin);
    if (std::abs(std::abs(w) - 1.0) > 1e-3) {
        // nullcline intersection is outside the curve; use the centroid
        double cx = 0, cy = 0;
        for (const auto& s : ld_cycle.samples) {
            cx += s[0];
            cy += s[1];
        }
        frame.origin = {cx / ld_cycle.samples.size(), cy / ld_cycle.samples.size()};
        frame.fallback_centroid = true;
        const double w2 = winding_number(ld_cycle, frame.origin);
        if (std::abs(std::abs(w2) - 1.0) > 1e-3)
            fail(ErrorCode::invariant_violation,
                 "angle frame: cycle does not wind around any candidate origin");
    }
    const auto x0 = ld_cycle.samples[ld_cycle.x0_index];
    frame.rotation = -std::atan2(x0[1] - frame.origin[1], x0[0] - frame.origin[0]);
    return frame;
}

double angle_of(const std::array<double, 2>& pt, const AngleFrame& frame) {
    const double dx = pt[0] - frame.origin[0];
    const double dy = pt[1] - frame.origin[1];
    if (dx * dx + dy * dy < 1e-24)
        fail(ErrorCode::degenerate_angle, "angle_of: point coincides with the frame origin");
    double a = std::atan2(dy, dx) + frame.rotation;
    a -= kTwoPi * std::floor(a / kTwoPi); // [0, 2pi)
    return a == 0.0 ? kTwoPi : a;
}

void attach_frame(LimitCycle& cycle, const AngleFrame& frame) {
    const auto n = cycle.samples.size();
    cycle.frame = frame;
    cycle.unwrapped.assign(n, 0.0);

    // unwrap from X0 around the loop
    double u = 0.0;
    double prev_raw = angle_of(cycle.samples[cycle.x0_index], frame);
    cycle.unwrapped[cycle.x0_index] = 0.0;
    int sign = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t idx = (cycle.x0_index + j) % n;
        const double raw = angle_of(cycle.samples[idx], frame);
        double d = raw - prev_raw;
        while (d > std::numbers::pi) d -= kTwoPi;
        while (d <= -std::numbers::pi) d += kTwoPi;
        if (d == 0.0)
            fail(ErrorCode::invariant_violation, "attach_frame: stalled angle along cycle");
        const int s = d > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign)
            fail(ErrorCode::invariant_violation,
                 "attach_frame: cycle angle is not monotone about the origin");
        u += d;
        prev_raw = raw;
        if (j < n) cycle.unwrapped[idx] = u;
    }
    if (std::abs(std::abs(u) - kTwoPi) > 1e-3)
        fail(ErrorCode::invariant_violation, "attach_frame: total angle change is not 2pi");
    cycle.orientation = sign;
}

double phase_from_angle(double theta, const LimitCycle& cycle) {
    if (!cycle.frame)
        fail(ErrorCode::missing_dependency, "phase_from_angle: no angle frame attached");
    const auto n = cycle.samples.size();
    // v[j]: unwrapped angle at sample x0_index + j, v[0] = 0, |v[n]| = 2pi
    auto v = [&](std::size_t j) -> double {
        if (j == 0) return 0.0;
        if (j >= n) return cycle.orientation > 0 ? kTwoPi : -kTwoPi;
        return cycle.unwrapped[(cycle.x0_index + j) % n];
    };
    // target in the covering branch touched by one loop from X0
    double target;
    if (cycle.orientation > 0) {
        target = theta; // (0, 2pi]
    } else {
        target = theta - kTwoPi; // (-2pi, 0]
    }
    // binary search for j with v[j] <= target <= v[j+1] (orientation +),
    // or v[j] >= target >= v[j+1] (orientation -)
    std::size_t lo = 0, hi = n;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        const bool left = cycle.orientation > 0 ? (v(mid) <= target) : (v(mid) >= target);
        if (left) lo = mid;
        else hi = mid;
    }
    const double va = v(lo), vb = v(hi);
    const double frac = (vb == va) ? 0.0 : (target - va) / (vb - va);
    const double t = (static_cast<double>(lo) + frac) * cycle.dt_sample;
    return wrap_phase(t * kDayHours / cycle.period);
}

void write_cycle_csv(const LimitCycle& cycle, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    out << "t,P,M\n";
    char buf[128];
    for (std::size_t i = 0; i < cycle.samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n",
                      static_cast<double>(i) * cycle.dt_sample,
                      cycle.samples[i][0], cycle.samples[i][1]);
        out << buf;
    }
}

} // namespace cnt
