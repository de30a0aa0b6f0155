#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnt/errors.hpp"

namespace cnt {

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.1;    // hours; keeps event brackets tight
    double event_tol = 1e-10; // hours; bisection width for event times
    double init_step = 1e-3;
    std::size_t max_steps = 20'000'000;
};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct EventSpec {
    std::function<double(double, const State<N>&)> fn;
    int direction = 0;   // +1: - to +, -1: + to -, 0: either
    bool terminal = false;
    double guard = 0.0;  // ignore hits with t < t_begin + guard
};

template <std::size_t N>
struct EventHit {
    std::size_t event_index = 0;
    double t = 0;
    State<N> y{};
};

// One accepted step with the order-4 continuous extension of the 5(4) pair.
template <std::size_t N>
struct DenseStep {
    double t0 = 0, h = 0;
    State<N> r1{}, r2{}, r3{}, r4{}, r5{};

    State<N> eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
    double t1() const { return t0 + h; }
};

template <std::size_t N>
struct Solution {
    double t_end = 0;
    State<N> y_end{};
    std::vector<EventHit<N>> events;
    std::vector<DenseStep<N>> dense; // populated only when requested
    bool terminated_by_event = false;
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

struct NullObserver {
    template <std::size_t N>
    void operator()(const DenseStep<N>&, double) const {}
};

// Locate a sign change of ev.fn inside an accepted step by bisection on the
// dense output. The caller has verified the bracket [ta, tb].
template <std::size_t N>
double bisect_event(const EventSpec<N>& ev, const DenseStep<N>& step,
                    double ta, double tb, double ga, double event_tol) {
    while (tb - ta > event_tol) {
        const double tm = 0.5 * (ta + tb);
        const double gm = ev.fn(tm, step.eval(tm));
        if (gm != 0.0 && (gm < 0) == (ga < 0)) {
            ta = tm;
            ga = gm;
        } else {
            tb = tm;
        }
    }
    return 0.5 * (ta + tb);
}

} // namespace detail

// Integrates y' = rhs(t, y) from t_begin to t_end (forward only).
//
// breakpoints: sorted times inside (t_begin, t_end) where the right-hand side
// jumps (light switches). The integration restarts exactly there, so no step
// straddles the discontinuity; step-size control is reset at each restart,
// which makes a split integration identical to an unsplit one.
//
// Events are detected by endpoint sign change per accepted step and located
// by bisection on the dense output. A terminal event truncates the solution
// at the hit. The observer runs once per accepted step with the dense step
// and the time up to which it applies.
template <std::size_t N, class RHS, class Observer = detail::NullObserver>
Solution<N> integrate(RHS&& rhs, const State<N>& y_init, double t_begin, double t_end,
                      std::span<const EventSpec<N>> events = {},
                      const IntegratorConfig& cfg = {},
                      std::span<const double> breakpoints = {},
                      bool store_dense = false,
                      Observer&& obs = Observer{}) {
    using namespace detail;
    if (!(t_end > t_begin)) fail(ErrorCode::usage, "integrate: need t_end > t_begin");

    Solution<N> sol;
    std::vector<double> g_prev(events.size(), 0.0);
    for (std::size_t i = 0; i < events.size(); ++i)
        if (events[i].fn) g_prev[i] = events[i].fn(t_begin, y_init);

    double t = t_begin;
    State<N> y = y_init;

    std::array<State<N>, 7> k;
    State<N> ytmp, y1;

    std::size_t bp = 0;
    while (bp < breakpoints.size() && breakpoints[bp] <= t_begin) ++bp;

    while (t < t_end) {
        double seg_end = t_end;
        if (bp < breakpoints.size() && breakpoints[bp] < t_end) seg_end = breakpoints[bp];

        rhs(t, y, k[0]); // fresh derivative after any discontinuity
        double h = std::min({cfg.init_step, cfg.max_step, seg_end - t});
        double facold = 1e-4;

        while (t < seg_end) {
            if (sol.n_steps + sol.n_rejected > cfg.max_steps)
                fail(ErrorCode::stiffness, "integrate: step budget exceeded");
            if (h < 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
                fail(ErrorCode::stiffness,
                     "integrate: step size underflow at t=" + std::to_string(t));

            if (t + h >= seg_end) h = seg_end - t;

            for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k[0][i];
            rhs(t + c2 * h, ytmp, k[1]);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
            rhs(t + c3 * h, ytmp, k[2]);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
            rhs(t + c4 * h, ytmp, k[3]);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] +
                                      a54 * k[3][i]);
            rhs(t + c5 * h, ytmp, k[4]);
            for (std::size_t i = 0; i < N; ++i)
                ytmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] +
                                      a64 * k[3][i] + a65 * k[4][i]);
            rhs(t + h, ytmp, k[5]);
            for (std::size_t i = 0; i < N; ++i)
                y1[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] +
                                    a75 * k[4][i] + a76 * k[5][i]);
            rhs(t + h, y1, k[6]);

            double err = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = cfg.abs_tol +
                                  cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
                const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] +
                                      e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);

            constexpr double expo1 = 0.2 - 0.04 * 0.75;
            const double fac11 = std::pow(std::max(err, 1e-32), expo1);
            if (err > 1.0) {
                ++sol.n_rejected;
                h /= std::min(5.0, fac11 / 0.9);
                continue;
            }

            DenseStep<N> step;
            step.t0 = t;
            step.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = h * k[0][i] - ydiff;
                step.r1[i] = y[i];
                step.r2[i] = ydiff;
                step.r3[i] = bspl;
                step.r4[i] = ydiff - h * k[6][i] - bspl;
                step.r5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] +
                                  d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
            }
            ++sol.n_steps;
            const double t1 = t + h;

            double terminal_t = std::numeric_limits<double>::infinity();
            std::vector<EventHit<N>> step_hits;
            for (std::size_t i = 0; i < events.size(); ++i) {
                const auto& ev = events[i];
                if (!ev.fn) continue;
                const double ga = g_prev[i];
                const double gb = ev.fn(t1, y1);
                g_prev[i] = gb;
                bool crossing = false;
                if (ga != 0.0) {
                    if (ev.direction >= 0 && ga < 0 && gb >= 0) crossing = true;
                    else if (ev.direction <= 0 && ga > 0 && gb <= 0) crossing = true;
                }
                if (!crossing) continue;
                const double th = bisect_event(ev, step, t, t1, ga, cfg.event_tol);
                if (th < t_begin + ev.guard) continue;
                step_hits.push_back({i, th, step.eval(th)});
                if (ev.terminal) terminal_t = std::min(terminal_t, th);
            }
            std::sort(step_hits.begin(), step_hits.end(),
                      [](const auto& a, const auto& b) { return a.t < b.t; });
            for (auto& hit : step_hits) {
                if (hit.t > terminal_t) break;
                const bool is_terminal = events[hit.event_index].terminal;
                sol.events.push_back(hit);
                if (is_terminal) {
                    sol.t_end = hit.t;
                    sol.y_end = hit.y;
                    sol.terminated_by_event = true;
                    obs(step, hit.t);
                    if (store_dense) sol.dense.push_back(step);
                    return sol;
                }
            }

            obs(step, t1);
            if (store_dense) sol.dense.push_back(step);

            t = t1;
            y = y1;
            k[0] = k[6]; // FSAL

            double fac = fac11 / std::pow(facold, 0.04);
            fac = std::max(0.2, std::min(5.0, fac / 0.9));
            facold = std::max(err, 1e-4);
            h = std::min(h / fac, cfg.max_step);
        }

        if (bp < breakpoints.size() && seg_end == breakpoints[bp]) ++bp;
    }

    sol.t_end = t;
    sol.y_end = y;
    return sol;
}

} // namespace cnt
