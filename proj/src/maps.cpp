#include "cnt/maps.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cnt/errors.hpp"
#include "cnt/model.hpp"

namespace cnt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Accumulates the unwrapped angle of (P1, M1) about the frame origin by
// subsampling each accepted step; per-sample angle changes stay well under
// pi at the default spacing.
struct WindingObserver {
    const AngleFrame* frame = nullptr;
    double dt = 0.02;
    double total = 0;
    double prev = 0;
    bool started = false;

    void operator()(const DenseStep<4>& step, double t_hi) {
        if (!frame) return;
        auto angle_at = [&](double t) {
            const auto s = step.eval(t);
            return std::atan2(s[1] - frame->origin[1], s[0] - frame->origin[0]);
        };
        if (!started) {
            prev = angle_at(step.t0);
            started = true;
        }
        for (double t = step.t0 + dt;; t += dt) {
            const bool last = t >= t_hi;
            const double a = angle_at(last ? t_hi : t);
            double d = a - prev;
            while (d > std::numbers::pi) d -= kTwoPi;
            while (d <= -std::numbers::pi) d += kTwoPi;
            total += d;
            prev = a;
            if (last) break;
        }
    }
};

} // namespace

SectionSpec o2_section_canonical() {
    return {SectionSpec::Coord::P, 1.72, 0.1289, 0.01, -1};
}

SectionSpec o2_section_semi() {
    return {SectionSpec::Coord::P, 1.72, 0.1548, 0.01, -1};
}

SectionSpec nt_section() {
    return {SectionSpec::Coord::M, 0.45, 0.852, 0.01, +1};
}

EntrainmentMap::EntrainmentMap(ModelParams params, SectionSpec section,
                               std::shared_ptr<const LimitCycle> o1_ld,
                               IntegratorConfig cfg)
    : params_(std::move(params)), section_(section), cycle_(std::move(o1_ld)),
      cfg_(cfg) {
    params_.validate();
    if (!cycle_) fail(ErrorCode::missing_dependency, "EntrainmentMap: O1 cycle required");
    if (!cycle_->frame)
        fail(ErrorCode::missing_dependency, "EntrainmentMap: O1 cycle has no angle frame");
}

std::shared_ptr<const LimitCycle> make_o1_geometry(const ModelParams& p,
                                                   const IntegratorConfig& cfg) {
    auto cycle = std::make_shared<LimitCycle>(
        find_limit_cycle(p, LightMode::LD, Oscillator::O1, cfg));
    attach_frame(*cycle, make_angle_frame(*cycle, p));
    return cycle;
}

MapStep EntrainmentMap::run(const std::array<double, 2>& o1_start, double y,
                            bool project_x, double x_start) const {
    const LightSchedule ls = make_schedule(LightMode::LD, params_, wrap_phase(y));
    const CntRhs rhs{params_, ls};

    const std::size_t sec_idx = section_.coordinate == SectionSpec::Coord::P ? 2 : 3;
    State<4> y0{o1_start[0], o1_start[1], 0, 0};
    y0[sec_idx] = section_.level;
    y0[sec_idx == 2 ? 3 : 2] = section_.center;

    EventSpec<4> ret;
    ret.fn = [lvl = section_.level, sec_idx](double, const State<4>& s) {
        return s[sec_idx] - lvl;
    };
    ret.direction = section_.direction;
    ret.terminal = true;
    ret.guard = guard_;
    const std::array<EventSpec<4>, 1> evs{ret};

    const auto bps = ls.switch_times(0.0, horizon_);
    WindingObserver wind{&*cycle_->frame};
    auto sol = integrate<4>(rhs, y0, 0.0, horizon_, std::span<const EventSpec<4>>(evs),
                            cfg_, bps, false, wind);
    if (!sol.terminated_by_event)
        fail(ErrorCode::no_return,
             "entrainment map: no directional return within " + std::to_string(horizon_) + " h");

    MapStep out;
    out.return_time = sol.t_end;
    out.o1_end = {sol.y_end[0], sol.y_end[1]};
    out.o2_end = {sol.y_end[2], sol.y_end[3]};
    out.next.y = wrap_phase(y + out.return_time);
    if (project_x) {
        out.next.x = phase_from_angle(angle_of(out.o1_end, *cycle_->frame), *cycle_);
    } else {
        out.next.x = wrap_phase(x_start + out.return_time);
    }
    out.x_winding = std::abs(wind.total);
    out.y_direction = out.return_time < kDayHours ? PhaseDirection::advance
                                                  : PhaseDirection::delay;
    out.x_direction = out.x_winding > kTwoPi ? PhaseDirection::delay
                                             : PhaseDirection::advance;
    return out;
}

MapStep EntrainmentMap::step(MapPoint p) const {
    return run(cycle_->at_phase(p.x), p.y, /*project_x=*/true, p.x);
}

MapStep EntrainmentMap::step_entrained(double y) const {
    // on-cycle O1 stays on-cycle, so the final phase is exactly y + rho
    return run(cycle_->at_phase(y), y, /*project_x=*/false, y);
}

MapStep map_1d_nt(double y, const ModelParams& p, const SectionSpec& s,
                  const IntegratorConfig& cfg) {
    const LightSchedule ls = make_schedule(LightMode::LD, p, wrap_phase(y));
    const NtRhs rhs{p, ls};

    const std::size_t sec_idx = s.coordinate == SectionSpec::Coord::P ? 0 : 1;
    State<2> y0{};
    y0[sec_idx] = s.level;
    y0[sec_idx == 0 ? 1 : 0] = s.center;

    EventSpec<2> ret;
    ret.fn = [lvl = s.level, sec_idx](double, const State<2>& st) {
        return st[sec_idx] - lvl;
    };
    ret.direction = s.direction;
    ret.terminal = true;
    ret.guard = 1.0;
    const std::array<EventSpec<2>, 1> evs{ret};

    const double horizon = 120.0;
    const auto bps = ls.switch_times(0.0, horizon);
    auto sol = integrate<2>(rhs, y0, 0.0, horizon, std::span<const EventSpec<2>>(evs),
                            cfg, bps);
    if (!sol.terminated_by_event)
        fail(ErrorCode::no_return, "1-D entrainment map: no directional return within 120 h");

    MapStep out;
    out.return_time = sol.t_end;
    out.next.y = wrap_phase(y + out.return_time);
    out.next.x = out.next.y;
    out.o1_end = {sol.y_end[0], sol.y_end[1]};
    out.y_direction = out.return_time < kDayHours ? PhaseDirection::advance
                                                  : PhaseDirection::delay;
    out.x_direction = out.y_direction;
    return out;
}

IterationTrace iterate_to_entrainment(const EntrainmentMap& map, MapPoint p0,
                                      MapPoint target, int max_iters, double radius) {
    IterationTrace trace;
    trace.points.push_back(p0);
    if (torus_dist(p0, target) < radius) {
        trace.entrained = true;
        trace.iterations = 0;
        trace.entrainment_time = 0.0;
        return trace;
    }
    double elapsed = 0;
    MapPoint p = p0;
    for (int i = 1; i <= max_iters; ++i) {
        const MapStep s = map.step(p);
        p = s.next;
        elapsed += s.return_time;
        trace.points.push_back(p);
        trace.return_times.push_back(s.return_time);
        trace.y_dirs.push_back(s.y_direction);
        trace.x_dirs.push_back(s.x_direction);
        if (torus_dist(p, target) < radius) {
            trace.entrained = true;
            trace.iterations = i;
            trace.entrainment_time = elapsed;
            return trace;
        }
    }
    trace.iterations = max_iters;
    trace.entrainment_time = -1.0;
    return trace;
}

SectionReport verify_global_section(const EntrainmentMap& map, int n_probes,
                                    std::uint64_t seed) {
    SectionReport rep;
    rep.n_probes = n_probes;
    rep.probes.resize(static_cast<std::size_t>(n_probes));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, kDayHours);
    std::uniform_real_distribution<double> offset(-map.section().delta, map.section().delta);

    const auto& sec = map.section();
    const std::size_t sec_idx = sec.coordinate == SectionSpec::Coord::P ? 2 : 3;
    const std::size_t comp_idx = sec_idx == 2 ? 3 : 2;

    for (auto& probe : rep.probes) {
        probe.start = {wrap_phase(phase(rng)), wrap_phase(phase(rng))};
        probe.m2_start = sec.center + offset(rng);

        const LightSchedule ls = make_schedule(LightMode::LD, map.params(), probe.start.y);
        const CntRhs rhs{map.params(), ls};
        const auto o1 = map.cycle().at_phase(probe.start.x);
        State<4> y0{o1[0], o1[1], 0, 0};
        y0[sec_idx] = sec.level;
        y0[comp_idx] = probe.m2_start;

        EventSpec<4> ret;
        ret.fn = [lvl = sec.level, sec_idx](double, const State<4>& s) {
            return s[sec_idx] - lvl;
        };
        ret.direction = sec.direction;
        ret.terminal = true;
        ret.guard = 1.0;
        const std::array<EventSpec<4>, 1> evs{ret};
        const auto bps = ls.switch_times(0.0, map.horizon());
        auto sol = integrate<4>(rhs, y0, 0.0, map.horizon(),
                                std::span<const EventSpec<4>>(evs), map.config(), bps);
        probe.returned = sol.terminated_by_event;
        if (probe.returned) {
            probe.rho = sol.t_end;
            probe.companion_at_return = sol.y_end[comp_idx];
            ++rep.n_returned;
            rep.max_deviation = std::max(rep.max_deviation,
                                         std::abs(probe.companion_at_return - sec.center));
        }
    }
    return rep;
}

} // namespace cnt
