#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "cnt/cycles.hpp"
#include "cnt/params.hpp"
#include "cnt/torus.hpp"

namespace cnt {

// Poincare section in one oscillator's (P, M) plane: the level set of one
// coordinate, crossed with a fixed derivative sign. center is the companion
// coordinate of the nominal crossing and serves as the start point; delta is
// the half-width used when verifying that returns stay near the center.
struct SectionSpec {
    enum class Coord { P = 0, M = 1 };
    Coord coordinate = Coord::P;
    double level = 1.72;
    double center = 0.1289;
    double delta = 0.01;
    int direction = -1;
};

SectionSpec o2_section_canonical(); // P2 = 1.72, M2 near 0.1289, P2' < 0
SectionSpec o2_section_semi();      // M2 center 0.1548 (k_L2 = 0.025)
SectionSpec nt_section();           // M = 0.45, P near 0.852, M' > 0

struct MapPoint {
    double x = 0; // O1 phase on its LD cycle, (0, 24]
    double y = 0; // light phase, (0, 24]
};

inline double torus_dist(MapPoint a, MapPoint b) {
    return torus_dist2(a.x, a.y, b.x, b.y);
}

enum class PhaseDirection { advance, delay };

struct MapStep {
    MapPoint next;
    double return_time = 0; // rho, hours
    double x_winding = 0;   // angle swept by O1 about the frame origin, radians
    PhaseDirection y_direction = PhaseDirection::advance; // advance iff rho < 24
    PhaseDirection x_direction = PhaseDirection::advance; // delay iff winding > 2pi
    std::array<double, 2> o1_end{}, o2_end{};
};

// The 2-D entrainment map. Each evaluation places O1 on its LD-entrained
// cycle at phase x, O2 at the section center with light phase y, and
// integrates the coupled system to the first directional return of O2.
class EntrainmentMap {
public:
    EntrainmentMap(ModelParams params, SectionSpec section,
                   std::shared_ptr<const LimitCycle> o1_ld,
                   IntegratorConfig cfg = {});

    // Pi(x, y)
    MapStep step(MapPoint p) const;
    // Pi_O1(y): O1 pinned to gamma(y); next.x = next.y exactly.
    MapStep step_entrained(double y) const;

    const ModelParams& params() const { return params_; }
    const SectionSpec& section() const { return section_; }
    const LimitCycle& cycle() const { return *cycle_; }
    std::shared_ptr<const LimitCycle> cycle_ptr() const { return cycle_; }
    const IntegratorConfig& config() const { return cfg_; }
    double horizon() const { return horizon_; }

private:
    MapStep run(const std::array<double, 2>& o1_start, double y, bool project_x,
                double x_start) const;

    ModelParams params_;
    SectionSpec section_;
    std::shared_ptr<const LimitCycle> cycle_;
    IntegratorConfig cfg_;
    double guard_ = 1.0;     // hours before return detection arms
    double horizon_ = 120.0; // throw no_return past this
};

// Builds the canonical O1 LD cycle with its angle frame attached.
std::shared_ptr<const LimitCycle> make_o1_geometry(const ModelParams& p,
                                                   const IntegratorConfig& cfg =
                                                       cycle_integrator_defaults());

// 1-D entrainment map of a single light-driven oscillator: start at the
// section center with light phase y, return to the directional level set.
MapStep map_1d_nt(double y, const ModelParams& p, const SectionSpec& s,
                  const IntegratorConfig& cfg = {});

struct IterationTrace {
    std::vector<MapPoint> points; // points[0] = start
    std::vector<double> return_times;
    std::vector<PhaseDirection> y_dirs, x_dirs;
    bool entrained = false;
    int iterations = 0;              // first index within the radius
    double entrainment_time = -1.0;  // sum of return times; -1 if not entrained
};

IterationTrace iterate_to_entrainment(const EntrainmentMap& map, MapPoint p0,
                                      MapPoint target, int max_iters = 200,
                                      double radius = 0.5);

struct SectionProbe {
    MapPoint start;
    double m2_start = 0;
    double rho = 0;
    double companion_at_return = 0;
    bool returned = false;
};

struct SectionReport {
    int n_probes = 0;
    int n_returned = 0;
    double max_deviation = 0; // max |companion - center| over returns
    std::vector<SectionProbe> probes;
};

// Random starts on the section (companion within +-delta of center, random
// x and y); checks that every probe returns within the horizon and records
// the companion-coordinate spread at return.
SectionReport verify_global_section(const EntrainmentMap& map, int n_probes,
                                    std::uint64_t seed);

} // namespace cnt
