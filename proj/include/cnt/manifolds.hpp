#pragma once

#include <string>
#include <vector>

#include "cnt/analysis.hpp"
#include "cnt/maps.hpp"

namespace cnt {

enum class ManifoldKind { stable, unstable };
enum class Termination { reached_sink, reached_source, max_points, stalled };

struct GrowParams {
    double eps0 = 0.01;       // seed offset along the eigenvector
    double d_min = 0.05;      // output vertex spacing floor
    double d_max = 0.5;       // spacing / search-radius ceiling
    double max_turn = 0.3;    // radians between consecutive edges
    double land_tol = 0.02;   // image-to-curve distance for SC acceptance
    double stop_radius = 0.5; // terminate inside this ball around the limit point
    int max_points = 4000;
};

struct ManifoldCurve {
    char saddle_label = '?';
    MapPoint saddle;
    ManifoldKind kind = ManifoldKind::unstable;
    int branch = +1;
    std::vector<MapPoint> vertices;     // dense accepted points, saddle outward
    std::vector<Polyline> segments;     // thinned output, split at domain wraps
    Termination termination = Termination::stalled;
    double arc_length = 0;
};

// Growing method: iterate a fundamental domain along the unstable
// eigenvector, inserting source points until image spacing and turn-angle
// constraints hold. Terminates in the stop ball around the sink.
ManifoldCurve grow_unstable(const FixedPointRecord& saddle, int branch,
                            const EntrainmentMap& map, MapPoint sink,
                            const GrowParams& gp = {});

// Search-circle method: extends the curve with points whose forward image
// lands on the already-accepted polyline (no map inverse needed). Terminates
// in the stop ball around the source. When `other` is given, its vertices
// are prepended (reversed, through the saddle) to the landing chain: past a
// preimage of the saddle, the continuation's images cross onto the opposite
// branch, which a single-branch chain cannot catch.
ManifoldCurve grow_stable_sc(const FixedPointRecord& saddle, int branch,
                             const EntrainmentMap& map, MapPoint source,
                             const GrowParams& gp = {},
                             const ManifoldCurve* other = nullptr);

// Both stable branches of a saddle; stalled branches are regrown with the
// opposite branch available as a landing target.
std::array<ManifoldCurve, 2> grow_stable_pair(const FixedPointRecord& saddle,
                                              const EntrainmentMap& map, MapPoint source,
                                              const GrowParams& gp = {});

// Torus distance from a point to the union of the curve's segments.
double distance_to_curve(MapPoint p, const ManifoldCurve& curve);
double distance_to_polylines(MapPoint p, const std::vector<Polyline>& lines);

// Arc-length position of the closest curve point to p (dense vertex chain).
double arc_position(MapPoint p, const ManifoldCurve& curve);

void write_manifold_csv(const ManifoldCurve& curve, const std::string& path);

} // namespace cnt
