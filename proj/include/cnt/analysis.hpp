#pragma once

#include <array>
#include <complex>
#include <vector>

#include "cnt/maps.hpp"

namespace cnt {

enum class Stability { sink, saddle, source };

struct FixedPointRecord {
    MapPoint location;
    std::array<std::array<double, 2>, 2> jacobian{}; // of the map, row-major
    std::array<std::complex<double>, 2> eigenvalues{};
    std::array<std::array<std::complex<double>, 2>, 2> eigenvectors{}; // [k] per eigenvalue
    Stability stability = Stability::sink;
    char label = '?'; // A sink, B diagonal-near saddle, C other saddle, D source
    double residual = 0;
    bool converged = false;
};

struct Polyline {
    std::vector<MapPoint> pts;
};

struct MapNullclines {
    std::vector<Polyline> n_x; // x = Pi1(x, y)
    std::vector<Polyline> n_y; // y = Pi2(x, y)
};

// Zero contours of the wrapped residuals x - Pi1 and y - Pi2 on an
// n x n torus grid (marching squares; cells that straddle a first-return
// discontinuity are subdivided once, then skipped if still ambiguous).
MapNullclines map_nullclines(const EntrainmentMap& map, int grid_n, int jobs = 0);

// Newton-refines every N_x/N_y crossing; deduplicates within 0.2 h.
// Unconverged candidates are kept with converged = false.
std::vector<FixedPointRecord> find_fixed_points(const EntrainmentMap& map, int grid_n,
                                                int jobs = 0, double fd_step = 0.05);

// Jacobian/eigen classification of the map at a point (central differences).
FixedPointRecord classify_point(const EntrainmentMap& map, MapPoint p, double fd_step = 0.05);

struct FixedPoint1D {
    double y = 0;
    double derivative = 0; // Pi'(y)
    double rho = 0;
    bool stable = false;
};

// Fixed points of the 1-D O1-entrained map: grid sign scan (discontinuities
// filtered by return-time continuity) refined by bisection.
std::vector<FixedPoint1D> find_fixed_points_1d(const EntrainmentMap& map,
                                               double y_step = 0.1, int jobs = 0);

// Sign-change count used by the saddle-node scans.
int count_fixed_points_1d(const EntrainmentMap& map, double y_step = 0.05, int jobs = 0);

struct HeatmapGrid {
    int nx = 0, ny = 0;
    std::vector<double> values; // entrainment time, hours; -1 = not entrained
    std::vector<int> iterations;
    double x0 = 0, y0 = 0, dx = 0, dy = 0; // node (i,j) at (x0 + i dx, y0 + j dy)

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    double max_finite() const;
    double mean_finite() const;
};

HeatmapGrid entrainment_heatmap(const EntrainmentMap& map, MapPoint stable_fp, int grid_n,
                                int max_iters = 200, int jobs = 0);

enum class ScanParam { alpha1, phi2 };

struct ScanResult {
    double critical = 0;
    double lo = 0, hi = 0;       // final bracket
    int count_lo = 0, count_hi = 0; // fixed-point counts at the range ends
};

// Bisection on the fixed-point count of the O1-entrained map over the
// parameter range; the O1 cycle is unaffected by alpha1/phi2 and is reused.
ScanResult saddle_node_scan(ScanParam which, double lo, double hi,
                            const ModelParams& base, const SectionSpec& section,
                            std::shared_ptr<const LimitCycle> o1_ld,
                            const IntegratorConfig& cfg = {}, double y_step = 0.05,
                            double param_tol = 0.005, int jobs = 0);

struct CobwebResult {
    std::vector<double> y;     // y[0] = start, length n_iters + 1
    std::vector<double> rho;
    std::vector<PhaseDirection> dirs;
};

CobwebResult cobweb(const EntrainmentMap& map, double y0, int n_iters);

// True when the sequence starts with >= 1 delay and ends with >= 1 advance,
// with a single switch between the blocks.
bool delays_then_advances(const std::vector<PhaseDirection>& dirs);

struct IterateField {
    int grid_n = 0, n_iters = 0;
    std::vector<std::vector<MapPoint>> chains; // chains[node] = p0 .. pN
};

IterateField iterate_field(const EntrainmentMap& map, int grid_n, int n_iters, int jobs = 0);

struct CompareReport {
    IterationTrace map_trace;
    std::vector<double> sim_times;  // section-crossing times, hours
    std::vector<double> sim_phases; // light phase at each crossing
    std::vector<double> sim_rhos;
    std::vector<PhaseDirection> sim_y_dirs;
    bool sim_entrained = false;
    int sim_entrain_index = 0;
    double sim_entrain_time = -1;
    double map_final_y = 0, sim_final_y = 0;
    double final_phase_diff = 0; // torus distance of final light phases
    bool directions_match = false; // y-direction prefix agreement
};

// Runs the map iteration and a direct simulation from the same initial
// condition and reports final phases plus direction signatures.
CompareReport compare_map_vs_simulation(const EntrainmentMap& map, MapPoint p0,
                                        MapPoint target, int sim_max_crossings = 150,
                                        int map_max_iters = 300);

} // namespace cnt
