#include "cnt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "cnt/errors.hpp"
#include "cnt/parallel.hpp"

namespace cnt {

namespace {

struct Seg {
    MapPoint a, b;
};

// Grid of map evaluations plus the contour-segment soup of both residual
// fields. Cell-local coordinates are unwrapped (the wrap column/row extends
// past 24), so segments within one cell can be intersected directly.
struct GridContours {
    int n = 0;
    double h = 0;
    std::vector<MapStep> steps; // node (i, j) -> step at ((i+1) h, (j+1) h)
    std::vector<Seg> segs_x, segs_y;
    std::vector<std::vector<Seg>> cell_x, cell_y; // per cell (i + n j)
};

struct Corner {
    double rx, ry, rho;
};

// Re-anchor circle-valued residuals to the first corner; ambiguous when the
// spread exceeds 6 h or the return time jumps by more than 6 h (a
// first-return discontinuity runs through the cell).
bool rewrap(std::array<Corner, 4>& c, bool use_x) {
    const double anchor = use_x ? c[0].rx : c[0].ry;
    double vmax = 0;
    for (auto& q : c) {
        double& v = use_x ? q.rx : q.ry;
        v = anchor + wrap_diff(v - anchor);
        vmax = std::max(vmax, std::abs(v - anchor));
        if (std::abs(q.rho - c[0].rho) > 6.0) return false;
    }
    return vmax <= 6.0;
}

void march_cell(const std::array<Corner, 4>& c, const std::array<double, 2>& org,
                double hx, double hy, bool use_x, std::vector<Seg>& out) {
    // corners: 0=(0,0) 1=(1,0) 2=(1,1) 3=(0,1) in cell-local units
    const std::array<double, 4> v{use_x ? c[0].rx : c[0].ry, use_x ? c[1].rx : c[1].ry,
                                  use_x ? c[2].rx : c[2].ry, use_x ? c[3].rx : c[3].ry};
    int idx = 0;
    for (int i = 0; i < 4; ++i)
        if (v[i] > 0) idx |= 1 << i;
    if (idx == 0 || idx == 15) return;

    auto lerp = [&](int i, int j, double xi, double yi, double xj, double yj) -> MapPoint {
        const double t = v[i] / (v[i] - v[j]);
        return {org[0] + (xi + t * (xj - xi)) * hx, org[1] + (yi + t * (yj - yi)) * hy};
    };
    const MapPoint pb = lerp(0, 1, 0, 0, 1, 0); // bottom
    const MapPoint pr = lerp(1, 2, 1, 0, 1, 1); // right
    const MapPoint pt = lerp(3, 2, 0, 1, 1, 1); // top
    const MapPoint pl = lerp(0, 3, 0, 0, 0, 1); // left

    switch (idx) {
    case 1: case 14: out.push_back({pl, pb}); break;
    case 2: case 13: out.push_back({pb, pr}); break;
    case 3: case 12: out.push_back({pl, pr}); break;
    case 4: case 11: out.push_back({pr, pt}); break;
    case 6: case 9:  out.push_back({pb, pt}); break;
    case 7: case 8:  out.push_back({pl, pt}); break;
    case 5: case 10: {
        const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool same_as_0 = (center > 0) == (v[0] > 0);
        if ((idx == 5) == same_as_0) {
            out.push_back({pl, pt});
            out.push_back({pb, pr});
        } else {
            out.push_back({pl, pb});
            out.push_back({pr, pt});
        }
        break;
    }
    default: break;
    }
}

GridContours grid_contours(const EntrainmentMap& map, int grid_n, int jobs) {
    if (grid_n < 8) fail(ErrorCode::usage, "grid_n must be >= 8");
    GridContours g;
    g.n = grid_n;
    g.h = kDayHours / grid_n;
    const auto nn = static_cast<std::size_t>(grid_n) * grid_n;
    g.steps.resize(nn);
    parallel_for(nn, jobs, [&](std::size_t k) {
        const int i = static_cast<int>(k) % grid_n;
        const int j = static_cast<int>(k) / grid_n;
        g.steps[k] = map.step({(i + 1) * g.h, (j + 1) * g.h});
    });
    g.cell_x.resize(nn);
    g.cell_y.resize(nn);

    auto corner = [&](int i, int j) -> Corner {
        const int iw = (i % grid_n + grid_n) % grid_n;
        const int jw = (j % grid_n + grid_n) % grid_n;
        const auto& s = g.steps[static_cast<std::size_t>(jw) * grid_n + iw];
        const double x = (iw + 1) * g.h, y = (jw + 1) * g.h;
        return {wrap_diff(s.next.x - x), wrap_diff(s.next.y - y), s.return_time};
    };

    // cell (i, j): corners at nodes (i,j), (i+1,j), (i+1,j+1), (i,j+1)
    for (int j = 0; j < grid_n; ++j) {
        for (int i = 0; i < grid_n; ++i) {
            const std::array<Corner, 4> raw{corner(i, j), corner(i + 1, j),
                                            corner(i + 1, j + 1), corner(i, j + 1)};
            const std::array<double, 2> org{(i + 1) * g.h, (j + 1) * g.h};
            const std::size_t ci = static_cast<std::size_t>(j) * grid_n + i;
            for (const bool use_x : {true, false}) {
                auto c = raw;
                auto& cell = use_x ? g.cell_x[ci] : g.cell_y[ci];
                if (rewrap(c, use_x)) {
                    march_cell(c, org, g.h, g.h, use_x, cell);
                } else {
                    // subdivide once; evaluate the 5 midpoints on demand
                    std::array<MapStep, 5> mid;
                    const std::array<std::array<double, 2>, 5> rel{{
                        {0.5, 0.0}, {1.0, 0.5}, {0.5, 1.0}, {0.0, 0.5}, {0.5, 0.5}}};
                    for (int m = 0; m < 5; ++m)
                        mid[m] = map.step({wrap_phase(org[0] + rel[m][0] * g.h),
                                           wrap_phase(org[1] + rel[m][1] * g.h)});
                    auto mc = [&](int m) -> Corner {
                        const double x = org[0] + rel[m][0] * g.h;
                        const double y = org[1] + rel[m][1] * g.h;
                        return {wrap_diff(mid[m].next.x - x), wrap_diff(mid[m].next.y - y),
                                mid[m].return_time};
                    };
                    const std::array<std::array<Corner, 4>, 4> sub{{
                        {raw[0], mc(0), mc(4), mc(3)},
                        {mc(0), raw[1], mc(1), mc(4)},
                        {mc(4), mc(1), raw[2], mc(2)},
                        {mc(3), mc(4), mc(2), raw[3]}}};
                    const std::array<std::array<double, 2>, 4> sorg{{
                        {org[0], org[1]},
                        {org[0] + 0.5 * g.h, org[1]},
                        {org[0] + 0.5 * g.h, org[1] + 0.5 * g.h},
                        {org[0], org[1] + 0.5 * g.h}}};
                    for (int q = 0; q < 4; ++q) {
                        auto cs = sub[q];
                        if (rewrap(cs, use_x))
                            march_cell(cs, sorg[q], 0.5 * g.h, 0.5 * g.h, use_x, cell);
                    }
                }
            }
            for (const auto& s : g.cell_x[ci]) g.segs_x.push_back(s);
            for (const auto& s : g.cell_y[ci]) g.segs_y.push_back(s);
        }
    }
    return g;
}

std::vector<Polyline> chain_segments(const std::vector<Seg>& segs) {
    auto key = [](MapPoint p) {
        return std::pair<long long, long long>{std::llround(wrap_phase(p.x) * 1e6),
                                               std::llround(wrap_phase(p.y) * 1e6)};
    };
    std::multimap<std::pair<long long, long long>, std::size_t> ends;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        ends.insert({key(segs[i].a), i});
        ends.insert({key(segs[i].b), i});
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<Polyline> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<MapPoint> line{segs[i].a, segs[i].b};
        for (const bool front : {false, true}) {
            while (true) {
                const MapPoint tip = front ? line.front() : line.back();
                auto [lo, hi] = ends.equal_range(key(tip));
                std::size_t next = segs.size();
                for (auto it = lo; it != hi; ++it)
                    if (!used[it->second]) {
                        next = it->second;
                        break;
                    }
                if (next == segs.size()) break;
                used[next] = true;
                const auto& s = segs[next];
                const MapPoint other = key(s.a) == key(tip) ? s.b : s.a;
                if (front) line.insert(line.begin(), other);
                else line.push_back(other);
            }
        }
        for (auto& p : line) p = {wrap_phase(p.x), wrap_phase(p.y)};
        out.push_back({std::move(line)});
    }
    return out;
}

bool seg_intersect(const Seg& s, const Seg& t, MapPoint& at) {
    const double rx = s.b.x - s.a.x, ry = s.b.y - s.a.y;
    const double qx = t.b.x - t.a.x, qy = t.b.y - t.a.y;
    const double den = rx * qy - ry * qx;
    if (std::abs(den) < 1e-14) return false;
    const double dx = t.a.x - s.a.x, dy = t.a.y - s.a.y;
    const double u = (dx * qy - dy * qx) / den;
    const double v = (dx * ry - dy * rx) / den;
    if (u < -1e-9 || u > 1 + 1e-9 || v < -1e-9 || v > 1 + 1e-9) return false;
    at = {s.a.x + u * rx, s.a.y + u * ry};
    return true;
}

std::array<std::array<double, 2>, 2> fd_jacobian(const EntrainmentMap& map, MapPoint p,
                                                 double fd) {
    const auto sxp = map.step({wrap_phase(p.x + fd), p.y});
    const auto sxm = map.step({wrap_phase(p.x - fd), p.y});
    const auto syp = map.step({p.x, wrap_phase(p.y + fd)});
    const auto sym = map.step({p.x, wrap_phase(p.y - fd)});
    return {{{wrap_diff(sxp.next.x - sxm.next.x) / (2 * fd),
              wrap_diff(syp.next.x - sym.next.x) / (2 * fd)},
             {wrap_diff(sxp.next.y - sxm.next.y) / (2 * fd),
              wrap_diff(syp.next.y - sym.next.y) / (2 * fd)}}};
}

void eigen2x2(FixedPointRecord& rec) {
    const auto& J = rec.jacobian;
    const double tr = J[0][0] + J[1][1];
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double disc = tr * tr / 4 - det;
    if (disc >= 0) {
        const double root = std::sqrt(disc);
        rec.eigenvalues = {std::complex<double>(tr / 2 + root, 0),
                           std::complex<double>(tr / 2 - root, 0)};
    } else {
        const double root = std::sqrt(-disc);
        rec.eigenvalues = {std::complex<double>(tr / 2, root),
                           std::complex<double>(tr / 2, -root)};
    }
    for (int k = 0; k < 2; ++k) {
        const auto lam = rec.eigenvalues[k];
        // rows of J - lam I are parallel; take the better-conditioned one
        const std::complex<double> v1a = J[0][1], v1b = lam - J[0][0];
        const std::complex<double> v2a = lam - J[1][1], v2b = J[1][0];
        std::complex<double> vx, vy;
        if (std::abs(v1a) + std::abs(v1b) >= std::abs(v2a) + std::abs(v2b)) {
            vx = v1a;
            vy = v1b;
        } else {
            vx = v2a;
            vy = v2b;
        }
        const double nrm = std::sqrt(std::norm(vx) + std::norm(vy));
        if (nrm > 0) {
            vx /= nrm;
            vy /= nrm;
        }
        rec.eigenvectors[k] = {vx, vy};
    }
    const double m0 = std::abs(rec.eigenvalues[0]);
    const double m1 = std::abs(rec.eigenvalues[1]);
    if (m0 < 1 && m1 < 1) rec.stability = Stability::sink;
    else if (m0 > 1 && m1 > 1) rec.stability = Stability::source;
    else rec.stability = Stability::saddle;
}

} // namespace

MapNullclines map_nullclines(const EntrainmentMap& map, int grid_n, int jobs) {
    const auto g = grid_contours(map, grid_n, jobs);
    return {chain_segments(g.segs_x), chain_segments(g.segs_y)};
}

FixedPointRecord classify_point(const EntrainmentMap& map, MapPoint p, double fd_step) {
    FixedPointRecord rec;
    rec.location = p;
    const auto s = map.step(p);
    rec.residual = std::hypot(wrap_diff(s.next.x - p.x), wrap_diff(s.next.y - p.y));
    rec.jacobian = fd_jacobian(map, p, fd_step);
    eigen2x2(rec);
    return rec;
}

std::vector<FixedPointRecord> find_fixed_points(const EntrainmentMap& map, int grid_n,
                                                int jobs, double fd_step) {
    const auto g = grid_contours(map, grid_n, jobs);

    // seeds: contour crossings cell by cell
    std::vector<MapPoint> seeds;
    for (std::size_t ci = 0; ci < g.cell_x.size(); ++ci) {
        for (const auto& sx : g.cell_x[ci])
            for (const auto& sy : g.cell_y[ci]) {
                MapPoint at;
                if (seg_intersect(sx, sy, at)) {
                    at = {wrap_phase(at.x), wrap_phase(at.y)};
                    bool dup = false;
                    for (const auto& q : seeds)
                        if (torus_dist(q, at) < 0.1) {
                            dup = true;
                            break;
                        }
                    if (!dup) seeds.push_back(at);
                }
            }
    }

    std::vector<FixedPointRecord> found(seeds.size());
    parallel_for(seeds.size(), jobs, [&](std::size_t si) {
        MapPoint p = seeds[si];
        FixedPointRecord rec;
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            const auto s = map.step(p);
            const double f0 = wrap_diff(s.next.x - p.x);
            const double f1 = wrap_diff(s.next.y - p.y);
            if (std::abs(f0) < 1e-6 && std::abs(f1) < 1e-6) {
                ok = true;
                break;
            }
            const auto J = fd_jacobian(map, p, fd_step);
            const double a = J[0][0] - 1, b = J[0][1], c = J[1][0], d = J[1][1] - 1;
            const double det = a * d - b * c;
            if (std::abs(det) < 1e-12) break;
            double dx = (-f0 * d + f1 * b) / det;
            double dy = (-a * f1 + c * f0) / det;
            const double nrm = std::hypot(dx, dy);
            if (nrm > 2.0) { // damp long steps
                dx *= 2.0 / nrm;
                dy *= 2.0 / nrm;
            }
            p = {wrap_phase(p.x + dx), wrap_phase(p.y + dy)};
        }
        rec = classify_point(map, p, fd_step);
        rec.converged = ok;
        found[si] = rec;
    });

    // deduplicate within 0.2 h, preferring smaller residuals
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.residual < b.residual; });
    std::vector<FixedPointRecord> uniq;
    for (auto& rec : found) {
        bool dup = false;
        for (const auto& u : uniq)
            if (torus_dist(u.location, rec.location) < 0.2) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(rec);
    }

    // labels: sink -> A, source -> D, saddles by diagonal proximity -> B, C
    std::vector<FixedPointRecord*> saddles;
    for (auto& rec : uniq) {
        if (!rec.converged) continue;
        if (rec.stability == Stability::sink && rec.label == '?') rec.label = 'A';
        else if (rec.stability == Stability::source && rec.label == '?') rec.label = 'D';
        else if (rec.stability == Stability::saddle) saddles.push_back(&rec);
    }
    std::sort(saddles.begin(), saddles.end(), [](const auto* a, const auto* b) {
        return std::abs(wrap_diff(a->location.x - a->location.y)) <
               std::abs(wrap_diff(b->location.x - b->location.y));
    });
    if (!saddles.empty()) saddles[0]->label = 'B';
    if (saddles.size() > 1) saddles[1]->label = 'C';

    std::sort(uniq.begin(), uniq.end(), [](const auto& a, const auto& b) {
        return (a.label == '?' ? 'Z' : a.label) < (b.label == '?' ? 'Z' : b.label);
    });
    return uniq;
}

std::vector<FixedPoint1D> find_fixed_points_1d(const EntrainmentMap& map, double y_step,
                                               int jobs) {
    const int n = static_cast<int>(std::lround(kDayHours / y_step));
    std::vector<double> resid(n), rho(n);
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        const double y = (static_cast<double>(i) + 1.0) * y_step;
        const auto s = map.step_entrained(y);
        resid[i] = wrap_diff(s.next.y - y);
        rho[i] = s.return_time;
    });

    std::vector<FixedPoint1D> out;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double a = resid[i], b = resid[j];
        if (!(a * b < 0)) continue;
        if (std::abs(a - b) > 6.0) continue;       // wrap artifact
        if (std::abs(rho[i] - rho[j]) > 6.0) continue; // first-return jump
        double ylo = (i + 1) * y_step, yhi = ylo + y_step;
        double flo = a;
        for (int it = 0; it < 45; ++it) {
            const double ym = 0.5 * (ylo + yhi);
            const double fm = wrap_diff(map.step_entrained(wrap_phase(ym)).next.y - ym);
            if ((fm < 0) == (flo < 0)) {
                ylo = ym;
                flo = fm;
            } else {
                yhi = ym;
            }
        }
        FixedPoint1D fp;
        fp.y = wrap_phase(0.5 * (ylo + yhi));
        const double fd = 0.05;
        fp.derivative = wrap_diff(map.step_entrained(wrap_phase(fp.y + fd)).next.y -
                                  map.step_entrained(wrap_phase(fp.y - fd)).next.y) /
                        (2 * fd);
        fp.rho = map.step_entrained(fp.y).return_time;
        fp.stable = std::abs(fp.derivative) < 1.0;
        out.push_back(fp);
    }
    return out;
}

int count_fixed_points_1d(const EntrainmentMap& map, double y_step, int jobs) {
    const int n = static_cast<int>(std::lround(kDayHours / y_step));
    std::vector<double> resid(n), rho(n);
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        const double y = (static_cast<double>(i) + 1.0) * y_step;
        const auto s = map.step_entrained(y);
        resid[i] = wrap_diff(s.next.y - y);
        rho[i] = s.return_time;
    });
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        if (resid[i] * resid[j] < 0 && std::abs(resid[i] - resid[j]) < 6.0 &&
            std::abs(rho[i] - rho[j]) < 6.0)
            ++count;
    }
    return count;
}

double HeatmapGrid::max_finite() const {
    double m = -1;
    for (double v : values)
        if (v >= 0) m = std::max(m, v);
    return m;
}

double HeatmapGrid::mean_finite() const {
    double sum = 0;
    std::size_t cnt = 0;
    for (double v : values)
        if (v >= 0) {
            sum += v;
            ++cnt;
        }
    return cnt ? sum / static_cast<double>(cnt) : -1;
}

HeatmapGrid entrainment_heatmap(const EntrainmentMap& map, MapPoint stable_fp, int grid_n,
                                int max_iters, int jobs) {
    HeatmapGrid grid;
    grid.nx = grid.ny = grid_n;
    grid.dx = grid.dy = kDayHours / grid_n;
    grid.x0 = grid.y0 = 0.5 * grid.dx;
    const auto nn = static_cast<std::size_t>(grid_n) * grid_n;
    grid.values.assign(nn, -1.0);
    grid.iterations.assign(nn, 0);
    parallel_for(nn, jobs, [&](std::size_t k) {
        const int i = static_cast<int>(k) % grid_n;
        const int j = static_cast<int>(k) / grid_n;
        const MapPoint p0{grid.x0 + i * grid.dx, grid.y0 + j * grid.dy};
        const auto trace = iterate_to_entrainment(map, p0, stable_fp, max_iters);
        grid.values[k] = trace.entrainment_time;
        grid.iterations[k] = trace.iterations;
    });
    return grid;
}

ScanResult saddle_node_scan(ScanParam which, double lo, double hi,
                            const ModelParams& base, const SectionSpec& section,
                            std::shared_ptr<const LimitCycle> o1_ld,
                            const IntegratorConfig& cfg, double y_step,
                            double param_tol, int jobs) {
    if (!(hi > lo)) fail(ErrorCode::usage, "saddle_node_scan: need lo < hi");
    auto count_at = [&](double v) {
        ModelParams p = base;
        (which == ScanParam::alpha1 ? p.alpha1 : p.phi2) = v;
        const EntrainmentMap m(p, section, o1_ld, cfg);
        return count_fixed_points_1d(m, y_step, jobs);
    };
    ScanResult res;
    res.count_lo = count_at(lo);
    res.count_hi = count_at(hi);
    if (res.count_lo == res.count_hi)
        fail(ErrorCode::no_bifurcation,
             "saddle_node_scan: same fixed-point count (" + std::to_string(res.count_lo) +
                 ") at both range ends");
    double a = lo, b = hi;
    while (b - a > param_tol) {
        const double mid = 0.5 * (a + b);
        if (count_at(mid) == res.count_lo) a = mid;
        else b = mid;
    }
    res.lo = a;
    res.hi = b;
    res.critical = 0.5 * (a + b);
    return res;
}

CobwebResult cobweb(const EntrainmentMap& map, double y0, int n_iters) {
    CobwebResult out;
    out.y.push_back(wrap_phase(y0));
    for (int i = 0; i < n_iters; ++i) {
        const auto s = map.step_entrained(out.y.back());
        out.y.push_back(s.next.y);
        out.rho.push_back(s.return_time);
        out.dirs.push_back(s.y_direction);
    }
    return out;
}

bool delays_then_advances(const std::vector<PhaseDirection>& dirs) {
    if (dirs.size() < 2) return false;
    std::size_t i = 0;
    while (i < dirs.size() && dirs[i] == PhaseDirection::delay) ++i;
    if (i == 0 || i == dirs.size()) return false;
    for (; i < dirs.size(); ++i)
        if (dirs[i] != PhaseDirection::advance) return false;
    return true;
}

IterateField iterate_field(const EntrainmentMap& map, int grid_n, int n_iters, int jobs) {
    IterateField field;
    field.grid_n = grid_n;
    field.n_iters = n_iters;
    const auto nn = static_cast<std::size_t>(grid_n) * grid_n;
    field.chains.resize(nn);
    const double h = kDayHours / grid_n;
    parallel_for(nn, jobs, [&](std::size_t k) {
        const int i = static_cast<int>(k) % grid_n;
        const int j = static_cast<int>(k) / grid_n;
        MapPoint p{(i + 0.5) * h, (j + 0.5) * h};
        auto& chain = field.chains[k];
        chain.push_back(p);
        for (int it = 0; it < n_iters; ++it) {
            p = map.step(p).next;
            chain.push_back(p);
        }
    });
    return field;
}

CompareReport compare_map_vs_simulation(const EntrainmentMap& map, MapPoint p0,
                                        MapPoint target, int sim_max_crossings,
                                        int map_max_iters) {
    CompareReport rep;
    rep.map_trace = iterate_to_entrainment(map, p0, target, map_max_iters);

    // polish the map end point for the final-phase comparison
    {
        MapPoint p = rep.map_trace.points.back();
        for (int i = 0; i < 40 && torus_dist(p, target) > 0.02; ++i) p = map.step(p).next;
        rep.map_final_y = p.y;
    }

    // direct simulation from the identical initial state
    {
        const auto& sec = map.section();
        const std::size_t sec_idx = sec.coordinate == SectionSpec::Coord::P ? 2 : 3;
        const LightSchedule ls = make_schedule(LightMode::LD, map.params(), wrap_phase(p0.y));
        const CntRhs rhs{map.params(), ls};
        const auto o1 = map.cycle().at_phase(p0.x);
        State<4> y0{o1[0], o1[1], 0, 0};
        y0[sec_idx] = sec.level;
        y0[sec_idx == 2 ? 3 : 2] = sec.center;

        EventSpec<4> cross;
        cross.fn = [lvl = sec.level, sec_idx](double, const State<4>& s) {
            return s[sec_idx] - lvl;
        };
        cross.direction = sec.direction;
        cross.terminal = false;
        cross.guard = 1.0;
        const std::array<EventSpec<4>, 1> evs{cross};

        const double horizon = 32.0 * sim_max_crossings;
        const auto bps = ls.switch_times(0.0, horizon);
        const auto sol = integrate<4>(rhs, y0, 0.0, horizon,
                                      std::span<const EventSpec<4>>(evs), map.config(), bps);
        double prev_t = 0;
        for (const auto& hit : sol.events) {
            if (!rep.sim_times.empty() && hit.t - rep.sim_times.back() < 1.0) continue;
            rep.sim_times.push_back(hit.t);
            rep.sim_phases.push_back(wrap_phase(p0.y + hit.t));
            rep.sim_rhos.push_back(hit.t - prev_t);
            rep.sim_y_dirs.push_back(hit.t - prev_t < kDayHours ? PhaseDirection::advance
                                                                : PhaseDirection::delay);
            prev_t = hit.t;
            if (static_cast<int>(rep.sim_times.size()) >= sim_max_crossings) break;
        }
    }

    if (!rep.sim_phases.empty()) {
        // smallest m with all later phases inside the entrainment window
        int m = static_cast<int>(rep.sim_phases.size());
        for (int i = static_cast<int>(rep.sim_phases.size()) - 1; i >= 0; --i) {
            if (torus_dist1(rep.sim_phases[static_cast<std::size_t>(i)], target.y) < 0.5)
                m = i;
            else break;
        }
        rep.sim_entrained = m < static_cast<int>(rep.sim_phases.size());
        if (rep.sim_entrained) {
            rep.sim_entrain_index = m + 1; // iterate count, matching the map's m
            rep.sim_entrain_time = rep.sim_times[static_cast<std::size_t>(m)];
        }
        rep.sim_final_y = rep.sim_phases.back();
    }
    rep.final_phase_diff = torus_dist1(rep.map_final_y, rep.sim_final_y);

    const std::size_t k = std::min({rep.map_trace.y_dirs.size(), rep.sim_y_dirs.size(),
                                    static_cast<std::size_t>(std::max(1, rep.sim_entrain_index))});
    rep.directions_match = k > 0;
    for (std::size_t i = 0; i < k; ++i)
        if (rep.map_trace.y_dirs[i] != rep.sim_y_dirs[i]) rep.directions_match = false;
    return rep;
}

} // namespace cnt
