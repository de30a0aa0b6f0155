#include "cnt/manifolds.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <list>

#include "cnt/errors.hpp"

namespace cnt {

namespace {

struct Vec2 {
    double x = 0, y = 0;
};

Vec2 tvec(MapPoint from, MapPoint to) {
    return {wrap_diff(to.x - from.x), wrap_diff(to.y - from.y)};
}

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

MapPoint offset(MapPoint p, Vec2 v, double s = 1.0) {
    return {wrap_phase(p.x + s * v.x), wrap_phase(p.y + s * v.y)};
}

double turn_angle(MapPoint a, MapPoint b, MapPoint c) {
    const Vec2 u = tvec(a, b), v = tvec(b, c);
    const double nu = norm(u), nv = norm(v);
    if (nu == 0 || nv == 0) return 0;
    double cosang = (u.x * v.x + u.y * v.y) / (nu * nv);
    cosang = std::max(-1.0, std::min(1.0, cosang));
    return std::acos(cosang);
}

// Unstable eigenvector of a saddle (the real eigenvector with |lambda| > 1).
Vec2 saddle_eigvec(const FixedPointRecord& rec, bool unstable) {
    int k = -1;
    for (int i = 0; i < 2; ++i) {
        const double m = std::abs(rec.eigenvalues[i]);
        if ((unstable && m > 1.0) || (!unstable && m < 1.0)) k = i;
    }
    if (k < 0 || std::abs(rec.eigenvalues[k].imag()) > 1e-9)
        fail(ErrorCode::usage, "manifolds: saddle lacks the required real eigenvalue");
    Vec2 v{rec.eigenvectors[k][0].real(), rec.eigenvectors[k][1].real()};
    const double n = norm(v);
    if (n < 1e-12) fail(ErrorCode::usage, "manifolds: degenerate eigenvector");
    return {v.x / n, v.y / n};
}

// Greedy output thinning to [d_min, d_max] spacing, split at domain wraps.
void build_segments(ManifoldCurve& c, const GrowParams& gp) {
    c.segments.clear();
    if (c.vertices.empty()) return;
    Polyline cur;
    cur.pts.push_back(c.vertices.front());
    MapPoint last_emitted = c.vertices.front();
    MapPoint prev = c.vertices.front();
    double arc = 0;
    for (std::size_t i = 1; i < c.vertices.size(); ++i) {
        const MapPoint p = c.vertices[i];
        const Vec2 step = tvec(prev, p);
        arc += norm(step);
        // wrap detection in raw coordinates
        const bool wraps = std::abs(p.x - prev.x) > 12.0 || std::abs(p.y - prev.y) > 12.0;
        const bool final_pt = i + 1 == c.vertices.size();
        if (wraps) {
            // close the old segment in its own frame, reopen in the new one
            cur.pts.push_back({prev.x + step.x, prev.y + step.y});
            c.segments.push_back(cur);
            cur.pts.clear();
            cur.pts.push_back({p.x - step.x, p.y - step.y});
            cur.pts.push_back(p);
            last_emitted = p;
        } else if (torus_dist(last_emitted, p) >= gp.d_min || final_pt) {
            cur.pts.push_back(p);
            last_emitted = p;
        }
        prev = p;
    }
    if (cur.pts.size() > 1) c.segments.push_back(cur);
    c.arc_length = arc;
}

// Signed distance info of a query point against the dense vertex chain.
struct CurveHit {
    double dist = 1e30;
    double side = 0;  // sign of the cross product at the nearest segment
    double arc = 0;   // arc-length coordinate of the projection
    bool interior = false;
};

// arc_window: when nonnegative, only segments with arc inside
// [arc_window - span, arc_window + span] are considered; keeps the
// projection from snapping to a different winding of a spiraling curve.
CurveHit project_to_chain(MapPoint q, const std::vector<MapPoint>& pts,
                          const std::vector<double>& arcs, double arc_window = -1,
                          double span = 2.0) {
    CurveHit best;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (arc_window >= 0 &&
            (arcs[i + 1] < arc_window - span || arcs[i] > arc_window + span))
            continue;
        const Vec2 v = tvec(pts[i], pts[i + 1]);
        const double len2 = v.x * v.x + v.y * v.y;
        if (len2 == 0) continue;
        const Vec2 w = tvec(pts[i], q);
        double t = (w.x * v.x + w.y * v.y) / len2;
        const bool interior = t > -1e-9 && t < 1 + 1e-9;
        t = std::max(0.0, std::min(1.0, t));
        const Vec2 d{w.x - t * v.x, w.y - t * v.y};
        const double dist = norm(d);
        if (dist < best.dist) {
            best.dist = dist;
            best.side = v.x * w.y - v.y * w.x > 0 ? 1.0 : -1.0;
            best.arc = arcs[i] + t * std::sqrt(len2);
            best.interior = interior;
        }
    }
    return best;
}

std::vector<double> arc_table(const std::vector<MapPoint>& pts) {
    std::vector<double> arcs(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        arcs[i] = arcs[i - 1] + norm(tvec(pts[i - 1], pts[i]));
    return arcs;
}

} // namespace

double distance_to_polylines(MapPoint p, const std::vector<Polyline>& lines) {
    double best = 1e30;
    for (const auto& line : lines) {
        for (std::size_t i = 0; i + 1 < line.pts.size(); ++i) {
            const Vec2 v = tvec(line.pts[i], line.pts[i + 1]);
            const double len2 = v.x * v.x + v.y * v.y;
            const Vec2 w = tvec(line.pts[i], p);
            double t = len2 == 0 ? 0.0 : (w.x * v.x + w.y * v.y) / len2;
            t = std::max(0.0, std::min(1.0, t));
            best = std::min(best, norm({w.x - t * v.x, w.y - t * v.y}));
        }
    }
    return best;
}

double distance_to_curve(MapPoint p, const ManifoldCurve& curve) {
    const auto arcs = arc_table(curve.vertices);
    return project_to_chain(p, curve.vertices, arcs).dist;
}

double arc_position(MapPoint p, const ManifoldCurve& curve) {
    const auto arcs = arc_table(curve.vertices);
    return project_to_chain(p, curve.vertices, arcs).arc;
}

ManifoldCurve grow_unstable(const FixedPointRecord& saddle, int branch,
                            const EntrainmentMap& map, MapPoint sink,
                            const GrowParams& gp) {
    ManifoldCurve curve;
    curve.saddle_label = saddle.label;
    curve.saddle = saddle.location;
    curve.kind = ManifoldKind::unstable;
    curve.branch = branch;

    const Vec2 v = saddle_eigvec(saddle, /*unstable=*/true);
    MapPoint p0 = offset(saddle.location, v, branch * gp.eps0);
    curve.vertices.push_back(p0);

    // source/image meshes over the current fundamental domain
    std::vector<MapPoint> src{p0, map.step(p0).next};
    curve.vertices.push_back(src[1]);
    curve.termination = Termination::max_points;

    auto done = [&](MapPoint q) { return torus_dist(q, sink) < gp.stop_radius; };
    if (done(p0) || done(src[1])) {
        curve.termination = Termination::reached_sink;
        curve.vertices.push_back(sink);
        build_segments(curve, gp);
        return curve;
    }

    int total = static_cast<int>(curve.vertices.size());
    for (int gen = 0; gen < 200 && total < gp.max_points; ++gen) {
        // map the source mesh forward
        std::vector<MapPoint> nsrc = src;
        std::vector<MapPoint> img(nsrc.size());
        for (std::size_t i = 0; i < nsrc.size(); ++i) img[i] = map.step(nsrc[i]).next;

        // refine until spacing and curvature constraints hold
        bool stalled = false;
        for (std::size_t i = 0; i + 1 < img.size() && !stalled;) {
            const double gap = torus_dist(img[i], img[i + 1]);
            bool bad = gap > gp.d_max;
            if (!bad && i >= 1) {
                const double ang = turn_angle(img[i - 1], img[i], img[i + 1]);
                bad = ang > gp.max_turn && gap > gp.d_min;
            }
            if (!bad) {
                ++i;
                continue;
            }
            const double sgap = torus_dist(nsrc[i], nsrc[i + 1]);
            if (sgap < 1e-9) {
                if (gap > 2 * gp.d_max) {
                    stalled = true;
                    break;
                }
                ++i;
                continue;
            }
            const Vec2 half = tvec(nsrc[i], nsrc[i + 1]);
            const MapPoint mid = offset(nsrc[i], half, 0.5);
            nsrc.insert(nsrc.begin() + static_cast<long>(i) + 1, mid);
            img.insert(img.begin() + static_cast<long>(i) + 1, map.step(mid).next);
            if (static_cast<int>(img.size()) + total > gp.max_points + 64) {
                stalled = true;
                break;
            }
            if (i > 0) --i; // recheck the previous corner
        }
        if (stalled) {
            curve.termination = Termination::stalled;
            break;
        }

        bool all_inside = true;
        for (std::size_t i = 1; i < img.size(); ++i) { // img[0] == last vertex
            curve.vertices.push_back(img[i]);
            ++total;
            if (!done(img[i])) all_inside = false;
        }
        if (all_inside) {
            curve.termination = Termination::reached_sink;
            break;
        }
        src = std::move(img);
    }

    if (curve.termination == Termination::reached_sink) {
        // follow the last point the rest of the way in, then close at the sink
        MapPoint tail = curve.vertices.back();
        for (int i = 0; i < 25 && torus_dist(tail, sink) > 0.05; ++i) {
            tail = map.step(tail).next;
            curve.vertices.push_back(tail);
        }
        curve.vertices.push_back(sink);
    }
    build_segments(curve, gp);
    return curve;
}

ManifoldCurve grow_stable_sc(const FixedPointRecord& saddle, int branch,
                             const EntrainmentMap& map, MapPoint source,
                             const GrowParams& gp, const ManifoldCurve* other) {
    ManifoldCurve curve;
    curve.saddle_label = saddle.label;
    curve.saddle = saddle.location;
    curve.kind = ManifoldKind::stable;
    curve.branch = branch;

    const Vec2 v = saddle_eigvec(saddle, /*unstable=*/false);
    // landing chain: [reversed other branch,] saddle, own seed
    std::vector<MapPoint> pts;
    std::size_t own_start = 0;
    if (other && other->vertices.size() > 1) {
        for (auto it = other->vertices.rbegin(); it != other->vertices.rend(); ++it)
            if (std::abs(wrap_diff(it->x - saddle.location.x)) > 1e-12 ||
                std::abs(wrap_diff(it->y - saddle.location.y)) > 1e-12)
                pts.push_back(*it);
        own_start = pts.size();
    }
    pts.push_back(saddle.location);
    pts.push_back(offset(saddle.location, v, branch * gp.eps0));
    std::vector<double> arcs = arc_table(pts);

    curve.termination = Termination::max_points;
    double radius = gp.d_min;
    double prev_land = arcs[own_start]; // start landings near the saddle
    const double phi_max = 1.4; // ~80 degrees around the continuation direction

    while (static_cast<int>(pts.size()) - static_cast<int>(own_start) < gp.max_points) {
        const MapPoint w = pts.back();
        if (torus_dist(w, source) < gp.stop_radius) {
            curve.termination = Termination::reached_source;
            break;
        }
        const MapPoint wp = pts[pts.size() - 2];
        Vec2 u = tvec(wp, w);
        const double un = norm(u);
        if (un == 0) {
            curve.termination = Termination::stalled;
            break;
        }
        u = {u.x / un, u.y / un};
        const Vec2 uperp{-u.y, u.x};

        auto candidate = [&](double phi) {
            const Vec2 dir{std::cos(phi) * u.x + std::sin(phi) * uperp.x,
                           std::cos(phi) * u.y + std::sin(phi) * uperp.y};
            return offset(w, dir, radius);
        };
        const double s_w = arcs.back();
        auto probe = [&](double phi, CurveHit& hit) {
            const MapPoint z = candidate(phi);
            const MapPoint fz = map.step(z).next;
            hit = project_to_chain(fz, pts, arcs, prev_land, 3.0);
            // must land strictly inside the accepted curve, nearer the saddle
            return hit.interior && hit.arc < s_w - 1e-6 && hit.dist < 5 * gp.d_max;
        };

        // bracket a side change of the image across the curve
        const int nphi = 17;
        double found_phi = 0;
        bool found = false;
        CurveHit prev_hit;
        bool prev_ok = probe(-phi_max, prev_hit);
        double prev_phi = -phi_max;
        for (int k = 1; k < nphi; ++k) {
            const double phi = -phi_max + 2 * phi_max * k / (nphi - 1);
            CurveHit hit;
            const bool ok = probe(phi, hit);
            if (ok && prev_ok && hit.side * prev_hit.side < 0) {
                // bisect the side change
                double lo = prev_phi, hi = phi;
                CurveHit lo_hit = prev_hit, mid_hit;
                for (int it = 0; it < 50; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (!probe(mid, mid_hit)) break;
                    if (mid_hit.dist < gp.land_tol * 0.5) {
                        lo = hi = mid;
                        break;
                    }
                    if (mid_hit.side * lo_hit.side > 0) {
                        lo = mid;
                        lo_hit = mid_hit;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo < 1e-9) break;
                }
                const double phi_star = 0.5 * (lo + hi);
                CurveHit final_hit;
                if (probe(phi_star, final_hit) && final_hit.dist <= gp.land_tol) {
                    const MapPoint z = candidate(phi_star);
                    if (turn_angle(wp, w, z) <= gp.max_turn) {
                        found = true;
                        found_phi = phi_star;
                        prev_land = final_hit.arc;
                        break;
                    }
                }
            }
            prev_ok = ok;
            prev_hit = hit;
            prev_phi = phi;
        }

        if (!found) {
            radius *= 0.5;
            if (radius < 1e-4) {
                curve.termination = Termination::stalled;
                break;
            }
            continue;
        }

        const MapPoint z = candidate(found_phi);
        pts.push_back(z);
        arcs.push_back(arcs.back() + radius);
        // radius adaptation: ride straight stretches, slow down in bends
        if (std::abs(found_phi) < 0.5 * gp.max_turn) radius = std::min(radius * 1.5, gp.d_max);
        else if (std::abs(found_phi) > 0.9 * gp.max_turn)
            radius = std::max(radius * 0.6, gp.d_min * 0.1);
    }

    if (curve.termination == Termination::reached_source) pts.push_back(source);
    curve.vertices.assign(pts.begin() + static_cast<long>(own_start), pts.end());
    build_segments(curve, gp);
    return curve;
}

std::array<ManifoldCurve, 2> grow_stable_pair(const FixedPointRecord& saddle,
                                              const EntrainmentMap& map, MapPoint source,
                                              const GrowParams& gp) {
    ManifoldCurve minus = grow_stable_sc(saddle, -1, map, source, gp);
    ManifoldCurve plus = grow_stable_sc(saddle, +1, map, source, gp, &minus);
    if (minus.termination == Termination::stalled) {
        ManifoldCurve retry = grow_stable_sc(saddle, -1, map, source, gp, &plus);
        if (retry.vertices.size() > minus.vertices.size()) minus = std::move(retry);
    }
    return {std::move(plus), std::move(minus)};
}

void write_manifold_csv(const ManifoldCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    out << "segment_id,x,y\n";
    char buf[96];
    for (std::size_t si = 0; si < curve.segments.size(); ++si)
        for (const auto& p : curve.segments[si].pts) {
            std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", si, p.x, p.y);
            out << buf;
        }
}

} // namespace cnt
