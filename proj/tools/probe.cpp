#include <cmath>
#include <cstdio>
#include <random>
#include "cnt/analysis.hpp"
#include "cnt/maps.hpp"
#include "cnt/params.hpp"
#include "cnt/torus.hpp"
using namespace cnt;

int main() {
    const ModelParams p = canonical_params();
    auto geo = make_o1_geometry(p);

    // (b) alpha_c sensitivity to the section center
    for (double c : {0.1289, 0.132, 0.135, 0.140}) {
        SectionSpec s = o2_section_canonical();
        s.center = c;
        auto r = saddle_node_scan(ScanParam::alpha1, 1.4, 2.5, p, s, geo);
        std::printf("center=%.4f -> alpha_c=%.4f\n", c, r.critical);
    }

    // (c) semi: hunt distinct fixed points near the degenerate source
    {
        const ModelParams ps = semi_hierarchical_params();
        auto geos = make_o1_geometry(ps);
        const EntrainmentMap ms(ps, o2_section_semi(), geos);
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        std::vector<MapPoint> found;
        auto newton = [&](MapPoint q) {
            for (int it = 0; it < 60; ++it) {
                auto st = ms.step(q);
                const double f0 = wrap_diff(st.next.x - q.x);
                const double f1 = wrap_diff(st.next.y - q.y);
                if (std::abs(f0) < 1e-8 && std::abs(f1) < 1e-8) return std::pair{q, true};
                const double fd = 0.02;
                auto sxp = ms.step({wrap_phase(q.x + fd), q.y});
                auto sxm = ms.step({wrap_phase(q.x - fd), q.y});
                auto syp = ms.step({q.x, wrap_phase(q.y + fd)});
                auto sym = ms.step({q.x, wrap_phase(q.y - fd)});
                const double a = wrap_diff(sxp.next.x - sxm.next.x) / (2 * fd) - 1;
                const double b = wrap_diff(syp.next.x - sym.next.x) / (2 * fd);
                const double cc = wrap_diff(sxp.next.y - sxm.next.y) / (2 * fd);
                const double d = wrap_diff(syp.next.y - sym.next.y) / (2 * fd) - 1;
                const double det = a * d - b * cc;
                if (std::abs(det) < 1e-13) return std::pair{q, false};
                double dx = (-f0 * d + f1 * b) / det;
                double dy = (-a * f1 + cc * f0) / det;
                const double n = std::hypot(dx, dy);
                if (n > 1.0) { dx /= n; dy /= n; }
                q = {wrap_phase(q.x + dx), wrap_phase(q.y + dy)};
            }
            return std::pair{q, false};
        };
        for (int k = 0; k < 60; ++k) {
            MapPoint seed{wrap_phase(5.84 + u(rng)), wrap_phase(15.86 + u(rng))};
            auto [q, ok] = newton(seed);
            if (!ok) continue;
            bool dup = false;
            for (auto& f : found)
                if (torus_dist(f, q) < 0.05) dup = true;
            if (!dup) {
                found.push_back(q);
                auto rec = classify_point(ms, q, 0.02);
                std::printf("semi fp near source: (%.5f,%.5f) |l|={%.4f,%.4f} re={%.4f,%.4f}\n",
                            q.x, q.y, std::abs(rec.eigenvalues[0]), std::abs(rec.eigenvalues[1]),
                            rec.eigenvalues[0].real(), rec.eigenvalues[1].real());
            }
        }
        // also try the actual-crossing center
        SectionSpec s2 = o2_section_semi();
        s2.center = 0.1424;
        const EntrainmentMap ms2(ps, s2, geos);
        auto fps2 = find_fixed_points(ms2, 48);
        std::printf("semi (center=0.1424) fixed points:\n");
        for (const auto& r : fps2)
            std::printf("  %c (%.4f,%.4f) stab=%d |l|={%.3f,%.3f}\n", r.label, r.location.x,
                        r.location.y, (int)r.stability, std::abs(r.eigenvalues[0]),
                        std::abs(r.eigenvalues[1]));
    }

    // (d) canonical alpha variants keep 4 fixed points?
    for (double a : {1.52, 2.5}) {
        ModelParams pa = p;
        pa.alpha1 = a;
        const EntrainmentMap ma(pa, o2_section_canonical(), geo);
        auto fps = find_fixed_points(ma, 48);
        std::printf("alpha=%.2f: %zu fps:", a, fps.size());
        for (const auto& r : fps)
            std::printf(" %c(%.2f,%.2f)s%d", r.label, r.location.x, r.location.y,
                        (int)r.stability);
        std::printf("\n");
    }
    return 0;
}
