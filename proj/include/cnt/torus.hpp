#pragma once

#include <cmath>

namespace cnt {

inline constexpr double kDayHours = 24.0;

// Phase coordinate on the circle (0, 24].
inline double wrap_phase(double v) {
    double w = std::fmod(v, kDayHours);
    if (w <= 0.0) w += kDayHours;
    return w;
}

// Difference of two phases, wrapped to (-12, 12].
inline double wrap_diff(double d) {
    return d - kDayHours * std::ceil(d / kDayHours - 0.5);
}

inline double torus_dist1(double a, double b) {
    return std::abs(wrap_diff(a - b));
}

inline double torus_dist2(double ax, double ay, double bx, double by) {
    const double dx = wrap_diff(ax - bx);
    const double dy = wrap_diff(ay - by);
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace cnt
