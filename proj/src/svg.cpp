#include "cnt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cnt/io.hpp"

namespace cnt {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

SvgCanvas::SvgCanvas(double x_lo, double x_hi, double y_lo, double y_hi, int width,
                     int height)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), w_(width), h_(height) {}

double SvgCanvas::px(double x) const {
    return ml_ + (x - x_lo_) / (x_hi_ - x_lo_) * (w_ - ml_ - mr_);
}

double SvgCanvas::py(double y) const {
    return h_ - mb_ - (y - y_lo_) / (y_hi_ - y_lo_) * (h_ - mt_ - mb_);
}

std::string SvgCanvas::color_of(double v01) {
    v01 = std::max(0.0, std::min(1.0, v01));
    // viridis-like stops
    static const double stops[5][3] = {{68, 1, 84},
                                       {59, 82, 139},
                                       {33, 145, 140},
                                       {94, 201, 98},
                                       {253, 231, 37}};
    const double t = v01 * 4;
    const int k = std::min(3, static_cast<int>(t));
    const double f = t - k;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

void SvgCanvas::heat_cell(double x, double y, double dx, double dy, double v01) {
    const double x0 = px(x - dx / 2), x1 = px(x + dx / 2);
    const double y0 = py(y + dy / 2), y1 = py(y - dy / 2);
    body_ += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" +
             fmt(x1 - x0 + 0.5) + "\" height=\"" + fmt(y1 - y0 + 0.5) + "\" fill=\"" +
             color_of(v01) + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::array<double, 2>>& pts,
                         const std::string& color, double width_px, bool dashed) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             fmt(width_px) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"6 4\"";
    body_ += " points=\"";
    for (const auto& p : pts) body_ += fmt(px(p[0])) + "," + fmt(py(p[1])) + " ";
    body_ += "\"/>\n";
}

void SvgCanvas::line(double x0, double y0, double x1, double y1, const std::string& color,
                     double width_px, bool dashed) {
    body_ += "<line x1=\"" + fmt(px(x0)) + "\" y1=\"" + fmt(py(y0)) + "\" x2=\"" +
             fmt(px(x1)) + "\" y2=\"" + fmt(py(y1)) + "\" stroke=\"" + color +
             "\" stroke-width=\"" + fmt(width_px) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"5 4\"";
    body_ += "/>\n";
}

void SvgCanvas::circle(double x, double y, double r_px, const std::string& fill,
                       const std::string& stroke) {
    body_ += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" +
             fmt(r_px) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
             "\" stroke-width=\"1.4\"/>\n";
}

void SvgCanvas::marker_star(double x, double y, double r_px, const std::string& color) {
    const double cx = px(x), cy = py(y);
    for (int k = 0; k < 3; ++k) {
        const double a = k * 3.14159265 / 3;
        body_ += "<line x1=\"" + fmt(cx - r_px * std::cos(a)) + "\" y1=\"" +
                 fmt(cy - r_px * std::sin(a)) + "\" x2=\"" + fmt(cx + r_px * std::cos(a)) +
                 "\" y2=\"" + fmt(cy + r_px * std::sin(a)) + "\" stroke=\"" + color +
                 "\" stroke-width=\"1.6\"/>\n";
    }
}

void SvgCanvas::arrow(double x0, double y0, double x1, double y1, const std::string& color,
                      double width_px) {
    const double ax = px(x0), ay = py(y0), bx = px(x1), by = py(y1);
    body_ += "<line x1=\"" + fmt(ax) + "\" y1=\"" + fmt(ay) + "\" x2=\"" + fmt(bx) +
             "\" y2=\"" + fmt(by) + "\" stroke=\"" + color + "\" stroke-width=\"" +
             fmt(width_px) + "\"/>\n";
    const double dx = bx - ax, dy = by - ay;
    const double len = std::hypot(dx, dy);
    if (len < 1e-9) return;
    const double ux = dx / len, uy = dy / len;
    const double hx = bx - 5 * ux, hy = by - 5 * uy;
    body_ += "<polygon fill=\"" + color + "\" points=\"" + fmt(bx) + "," + fmt(by) + " " +
             fmt(hx - 2.5 * uy) + "," + fmt(hy + 2.5 * ux) + " " + fmt(hx + 2.5 * uy) +
             "," + fmt(hy - 2.5 * ux) + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& s, int px_size,
                     const std::string& anchor, const std::string& color) {
    body_ += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y)) + "\" font-size=\"" +
             std::to_string(px_size) + "\" text-anchor=\"" + anchor + "\" fill=\"" + color +
             "\" font-family=\"sans-serif\">" + s + "</text>\n";
}

void SvgCanvas::axes(const std::string& x_label, const std::string& y_label,
                     const std::string& title, int n_ticks) {
    std::string s;
    s += "<rect x=\"" + fmt(ml_) + "\" y=\"" + fmt(mt_) + "\" width=\"" +
         fmt(w_ - ml_ - mr_) + "\" height=\"" + fmt(h_ - mt_ - mb_) +
         "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    for (int i = 0; i < n_ticks; ++i) {
        const double fx = x_lo_ + (x_hi_ - x_lo_) * i / (n_ticks - 1);
        const double fy = y_lo_ + (y_hi_ - y_lo_) * i / (n_ticks - 1);
        s += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(h_ - mb_) + "\" x2=\"" +
             fmt(px(fx)) + "\" y2=\"" + fmt(h_ - mb_ + 5) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(h_ - mb_ + 20) +
             "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
             fmt_tick(fx) + "</text>\n";
        s += "<line x1=\"" + fmt(ml_ - 5) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" +
             fmt(ml_) + "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + fmt(ml_ - 9) + "\" y=\"" + fmt(py(fy) + 4) +
             "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" +
             fmt_tick(fy) + "</text>\n";
    }
    s += "<text x=\"" + fmt((ml_ + w_ - mr_) / 2.0) + "\" y=\"" + fmt(h_ - 14) +
         "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\">" + x_label +
         "</text>\n";
    s += "<text x=\"18\" y=\"" + fmt((mt_ + h_ - mb_) / 2.0) +
         "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 " +
         fmt((mt_ + h_ - mb_) / 2.0) + ")\">" + y_label + "</text>\n";
    s += "<text x=\"" + fmt((ml_ + w_ - mr_) / 2.0) + "\" y=\"26\" font-size=\"15\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">" +
         title + "</text>\n";
    body_ = s + body_;
}

void SvgCanvas::colorbar(double v_lo, double v_hi, const std::string& label) {
    const int x0 = w_ - mr_ + 18, bw = 16;
    const int y0 = mt_, y1 = h_ - mb_;
    for (int y = y0; y < y1; ++y) {
        const double v = 1.0 - static_cast<double>(y - y0) / (y1 - y0);
        body_ += "<rect x=\"" + std::to_string(x0) + "\" y=\"" + std::to_string(y) +
                 "\" width=\"" + std::to_string(bw) + "\" height=\"1.5\" fill=\"" +
                 color_of(v) + "\"/>\n";
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v_hi);
    body_ += "<text x=\"" + std::to_string(x0 + bw + 4) + "\" y=\"" + std::to_string(y0 + 10) +
             "\" font-size=\"11\" font-family=\"sans-serif\">" + buf + "</text>\n";
    std::snprintf(buf, sizeof buf, "%g", v_lo);
    body_ += "<text x=\"" + std::to_string(x0 + bw + 4) + "\" y=\"" + std::to_string(y1) +
             "\" font-size=\"11\" font-family=\"sans-serif\">" + buf + "</text>\n";
    body_ += "<text x=\"" + std::to_string(x0 + bw / 2) + "\" y=\"" + std::to_string(y0 - 8) +
             "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
             label + "</text>\n";
}

void SvgCanvas::write(const std::string& path) const {
    std::string doc = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(w_) + "\" height=\"" + std::to_string(h_) +
                      "\" viewBox=\"0 0 " + std::to_string(w_) + " " + std::to_string(h_) +
                      "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ +
                      "</svg>\n";
    write_text(path, doc);
}

} // namespace cnt
