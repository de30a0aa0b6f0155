#pragma once

#include <array>
#include <string>
#include <vector>

namespace cnt {

// Small static SVG plotter: world-coordinate axes, heat rasters, polylines,
// markers. Enough for the figure-class outputs; no interactivity.
class SvgCanvas {
public:
    SvgCanvas(double x_lo, double x_hi, double y_lo, double y_hi,
              int width = 760, int height = 720);

    void heat_cell(double x, double y, double dx, double dy, double v01);
    void polyline(const std::vector<std::array<double, 2>>& pts,
                  const std::string& color, double width_px = 1.5, bool dashed = false);
    void line(double x0, double y0, double x1, double y1, const std::string& color,
              double width_px = 1.0, bool dashed = false);
    void circle(double x, double y, double r_px, const std::string& fill,
                const std::string& stroke = "none");
    void marker_star(double x, double y, double r_px, const std::string& color);
    void arrow(double x0, double y0, double x1, double y1, const std::string& color,
               double width_px = 1.0);
    void text(double x, double y, const std::string& s, int px = 13,
              const std::string& anchor = "middle", const std::string& color = "#222");
    void axes(const std::string& x_label, const std::string& y_label,
              const std::string& title, int n_ticks = 7);
    void colorbar(double v_lo, double v_hi, const std::string& label);

    void write(const std::string& path) const;

    // shared 5-stop colormap (dark blue -> green -> yellow)
    static std::string color_of(double v01);

private:
    double px(double x) const;
    double py(double y) const;

    double x_lo_, x_hi_, y_lo_, y_hi_;
    int w_, h_;
    int ml_ = 64, mr_ = 88, mt_ = 40, mb_ = 56; // margins
    std::string body_;
};

} // namespace cnt
