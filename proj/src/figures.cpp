#include "nwinterp/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nwinterp/datagen.hpp"
#include "nwinterp/errors.hpp"
#include "nwinterp/estimator.hpp"

namespace nwinterp {

FigureSpec default_figure_spec(const std::string& figure_id) {
    FigureSpec spec;
    spec.figure_id = figure_id;
    const std::vector<double> compact_h = {0.05, 0.1, 0.2};
    const std::vector<double> gaussian_h = {0.02, 0.05, 0.1};
    if (figure_id == "interp-singular") {
        spec.kernel = KernelSpec::singular_indicator(0.49);
        spec.h_list = compact_h;
    } else if (figure_id == "interp-truncpoly") {
        spec.kernel = KernelSpec::singular_trunc_poly(0.49);
        spec.h_list = compact_h;
    } else if (figure_id == "epanechnikov") {
        spec.kernel = KernelSpec::epanechnikov();
        spec.h_list = compact_h;
    } else if (figure_id == "gaussian") {
        spec.kernel = KernelSpec::gaussian();
        spec.h_list = gaussian_h;
    } else if (figure_id == "binary-truncpoly") {
        spec.kernel = KernelSpec::singular_trunc_poly(0.49);
        spec.h_list = compact_h;
        spec.binary = true;
    } else if (figure_id == "binary-gaussian") {
        spec.kernel = KernelSpec::gaussian();
        spec.h_list = gaussian_h;
        spec.binary = true;
    } else {
        throw InvalidParams("unknown figure id: " + figure_id);
    }
    return spec;
}

FigureData emit_interpolation_curves(const FigureSpec& spec) {
    if (spec.h_list.empty()) throw InvalidParams("h_list must be non-empty");
    if (spec.grid_resolution < 2) throw InvalidParams("grid_resolution must be >= 2");

    const Scenario scenario =
        spec.binary ? make_scenario("binary-sine", 1)
                    : make_scenario("smooth-sine", 1, {{"sigma", 0.2}});

    FigureData fig;
    fig.spec = spec;
    fig.data = sample_dataset(scenario, spec.n, spec.seed);

    for (double h : spec.h_list) {
        FittedInterpolator model = fit(fig.data, spec.kernel, h);
        for (int g = 0; g < spec.grid_resolution; ++g) {
            const double x = static_cast<double>(g) / (spec.grid_resolution - 1);
            fig.rows.push_back({h, x, model.predict(std::span{&x, 1}).value});
        }
        for (std::size_t i = 0; i < fig.data.size(); ++i) {
            const double x = fig.data.points[i];
            fig.rows.push_back({h, x, model.predict(std::span{&x, 1}).value});
        }
    }
    return fig;
}

void write_figure_csv(const FigureData& fig, const std::string& curves_path,
                      const std::string& points_path) {
    std::ofstream curves(curves_path);
    if (!curves) throw CsvParseError("cannot open for writing: " + curves_path);
    curves.precision(17);
    curves << "h,x,fn\n";
    for (const auto& row : fig.rows) {
        curves << row.h << "," << row.x << "," << row.fn << "\n";
    }
    std::ofstream points(points_path);
    if (!points) throw CsvParseError("cannot open for writing: " + points_path);
    points.precision(17);
    points << "x,y\n";
    for (std::size_t i = 0; i < fig.data.size(); ++i) {
        points << fig.data.points[i] << "," << fig.data.responses[i] << "\n";
    }
}

namespace {

struct Panel {
    double x_px, y_px, w_px, h_px;
    double y_lo, y_hi;

    double map_x(double x) const { return x_px + x * w_px; }
    double map_y(double y) const {
        const double t = (std::clamp(y, y_lo, y_hi) - y_lo) / (y_hi - y_lo);
        return y_px + h_px * (1.0 - t);
    }
};

}  // namespace

void write_figure_svg(const FigureData& fig, const std::string& path) {
    const double width = 640.0, panel_h = 220.0, margin = 32.0;
    const std::size_t panels = fig.spec.h_list.size();
    const double height = margin + panels * (panel_h + margin);

    double y_lo = 0.0, y_hi = 0.0;
    for (double y : fig.data.responses) {
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    const double pad = 0.15 * std::max(y_hi - y_lo, 1e-9);
    y_lo -= pad;
    y_hi += pad;

    std::ostringstream svg;
    svg.precision(8);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";

    for (std::size_t p = 0; p < panels; ++p) {
        const double h = fig.spec.h_list[p];
        Panel panel{margin, margin + p * (panel_h + margin), width - 2.0 * margin,
                    panel_h, y_lo, y_hi};
        svg << "<rect x=\"" << panel.x_px << "\" y=\"" << panel.y_px
            << "\" width=\"" << panel.w_px << "\" height=\"" << panel.h_px
            << "\" fill=\"none\" stroke=\"#888\"/>\n";
        svg << "<text x=\"" << panel.x_px + 4 << "\" y=\"" << panel.y_px + 14
            << "\" font-size=\"12\">h = " << h << "</text>\n";

        // Curve sampled at grid points only, sorted in x.
        std::vector<std::pair<double, double>> curve;
        for (const auto& row : fig.rows) {
            if (row.h == h) curve.emplace_back(row.x, row.fn);
        }
        std::sort(curve.begin(), curve.end());
        svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
        for (const auto& [x, y] : curve) {
            svg << panel.map_x(x) << "," << panel.map_y(y) << " ";
        }
        svg << "\"/>\n";

        for (std::size_t i = 0; i < fig.data.size(); ++i) {
            svg << "<circle cx=\"" << panel.map_x(fig.data.points[i]) << "\" cy=\""
                << panel.map_y(fig.data.responses[i])
                << "\" r=\"2.5\" fill=\"#d62728\"/>\n";
        }
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw CsvParseError("cannot open for writing: " + path);
    out << svg.str();
}

}  // namespace nwinterp
