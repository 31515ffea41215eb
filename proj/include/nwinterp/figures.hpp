#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nwinterp/dataset.hpp"
#include "nwinterp/kernels.hpp"

namespace nwinterp {

// One-dimensional interpolation demo: a seeded dataset fitted at several
// bandwidths, each curve evaluated on a uniform grid plus the exact data
// locations.
struct FigureSpec {
    std::string figure_id;  // interp-singular, interp-truncpoly, epanechnikov,
                            // gaussian, binary-truncpoly, binary-gaussian
    KernelSpec kernel;
    std::vector<double> h_list;
    std::size_t n = 20;
    std::uint64_t seed = 7;
    int grid_resolution = 512;
    bool binary = false;  // responses are +-1 labels
};

struct CurveRow {
    double h;
    double x;
    double fn;
};

struct FigureData {
    FigureSpec spec;
    Dataset data;                // the demo dataset (d = 1)
    std::vector<CurveRow> rows;  // h_list.size() * (grid + n) rows
};

// Defaults per figure id (kernel, h list, binary flag). Overrides with
// non-empty h_list / nonzero fields win.
FigureSpec default_figure_spec(const std::string& figure_id);

FigureData emit_interpolation_curves(const FigureSpec& spec);

// curves CSV: header h,x,fn; points CSV: header x,y.
void write_figure_csv(const FigureData& fig, const std::string& curves_path,
                      const std::string& points_path);

// Minimal multi-panel SVG (one panel per h); curves clipped to the panel's
// y-range.
void write_figure_svg(const FigureData& fig, const std::string& path);

}  // namespace nwinterp
