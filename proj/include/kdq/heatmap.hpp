#pragma once

#include <string>
#include <vector>

namespace kdq {

struct HeatmapSpec {
    std::string title;
    std::string x_label = "h1";
    std::string y_label = "h0";
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int nx = 0;
    int ny = 0;
    // values[iy * nx + ix], iy = 0 is y_min (drawn at the bottom). NaN cells are grey.
    std::vector<double> values;
    // Symmetric blue-white-red limits when true, white-to-red from 0 otherwise.
    bool diverging = true;
};

// Throws Error(IOError) if the file cannot be written.
void write_heatmap_png(const HeatmapSpec& spec, const std::string& path);

} // namespace kdq
