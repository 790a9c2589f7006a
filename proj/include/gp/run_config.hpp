#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gp/kernel.hpp"

namespace gp {

// Parsed, validated run configuration. Unknown keys anywhere in the file
// are errors: a run is fully described by its config plus CLI flags, with
// no silently ignored sections.
struct RunConfig {
    ExponentialSumKernel kernel = ExponentialSumKernel::finite({1.0}, {0.0});
    std::optional<KernelFamily> family; // present for family-typed kernels

    unsigned n_min = 1;
    unsigned n_max = 1;
    std::size_t branches = 0; // J; defaults to M-1
    double tol_root = 1e-10;
    double integrator_tol = 1e-10;
    double pair_box_eps = 0.25;

    std::string out_dir = ".";
    enum class Format { Csv, Json } format = Format::Csv;

    // simulate section
    std::vector<double> xi;
    double t_end = 0.0;
    std::size_t grid_points = 201;
    std::vector<double> x_samples;

    // sweep section
    std::size_t sweep_j = 1;

    // CLI-level, not part of the file
    unsigned jobs = 1;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

} // namespace gp
