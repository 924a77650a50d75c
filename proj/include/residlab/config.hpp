#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "residlab/ensemble.hpp"
#include "residlab/filters.hpp"
#include "residlab/solver.hpp"

namespace residlab {

/// Flat key=value run configuration.  Keys (one per line, '#' comments):
///   nu, grid_m, kmax, dt, grashof, force_seed, ensemble_size, ensemble_seed,
///   spinup_time, run_time, sample_interval, alpha0_list, n_list,
///   spectrum_file, output_dir, c0
/// Lists are comma separated; n_list entries are nonnegative integers or
/// "inf".  Relative paths resolve against the config file's directory.
struct RunConfig {
    double nu = 0.0;
    int grid_m = 0;
    int kmax = 0;
    double dt = 0.0;
    double grashof = 0.0;
    std::uint64_t force_seed = 0;
    int ensemble_size = 1;
    std::uint64_t ensemble_seed = 0;
    double spinup_time = 0.0;
    double run_time = 0.0;
    long sample_interval = 1;
    std::vector<double> alpha0_list;
    std::vector<FilterOrder> n_list;
    std::filesystem::path spectrum_file;
    std::filesystem::path output_dir;
    double c0 = 205.0;

    static RunConfig load(const std::filesystem::path& path);
    void validate() const;

    SolverParams solver_params() const;
    /// Cross product alpha0_list x n_list, alpha0 major.
    std::vector<FilterSpec> filter_specs() const;
};

}  // namespace residlab
