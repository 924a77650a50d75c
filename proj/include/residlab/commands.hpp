#pragma once

#include <filesystem>
#include <string>

#include "residlab/config.hpp"

namespace residlab {

/// Options shared by the CLI subcommands; unset paths/negative values mean
/// "use the default derived from the config".
struct CliOptions {
    std::filesystem::path output_dir_override;  // --output-dir, else $RESIDLAB_OUTPUT_DIR
    int threads = 0;                            // 0: one worker per member up to hardware
    bool dry_run = false;

    // spinup
    bool from_zero = false;
    std::filesystem::path measure_spectrum;
    double spectrum_t0 = -1.0;

    // residual
    double stop_after = -1.0;
    bool resume = false;
    std::filesystem::path force_file;

    // analyze
    std::filesystem::path input;
    double t_max = -1.0;
    double window_lo = -1.0;
    double window_hi = -1.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
};

std::filesystem::path effective_output_dir(const RunConfig& cfg, const CliOptions& opt);

int cmd_force(const RunConfig& cfg, const CliOptions& opt);
int cmd_spinup(const RunConfig& cfg, const CliOptions& opt);
int cmd_residual(const RunConfig& cfg, const CliOptions& opt);
int cmd_analyze(const RunConfig& cfg, const CliOptions& opt);
int cmd_filters(const RunConfig& cfg, const CliOptions& opt);

}  // namespace residlab
