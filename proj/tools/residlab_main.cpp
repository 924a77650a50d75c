#include <CLI11.hpp>

#include <iostream>

#include "residlab/commands.hpp"
#include "residlab/errors.hpp"

using namespace residlab;

int main(int argc, char** argv) {
    CLI::App app{"residlab: spectral 2D vorticity runs, smoothing-filter residual tracking,\n"
                 "and growth-rate analysis"};
    app.require_subcommand(1);

    std::string config_path;
    CliOptions opt;
    std::string output_dir, force_file, measure_spectrum, input;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--output-dir", output_dir, "override output directory (also $RESIDLAB_OUTPUT_DIR)");
        sub->add_option("--threads", opt.threads, "worker threads (default: one per member)");
        sub->add_flag("--dry-run", opt.dry_run, "report the work without writing anything");
    };

    CLI::App* force = app.add_subcommand("force", "generate the seeded body force file");
    add_common(force);

    CLI::App* spinup = app.add_subcommand("spinup", "synthesize members and spin them up to the attractor");
    add_common(spinup);
    spinup->add_flag("--from-zero", opt.from_zero, "start members from the zero field instead of synthesis");
    spinup->add_option("--measure-spectrum", measure_spectrum,
                       "write the time-averaged energy spectrum of member 0 to this CSV");
    spinup->add_option("--spectrum-t0", opt.spectrum_t0,
                       "averaging window start for --measure-spectrum (default spinup_time/4)");
    spinup->add_option("--force-file", force_file, "force file path (default <output>/force.bin)");

    CLI::App* residual = app.add_subcommand("residual", "accumulate residuals along the exact trajectories");
    add_common(residual);
    residual->add_option("--stop-after", opt.stop_after,
                         "stop at this run time and write resume snapshots (sample-aligned)");
    residual->add_flag("--resume", opt.resume, "continue from resume snapshots, appending to erms.csv");
    residual->add_option("--force-file", force_file, "force file path (default <output>/force.bin)");

    CLI::App* analyze = app.add_subcommand("analyze", "fit growth laws to an E_rms table");
    add_common(analyze);
    analyze->add_option("--input", input, "E_rms CSV to analyze (default <output>/erms.csv)");
    analyze->add_option("--t-max", opt.t_max, "fit horizon T (default: last sample time)");
    analyze->add_option("--window-lo", opt.window_lo, "log-log slope window start (default T/2)");
    analyze->add_option("--window-hi", opt.window_hi, "log-log slope window end (default T)");
    analyze->add_option("--fit-lo", opt.fit_lo, "growth-fit window start (default 0)");
    analyze->add_option("--fit-hi", opt.fit_hi, "growth-fit window end (default T)");

    CLI::App* filters = app.add_subcommand("filters", "emit filter symbol curves for the configured lists");
    add_common(filters);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        opt.output_dir_override = output_dir;
        opt.force_file = force_file;
        opt.measure_spectrum = measure_spectrum;
        opt.input = input;
        const RunConfig cfg = RunConfig::load(config_path);
        if (force->parsed()) return cmd_force(cfg, opt);
        if (spinup->parsed()) return cmd_spinup(cfg, opt);
        if (residual->parsed()) return cmd_residual(cfg, opt);
        if (analyze->parsed()) return cmd_analyze(cfg, opt);
        if (filters->parsed()) return cmd_filters(cfg, opt);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BlowUpError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
