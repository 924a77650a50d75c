#include "residlab/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <thread>

#include "residlab/checkpoint.hpp"
#include "residlab/csv.hpp"
#include "residlab/ensemble.hpp"
#include "residlab/errors.hpp"
#include "residlab/stats.hpp"

namespace residlab {

namespace fs = std::filesystem;

namespace {

int worker_count(const CliOptions& opt, int members) {
    int t = opt.threads;
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    if (t <= 0) t = 1;
    return std::min(t, members);
}

fs::path member_checkpoint(const fs::path& dir, int j) {
    return dir / ("member" + std::to_string(j) + ".ckpt");
}

fs::path member_energy_csv(const fs::path& dir, int j) {
    return dir / ("energy_member" + std::to_string(j) + ".csv");
}

fs::path resume_state_path(const fs::path& dir, int j) {
    return dir / ("resume_member" + std::to_string(j) + ".ckpt");
}

fs::path resume_rho_path(const fs::path& dir, int j, std::size_t spec_index) {
    return dir / ("resume_member" + std::to_string(j) + ".rho" + std::to_string(spec_index) + ".ckpt");
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
}

// Run fn(j) for j in [0, members) on a small pool; rethrows the failure of
// the lowest member, tagging blow-ups with the member id.
void for_each_member(int members, int workers, const std::function<void(int)>& fn) {
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(members));
    if (workers <= 1) {
        for (int j = 0; j < members; ++j) {
            try {
                fn(j);
            } catch (...) {
                failures[static_cast<std::size_t>(j)] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const int j = next.fetch_add(1);
                    if (j >= members) return;
                    try {
                        fn(j);
                    } catch (...) {
                        failures[static_cast<std::size_t>(j)] = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
    }
    for (int j = 0; j < members; ++j) {
        if (!failures[static_cast<std::size_t>(j)]) continue;
        try {
            std::rethrow_exception(failures[static_cast<std::size_t>(j)]);
        } catch (const BlowUpError& e) {
            throw BlowUpError(e.step, j);
        }
    }
}

std::string erms_plot_script(const std::vector<FilterSpec>& specs) {
    std::string s;
    s += "# Ensemble RMS residual growth, log-log; reference slopes 1/2 and 1.\n";
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead left top\n";
    s += "set logscale xy\n";
    s += "set xlabel 't'\n";
    s += "set ylabel 'E_rms'\n";
    s += "plot \\\n";
    for (std::size_t i = 0; i < specs.size(); ++i)
        s += "  'erms.csv' using 1:" + std::to_string(i + 2) + " with lines, \\\n";
    s += "  0.5*x**0.5 title 'slope 1/2' dashtype 2, \\\n";
    s += "  0.05*x title 'slope 1' dashtype 3\n";
    return s;
}

}  // namespace

fs::path effective_output_dir(const RunConfig& cfg, const CliOptions& opt) {
    if (!opt.output_dir_override.empty()) return opt.output_dir_override;
    if (const char* env = std::getenv("RESIDLAB_OUTPUT_DIR"); env && *env) return fs::path(env);
    return cfg.output_dir;
}

int cmd_force(const RunConfig& cfg, const CliOptions& opt) {
    const ForcingField force = make_force(cfg.force_seed, cfg.grashof, cfg.nu, cfg.kmax);
    if (opt.dry_run) {
        std::cout << "dry run: force seed " << cfg.force_seed << ", ||f|| = " << format_double(force.fnorm)
                  << ", Grashof = " << format_double(force.grashof) << ", nothing written\n";
        return 0;
    }
    const fs::path dir = effective_output_dir(cfg, opt);
    ensure_dir(dir);
    const fs::path path = dir / "force.bin";
    write_force_file(path, force, cfg.solver_params());
    std::cout << "force: seed = " << cfg.force_seed << ", ||f||_L2 = " << format_double(force.fnorm)
              << ", Grashof = " << format_double(force.grashof) << ", wrote " << path.string() << "\n";
    return 0;
}

int cmd_spinup(const RunConfig& cfg, const CliOptions& opt) {
    const SolverParams params = cfg.solver_params();
    const long steps = steps_for_time(cfg.spinup_time, cfg.dt);
    if (opt.dry_run) {
        std::cout << "dry run: spinup " << cfg.ensemble_size << " members x " << steps << " steps (T = "
                  << format_double(cfg.spinup_time) << " @ dt = " << format_double(cfg.dt)
                  << "), nothing written\n";
        return 0;
    }
    const fs::path dir = effective_output_dir(cfg, opt);
    ensure_dir(dir);
    const fs::path force_path = opt.force_file.empty() ? dir / "force.bin" : opt.force_file;
    CheckpointMeta fmeta;
    const ForcingField force = read_force_file(force_path, fmeta);
    if (force.g.truncation() != cfg.kmax)
        throw ConfigError("force file truncation does not match the config");

    std::vector<double> spectrum;
    if (!opt.from_zero) spectrum = read_spectrum_csv(cfg.spectrum_file);

    const double spectrum_t0 = opt.spectrum_t0 >= 0.0 ? opt.spectrum_t0 : cfg.spinup_time / 4.0;
    SpectrumAccumulator spectrum_acc;
    std::vector<std::pair<double, double>> points(static_cast<std::size_t>(cfg.ensemble_size));
    std::vector<double> cfl_sup(static_cast<std::size_t>(cfg.ensemble_size), 0.0);

    for_each_member(cfg.ensemble_size, worker_count(opt, cfg.ensemble_size), [&](int j) {
        SpectralField initial = opt.from_zero
                                    ? SpectralField(cfg.kmax)
                                    : synthesize_initial(cfg.ensemble_seed, j, spectrum, cfg.kmax);
        Stepper stepper(params, force);
        TrajectoryState state{0, std::move(initial)};
        CsvTable energy;
        energy.header = {"t", "energy", "enstrophy"};
        auto record = [&](long n) {
            const auto [en, ens] = energy_enstrophy(state);
            energy.rows.push_back({static_cast<double>(n) * cfg.dt, en, ens});
            if (j == 0 && !opt.measure_spectrum.empty() &&
                static_cast<double>(n) * cfg.dt >= spectrum_t0 && n < steps)
                spectrum_acc.add(state.omega);
        };
        record(0);
        for (long n = 1; n <= steps; ++n) {
            stepper.advance(state);
            cfl_sup[static_cast<std::size_t>(j)] =
                std::max(cfl_sup[static_cast<std::size_t>(j)],
                         cfg.kmax * cfg.dt / (2.0 * std::numbers::pi) * stepper.kernel().grid_speed_linf1());
            if (n % cfg.sample_interval == 0) record(n);
        }
        write_csv(member_energy_csv(dir, j), energy);
        write_checkpoint(member_checkpoint(dir, j), state, params, cfg.ensemble_seed);
        points[static_cast<std::size_t>(j)] = energy_enstrophy(state);
    });

    CsvTable pts;
    pts.header = {"member", "energy", "enstrophy"};
    for (int j = 0; j < cfg.ensemble_size; ++j)
        pts.rows.push_back({static_cast<double>(j), points[static_cast<std::size_t>(j)].first,
                            points[static_cast<std::size_t>(j)].second});
    write_csv(dir / "points_energy_enstrophy.csv", pts);

    if (!opt.measure_spectrum.empty()) {
        const SpectrumSeries spec = spectrum_acc.finalize(spectrum_t0, cfg.spinup_time);
        write_spectrum_csv(opt.measure_spectrum, spec.shells);
        std::cout << "spectrum: averaged " << spectrum_acc.count() << " snapshots over ["
                  << format_double(spectrum_t0) << ", " << format_double(cfg.spinup_time) << "), wrote "
                  << opt.measure_spectrum.string() << "\n";
    }
    double cfl = 0.0;
    for (double c : cfl_sup) cfl = std::max(cfl, c);
    std::cout << "spinup: " << cfg.ensemble_size << " members x " << steps
              << " steps done, CFL sup = " << format_double(cfl) << ", checkpoints in " << dir.string()
              << "\n";
    return 0;
}

int cmd_residual(const RunConfig& cfg, const CliOptions& opt) {
    const SolverParams params = cfg.solver_params();
    const std::vector<FilterSpec> specs = cfg.filter_specs();
    const long total_steps = steps_for_time(cfg.run_time, cfg.dt);
    if (opt.dry_run) {
        std::cout << "dry run: residual " << cfg.ensemble_size << " members x " << total_steps
                  << " steps (T = " << format_double(cfg.run_time) << " @ dt = " << format_double(cfg.dt)
                  << "), " << specs.size() << " filter columns, sample every " << cfg.sample_interval
                  << " steps -> " << (total_steps / cfg.sample_interval + 1) << " rows, nothing written\n";
        return 0;
    }
    const fs::path dir = effective_output_dir(cfg, opt);
    ensure_dir(dir);
    const fs::path force_path = opt.force_file.empty() ? dir / "force.bin" : opt.force_file;
    CheckpointMeta fmeta;
    const ForcingField force = read_force_file(force_path, fmeta);
    if (force.g.truncation() != cfg.kmax)
        throw ConfigError("force file truncation does not match the config");

    long stop_steps = total_steps;
    if (opt.stop_after >= 0.0) {
        stop_steps = steps_for_time(opt.stop_after, cfg.dt);
        if (stop_steps % cfg.sample_interval != 0)
            throw ConfigError("--stop-after must land on a sample boundary");
        if (stop_steps > total_steps) throw ConfigError("--stop-after exceeds run_time");
    }

    const double bound = absorbing_bound(force.fnorm, cfg.nu, cfg.c0);
    std::vector<std::vector<std::vector<double>>> norms(
        static_cast<std::size_t>(cfg.ensemble_size));  // [member][spec][sample]
    std::vector<std::vector<double>> times(static_cast<std::size_t>(cfg.ensemble_size));
    std::vector<double> omega_sup(static_cast<std::size_t>(cfg.ensemble_size), 0.0);

    for_each_member(cfg.ensemble_size, worker_count(opt, cfg.ensemble_size), [&](int j) {
        TrajectoryState state;
        ResidualBatch batch(specs, cfg.kmax);
        bool emit_initial = true;
        if (opt.resume) {
            CheckpointMeta meta;
            state = read_checkpoint(resume_state_path(dir, j), meta);
            for (std::size_t s = 0; s < specs.size(); ++s) {
                const ResidualSnapshot snap = read_residual_snapshot(resume_rho_path(dir, j, s));
                if (!(snap.spec == specs[s]))
                    throw ConfigError("resume snapshot filter mismatch for member " + std::to_string(j));
                if (snap.n != state.n)
                    throw ConfigError("resume snapshot step mismatch for member " + std::to_string(j));
                batch.restore(s, snap.rho, snap.n);
            }
            emit_initial = false;
        } else {
            CheckpointMeta meta;
            state = read_checkpoint(member_checkpoint(dir, j), meta);
            if (static_cast<int>(meta.kmax) != cfg.kmax)
                throw ConfigError("checkpoint truncation does not match the config");
            state.n = 0;
        }
        Stepper stepper(params, force);
        norms[static_cast<std::size_t>(j)].assign(specs.size(), {});
        run_residual_phase(stepper, state, batch, stop_steps, cfg.sample_interval, emit_initial,
                           [&](long n, const std::vector<double>& ns, const TrajectoryState& st) {
                               times[static_cast<std::size_t>(j)].push_back(static_cast<double>(n) * cfg.dt);
                               for (std::size_t s = 0; s < ns.size(); ++s)
                                   norms[static_cast<std::size_t>(j)][s].push_back(ns[s]);
                               omega_sup[static_cast<std::size_t>(j)] =
                                   std::max(omega_sup[static_cast<std::size_t>(j)], l2_norm(st.omega));
                           });
        if (stop_steps < total_steps) {
            write_checkpoint(resume_state_path(dir, j), state, params, cfg.ensemble_seed);
            for (std::size_t s = 0; s < specs.size(); ++s)
                write_residual_snapshot(resume_rho_path(dir, j, s),
                                        ResidualSnapshot{specs[s], batch.state(s).n, batch.state(s).rho},
                                        params);
        }
    });

    // ensemble reduction in fixed member order
    const auto& t = times.front();
    for (const auto& tt : times)
        if (tt != t) throw std::logic_error("cmd_residual: members sampled at different times");
    const fs::path csv_path = dir / "erms.csv";
    std::ofstream out;
    if (opt.resume) {
        out.open(csv_path, std::ios::app);
        if (!out) throw IoError("cannot append to " + csv_path.string());
    } else {
        out.open(csv_path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + csv_path.string());
        out << "t";
        for (const auto& spec : specs) out << ",erms_" << spec.label();
        out << "\n";
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << format_double(t[i]);
        for (std::size_t s = 0; s < specs.size(); ++s) {
            double sum = 0.0;
            for (int j = 0; j < cfg.ensemble_size; ++j) sum += norms[static_cast<std::size_t>(j)][s][i];
            out << ',' << format_double(std::sqrt(sum / static_cast<double>(cfg.ensemble_size)));
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + csv_path.string());
    out.close();
    if (!opt.resume) write_text_file(dir / "plot_erms.gp", erms_plot_script(specs));

    double wsup = 0.0;
    for (double w : omega_sup) wsup = std::max(wsup, w);
    std::cout << "residual: " << cfg.ensemble_size << " members advanced to step " << stop_steps << " of "
              << total_steps << ", sup ||omega|| = " << format_double(wsup)
              << (wsup < bound ? " (inside absorbing bound " : " (OUTSIDE absorbing bound ")
              << format_double(bound) << "), wrote " << csv_path.string() << "\n";
    if (wsup >= bound)
        std::cerr << "warning: trajectory left the absorbing ball (c0 = " << format_double(cfg.c0) << ")\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg, const CliOptions& opt) {
    const fs::path dir = effective_output_dir(cfg, opt);
    const fs::path input = opt.input.empty() ? dir / "erms.csv" : opt.input;
    if (opt.dry_run) {
        std::cout << "dry run: would analyze " << input.string() << ", nothing written\n";
        return 0;
    }
    const CsvTable table = read_csv(input);
    if (table.header.empty() || table.header.front() != "t")
        throw IoError(input.string() + ": first column must be t");
    if (table.rows.empty()) throw IoError(input.string() + ": no data rows");

    const double t_last = table.rows.back()[0];
    const double T = opt.t_max > 0.0 ? opt.t_max : t_last;
    const double wlo = opt.window_lo >= 0.0 ? opt.window_lo : T / 2.0;
    const double whi = opt.window_hi > 0.0 ? opt.window_hi : T;

    CsvTable fit;
    fit.header = {"alpha0", "N", "C1", "C2", "eta"};
    CsvTable expo;
    expo.header = {"alpha0", "N", "slope", "t_lo", "t_hi"};

    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const std::string& name = table.header[c];
        // column names look like erms_a0.04_N0 / erms_a0.2_Ninf
        if (name.rfind("erms_a", 0) != 0)
            throw IoError(input.string() + ": unrecognized column '" + name + "'");
        const auto npos = name.rfind("_N");
        if (npos == std::string::npos)
            throw IoError(input.string() + ": unrecognized column '" + name + "'");
        const double alpha0 = parse_double(name.substr(6, npos - 6), input.string() + " column " + name);
        const FilterOrder order = FilterOrder::parse(name.substr(npos + 2));
        const double order_num = order.is_infinite() ? -1.0 : static_cast<double>(order.value());

        GrowthSeries series;
        series.reserve(table.rows.size());
        for (const auto& row : table.rows) series.emplace_back(row[0], row[c]);

        const FitResult f = fit_growth(series, T, opt.fit_lo, opt.fit_hi);
        fit.rows.push_back({alpha0, order_num, f.C1, f.C2, f.eta});
        double slope = std::numeric_limits<double>::quiet_NaN();
        try {
            slope = growth_exponent(series, wlo, whi);
        } catch (const std::invalid_argument&) {
            std::cerr << "note: column " << name << " has no usable log-log window, slope = nan\n";
        }
        expo.rows.push_back({alpha0, order_num, slope, wlo, whi});
    }
    ensure_dir(dir);
    write_csv(dir / "fit.csv", fit);
    write_csv(dir / "exponents.csv", expo);
    std::cout << "analyze: " << fit.rows.size() << " columns, fit horizon T = " << format_double(T)
              << ", slope window [" << format_double(wlo) << ", " << format_double(whi) << "], wrote "
              << (dir / "fit.csv").string() << " and " << (dir / "exponents.csv").string() << "\n";
    return 0;
}

int cmd_filters(const RunConfig& cfg, const CliOptions& opt) {
    const fs::path dir = effective_output_dir(cfg, opt);
    if (opt.dry_run) {
        std::cout << "dry run: would emit " << cfg.alpha0_list.size() * cfg.n_list.size()
                  << " symbol curves over |k| = 1.." << cfg.kmax << ", nothing written\n";
        return 0;
    }
    ensure_dir(dir);
    CsvTable table;
    table.header = {"k"};
    for (double a : cfg.alpha0_list)
        for (const FilterOrder& n : cfg.n_list) {
            table.header.push_back("H_" + FilterSpec{n, a}.label());
            if (!n.is_infinite())
                table.header.push_back("D_alpha" + format_double(a) + "_N" + n.to_string());
        }
    for (int k = 1; k <= cfg.kmax; ++k) {
        std::vector<double> row{static_cast<double>(k)};
        const double ksq = static_cast<double>(k) * k;
        for (double a : cfg.alpha0_list)
            for (const FilterOrder& n : cfg.n_list) {
                row.push_back(symbol(FilterSpec{n, a}, ksq));
                if (!n.is_infinite()) row.push_back(raw_symbol(n.value(), a, ksq));
            }
        table.rows.push_back(std::move(row));
    }
    write_csv(dir / "filters.csv", table);

    std::string gp;
    gp += "# Filter symbols against |k|; vertical lines mark |k| = 1/alpha0.\n";
    gp += "set datafile separator ','\n";
    gp += "set key autotitle columnhead\n";
    gp += "set logscale x\n";
    gp += "set xlabel '|k|'\nset ylabel 'symbol'\nset yrange [0:1.05]\n";
    for (double a : cfg.alpha0_list)
        if (a > 0.0)
            gp += "set arrow from " + format_double(1.0 / a) + ",0 to " + format_double(1.0 / a) +
                  ",1 nohead dashtype 2\n";
    gp += "plot \\\n";
    for (std::size_t c = 2; c <= table.header.size(); ++c) {
        gp += "  'filters.csv' using 1:" + std::to_string(c) + " with lines";
        gp += (c == table.header.size()) ? "\n" : ", \\\n";
    }
    write_text_file(dir / "plot_filters.gp", gp);
    std::cout << "filters: " << table.header.size() - 1 << " curves over |k| = 1.." << cfg.kmax
              << ", wrote " << (dir / "filters.csv").string() << "\n";
    return 0;
}

}  // namespace residlab
