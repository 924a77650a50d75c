#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "residlab/checkpoint.hpp"
#include "residlab/commands.hpp"
#include "residlab/config.hpp"
#include "residlab/csv.hpp"
#include "residlab/ensemble.hpp"
#include "residlab/errors.hpp"

using namespace residlab;
using namespace residlab::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "residlab_test_io";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("checkpoint round trip is bit-identical") {
    const fs::path path = temp_dir() / "state.ckpt";
    SolverParams p;
    p.nu = 2e-3;
    p.h = 1.0 / 64.0;
    p.truncation = 9;
    p.grid = 32;
    TrajectoryState state{12345, random_field(9, 31337)};
    write_checkpoint(path, state, p, 777);

    CheckpointMeta meta;
    const TrajectoryState back = read_checkpoint(path, meta);
    CHECK(back.n == state.n);
    CHECK(meta.grid_m == 32);
    CHECK(meta.kmax == 9);
    CHECK(meta.nu == p.nu);
    CHECK(meta.dt == p.h);
    CHECK(meta.seed == 777);
    CHECK(back.omega == state.omega);  // exact complex equality, every mode

    // writing the read-back state reproduces the file byte for byte
    const fs::path path2 = temp_dir() / "state2.ckpt";
    write_checkpoint(path2, back, p, 777);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("checkpoint rejects corrupt files") {
    const fs::path dir = temp_dir();
    SolverParams p;
    p.nu = 1.0;
    p.h = 0.5;
    p.truncation = 4;
    p.grid = 16;
    const fs::path path = dir / "corrupt.ckpt";
    write_checkpoint(path, TrajectoryState{0, SpectralField(4)}, p, 0);
    CheckpointMeta meta;

    // wrong magic
    std::string bytes = slurp(path);
    bytes[0] = 'X';
    std::ofstream(dir / "bad_magic.ckpt", std::ios::binary) << bytes;
    CHECK_THROWS_AS(read_checkpoint(dir / "bad_magic.ckpt", meta), IoError);

    // truncated payload
    std::ofstream(dir / "short.ckpt", std::ios::binary) << slurp(path).substr(0, 100);
    CHECK_THROWS_AS(read_checkpoint(dir / "short.ckpt", meta), IoError);

    // trailing garbage
    std::ofstream(dir / "long.ckpt", std::ios::binary) << slurp(path) + "zzz";
    CHECK_THROWS_AS(read_checkpoint(dir / "long.ckpt", meta), IoError);

    CHECK_THROWS_AS(read_checkpoint(dir / "does_not_exist.ckpt", meta), IoError);
}

TEST_CASE("force file round trip preserves seed and norms") {
    const fs::path path = temp_dir() / "force.bin";
    SolverParams p;
    p.nu = 1e-4;
    p.h = 25.0 / 4096.0;
    p.truncation = 8;
    p.grid = 32;
    const ForcingField force = make_force(424242, 250000.0, p.nu, 8);
    write_force_file(path, force, p);
    CheckpointMeta meta;
    const ForcingField back = read_force_file(path, meta);
    CHECK(back.g == force.g);
    CHECK(back.seed == 424242);
    CHECK(back.fnorm == force.fnorm);
    CHECK(back.grashof == force.grashof);
}

TEST_CASE("residual snapshot round trip for finite and infinite orders") {
    SolverParams p;
    p.nu = 0.01;
    p.h = 0.01;
    p.truncation = 5;
    p.grid = 16;
    for (const FilterSpec spec :
         {FilterSpec{FilterOrder::finite(4), 0.04}, FilterSpec{FilterOrder::infinite(), 0.2}}) {
        const fs::path path = temp_dir() / ("rho_" + spec.label() + ".ckpt");
        ResidualSnapshot snap{spec, 99, random_field(5, 7)};
        write_residual_snapshot(path, snap, p);
        const ResidualSnapshot back = read_residual_snapshot(path);
        CHECK(back.spec == spec);
        CHECK(back.n == 99);
        CHECK(back.rho == snap.rho);
    }
}

TEST_CASE("CSV parse/emit is byte-idempotent") {
    const fs::path a = temp_dir() / "a.csv";
    CsvTable t;
    t.header = {"t", "value"};
    t.rows = {{0.0, 0.0},
              {1.0 / 3.0, 6.364e-18},
              {25.0 / 4096.0, -3.286e-16},
              {1e5, 0.1 + 0.2}};
    write_csv(a, t);
    const CsvTable parsed = read_csv(a);
    const fs::path b = temp_dir() / "b.csv";
    write_csv(b, parsed);
    CHECK(slurp(a) == slurp(b));
    CHECK(parsed.rows[3][1] == 0.1 + 0.2);  // exact round trip through text
}

TEST_CASE("CSV errors carry the line number") {
    const fs::path p = temp_dir() / "bad.csv";
    std::ofstream(p) << "t,v\n1.0,2.0\n3.0\n";
    try {
        read_csv(p);
        FAIL("expected a parse error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    const fs::path q = temp_dir() / "bad2.csv";
    std::ofstream(q) << "t,v\n1.0,zebra\n";
    try {
        read_csv(q);
        FAIL("expected a parse error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("spectrum CSV round trip") {
    const fs::path p = temp_dir() / "spec.csv";
    std::vector<double> shells = {0.0, 0.5, 0.25, 0.0, 0.125};
    write_spectrum_csv(p, shells);
    const std::vector<double> back = read_spectrum_csv(p);
    REQUIRE(back.size() == shells.size());
    for (std::size_t r = 1; r < shells.size(); ++r) CHECK(back[r] == shells[r]);
}

namespace {

RunConfig tiny_run_config(const fs::path& out) {
    RunConfig cfg;
    cfg.nu = 0.02;
    cfg.grid_m = 32;
    cfg.kmax = 10;
    cfg.dt = 0.015625;
    cfg.grashof = 5000;
    cfg.force_seed = 11;
    cfg.ensemble_size = 1;
    cfg.ensemble_seed = 3;
    cfg.spinup_time = 0.0;
    cfg.run_time = 0.0;
    cfg.sample_interval = 2;
    cfg.alpha0_list = {0.04, 0.25};
    cfg.n_list = {FilterOrder::finite(0), FilterOrder::infinite()};
    cfg.spectrum_file = out / "spectrum.csv";
    cfg.output_dir = out;
    cfg.c0 = 205.0;
    return cfg;
}

}  // namespace

TEST_CASE("cmd_spinup: zero-time checkpoints hold the synthesized fields, rows count") {
    const fs::path out = temp_dir() / "cmd_spinup";
    fs::remove_all(out);
    fs::create_directories(out);
    RunConfig cfg = tiny_run_config(out);
    write_spectrum_csv(cfg.spectrum_file, {0.0, 0.05, 0.1, 0.05});
    CliOptions opt;
    REQUIRE(cmd_force(cfg, opt) == 0);
    REQUIRE(cmd_spinup(cfg, opt) == 0);

    CheckpointMeta meta;
    const TrajectoryState state = read_checkpoint(out / "member0.ckpt", meta);
    CHECK(state.n == 0);
    const std::vector<double> spectrum = read_spectrum_csv(cfg.spectrum_file);
    const SpectralField expect = synthesize_initial(cfg.ensemble_seed, 0, spectrum, cfg.kmax);
    CHECK(state.omega == expect);

    // 10 steps sampled every 2 -> 10/2 + 1 rows
    cfg.spinup_time = 10.0 * cfg.dt;
    REQUIRE(cmd_spinup(cfg, opt) == 0);
    const CsvTable energy = read_csv(out / "energy_member0.csv");
    CHECK(energy.rows.size() == 10 / 2 + 1);
    const CsvTable pts = read_csv(out / "points_energy_enstrophy.csv");
    CHECK(pts.rows.size() == 1);
}

TEST_CASE("cmd_filters: the order-0 curve passes through (25, 0.5)") {
    const fs::path out = temp_dir() / "cmd_filters";
    fs::remove_all(out);
    fs::create_directories(out);
    RunConfig cfg = tiny_run_config(out);
    cfg.kmax = 30;
    cfg.grid_m = 91;
    CliOptions opt;
    REQUIRE(cmd_filters(cfg, opt) == 0);
    const CsvTable t = read_csv(out / "filters.csv");
    const std::size_t kcol = t.column("k");
    const std::size_t h0 = t.column("H_a0.04_N0");
    const std::size_t d0 = t.column("D_alpha0.04_N0");
    const std::size_t hinf = t.column("H_a0.25_Ninf");
    for (const auto& row : t.rows) {
        if (row[kcol] == 25.0) {
            CHECK(row[h0] == 0.5);
            CHECK(row[d0] == 0.5);
        }
        // the infinite-order column is the closed-form limit pointwise
        const double k = row[kcol];
        CHECK(row[hinf] == -std::expm1(-1.0 / (0.25 * 0.25 * k * k)));
    }
    CHECK(fs::exists(out / "plot_filters.gp"));
}

TEST_CASE("cmd_analyze: synthetic sqrt and linear columns") {
    const fs::path out = temp_dir() / "cmd_analyze";
    fs::remove_all(out);
    fs::create_directories(out);
    RunConfig cfg = tiny_run_config(out);
    CsvTable erms;
    erms.header = {"t", "erms_a0.01_N0", "erms_a0.2_Ninf"};
    for (int i = 1; i <= 400; ++i) {
        const double t = 250.0 * i;
        erms.rows.push_back({t, 2e-4 * std::sqrt(t), 3e-6 * t});
    }
    write_csv(out / "erms.csv", erms);
    CliOptions opt;
    REQUIRE(cmd_analyze(cfg, opt) == 0);

    const CsvTable expo = read_csv(out / "exponents.csv");
    const std::size_t slope = expo.column("slope");
    CHECK(std::abs(expo.rows[0][slope] - 0.5) <= 1e-6);
    CHECK(std::abs(expo.rows[1][slope] - 1.0) <= 1e-6);

    const CsvTable fit = read_csv(out / "fit.csv");
    const std::size_t eta = fit.column("eta");
    CHECK(std::abs(fit.rows[0][eta]) <= 1e-6);  // pure sqrt growth: no bias term
    // pure linear growth: C1 is roundoff noise, so eta is huge (sign is noise too)
    CHECK(std::abs(fit.rows[1][eta]) >= 100.0);
    const std::size_t a0 = fit.column("alpha0");
    const std::size_t order = fit.column("N");
    CHECK(fit.rows[0][a0] == 0.01);
    CHECK(fit.rows[0][order] == 0.0);
    CHECK(fit.rows[1][a0] == 0.2);
    CHECK(fit.rows[1][order] == -1.0);
}

TEST_CASE("output directory precedence: flag over environment over config") {
    RunConfig cfg = tiny_run_config("/cfg/dir");
    CliOptions opt;
    unsetenv("RESIDLAB_OUTPUT_DIR");
    CHECK(effective_output_dir(cfg, opt) == fs::path("/cfg/dir"));
    setenv("RESIDLAB_OUTPUT_DIR", "/env/dir", 1);
    CHECK(effective_output_dir(cfg, opt) == fs::path("/env/dir"));
    opt.output_dir_override = "/flag/dir";
    CHECK(effective_output_dir(cfg, opt) == fs::path("/flag/dir"));
    unsetenv("RESIDLAB_OUTPUT_DIR");
}

TEST_CASE("config loading: round trip, defaults, and rejection") {
    const fs::path dir = temp_dir();
    const fs::path cfg_path = dir / "run.cfg";
    std::ofstream(cfg_path) << "# test config\n"
                               "nu = 0.002\n"
                               "grid_m = 64\n"
                               "kmax = 21\n"
                               "dt = 0.015625\n"
                               "grashof = 25000\n"
                               "force_seed = 2024\n"
                               "ensemble_size = 3\n"
                               "ensemble_seed = 7\n"
                               "spinup_time = 500\n"
                               "run_time = 2000\n"
                               "sample_interval = 64\n"
                               "alpha0_list = 0.02, 0.3\n"
                               "n_list = 0, inf\n"
                               "spectrum_file = spectrum.csv\n"
                               "output_dir = out\n"
                               "c0 = 205\n";
    const RunConfig cfg = RunConfig::load(cfg_path);
    CHECK(cfg.nu == 0.002);
    CHECK(cfg.kmax == 21);
    CHECK(cfg.sample_interval == 64);
    REQUIRE(cfg.alpha0_list.size() == 2);
    CHECK(cfg.alpha0_list[1] == 0.3);
    REQUIRE(cfg.n_list.size() == 2);
    CHECK(cfg.n_list[1].is_infinite());
    CHECK(cfg.spectrum_file == dir / "spectrum.csv");  // resolved against the config dir
    const auto specs = cfg.filter_specs();
    REQUIRE(specs.size() == 4);
    CHECK(specs[0].label() == "a0.02_N0");
    CHECK(specs[3].label() == "a0.3_Ninf");

    // missing key
    std::ofstream(dir / "missing.cfg") << "nu = 0.1\n";
    CHECK_THROWS_AS(RunConfig::load(dir / "missing.cfg"), ConfigError);

    // unknown key
    std::ofstream(dir / "unknown.cfg") << slurp(cfg_path) << "bogus = 1\n";
    CHECK_THROWS_AS(RunConfig::load(dir / "unknown.cfg"), ConfigError);

    // dealiasing violated
    std::string text = slurp(cfg_path);
    text.replace(text.find("grid_m = 64"), 11, "grid_m = 48");
    std::ofstream(dir / "coarse.cfg") << text;
    CHECK_THROWS_AS(RunConfig::load(dir / "coarse.cfg"), ConfigError);

    // bad order token
    std::string text2 = slurp(cfg_path);
    text2.replace(text2.find("n_list = 0, inf"), 15, "n_list = 0, inx");
    std::ofstream(dir / "badn.cfg") << text2;
    CHECK_THROWS_AS(RunConfig::load(dir / "badn.cfg"), ConfigError);
}
