#include "residlab/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "residlab/csv.hpp"
#include "residlab/errors.hpp"

namespace residlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long parse_long(const std::string& v, const std::string& key) {
    long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse integer '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config key '" + key + "': cannot parse seed '" + v + "'");
    return x;
}

double parse_real(const std::string& v, const std::string& key) {
    try {
        return parse_double(v, "config key '" + key + "'");
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (kv.count(key))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = value;
    }

    RunConfig cfg;
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    auto take = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(path.string() + ": missing required key '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    cfg.nu = parse_real(take("nu"), "nu");
    cfg.grid_m = static_cast<int>(parse_long(take("grid_m"), "grid_m"));
    cfg.kmax = static_cast<int>(parse_long(take("kmax"), "kmax"));
    cfg.dt = parse_real(take("dt"), "dt");
    cfg.grashof = parse_real(take("grashof"), "grashof");
    cfg.force_seed = parse_u64(take("force_seed"), "force_seed");
    cfg.ensemble_size = static_cast<int>(parse_long(take("ensemble_size"), "ensemble_size"));
    cfg.ensemble_seed = parse_u64(take("ensemble_seed"), "ensemble_seed");
    cfg.spinup_time = parse_real(take("spinup_time"), "spinup_time");
    cfg.run_time = parse_real(take("run_time"), "run_time");
    cfg.sample_interval = parse_long(take("sample_interval"), "sample_interval");
    for (const auto& tok : split_list(take("alpha0_list")))
        cfg.alpha0_list.push_back(parse_real(tok, "alpha0_list"));
    for (const auto& tok : split_list(take("n_list"))) {
        try {
            cfg.n_list.push_back(FilterOrder::parse(tok));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config key 'n_list': ") + e.what());
        }
    }
    auto resolve = [&](const std::string& p) -> std::filesystem::path {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    cfg.spectrum_file = resolve(take("spectrum_file"));
    cfg.output_dir = resolve(take("output_dir"));
    cfg.c0 = parse_real(take("c0"), "c0");
    if (!kv.empty()) throw ConfigError(path.string() + ": unknown key '" + kv.begin()->first + "'");
    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    if (nu <= 0.0) throw ConfigError("config: nu must be positive");
    if (dt <= 0.0) throw ConfigError("config: dt must be positive");
    if (kmax < 1) throw ConfigError("config: kmax must be >= 1");
    if (grid_m < 3 * kmax + 1)
        throw ConfigError("config: grid_m must be >= 3*kmax+1 for dealiasing");
    if (grashof <= 0.0) throw ConfigError("config: grashof must be positive");
    if (ensemble_size < 1) throw ConfigError("config: ensemble_size must be >= 1");
    if (spinup_time < 0.0 || run_time < 0.0) throw ConfigError("config: times must be >= 0");
    if (sample_interval < 1) throw ConfigError("config: sample_interval must be >= 1");
    if (alpha0_list.empty()) throw ConfigError("config: alpha0_list must be nonempty");
    for (double a : alpha0_list)
        if (a < 0.0) throw ConfigError("config: alpha0 must be >= 0");
    if (n_list.empty()) throw ConfigError("config: n_list must be nonempty");
    if (output_dir.empty()) throw ConfigError("config: output_dir must be set");
}

SolverParams RunConfig::solver_params() const {
    SolverParams p;
    p.nu = nu;
    p.h = dt;
    p.truncation = kmax;
    p.grid = grid_m;
    return p;
}

std::vector<FilterSpec> RunConfig::filter_specs() const {
    std::vector<FilterSpec> out;
    out.reserve(alpha0_list.size() * n_list.size());
    for (double a : alpha0_list)
        for (const FilterOrder& n : n_list) out.push_back(FilterSpec{n, a});
    return out;
}

}  // namespace residlab
