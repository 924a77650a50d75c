#include "residlab/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "residlab/errors.hpp"
#include "residlab/rng.hpp"

namespace residlab {

void EnsembleConfig::validate() const {
    if (size < 1) throw std::invalid_argument("EnsembleConfig: size must be >= 1");
    if (spinup_time < 0.0 || run_time < 0.0)
        throw std::invalid_argument("EnsembleConfig: times must be >= 0");
    if (sample_interval < 1) throw std::invalid_argument("EnsembleConfig: sample_interval must be >= 1");
    if (threads < 1) throw std::invalid_argument("EnsembleConfig: threads must be >= 1");
    for (double e : target_spectrum)
        if (e < 0.0) throw std::invalid_argument("EnsembleConfig: spectrum must be nonnegative");
}

long steps_for_time(double T, double h) {
    if (T < 0.0) throw std::invalid_argument("steps_for_time: negative time");
    return static_cast<long>(std::floor(T / h + 1e-9));
}

SpectralField synthesize_initial(std::uint64_t seed, int member,
                                 const std::vector<double>& spectrum, int truncation) {
    const ModeOrdering& ord = mode_ordering(truncation);
    for (std::size_t r = 0; r < spectrum.size(); ++r) {
        if (spectrum[r] > 0.0 &&
            (r < 1 || r > static_cast<std::size_t>(ord.max_shell()) || ord.shell_count_full(static_cast<int>(r)) == 0))
            throw std::invalid_argument("synthesize_initial: spectrum shell " + std::to_string(r) +
                                        " is not reachable at this truncation");
    }
    auto z = [&](int k1, int k2) -> Complex {
        const long ksq = ksq_of(k1, k2);
        const int r = ModeOrdering::shell_of(ksq);
        if (r < 1 || static_cast<std::size_t>(r) >= spectrum.size() || spectrum[r] == 0.0 ||
            r > ord.max_shell())
            return {0.0, 0.0};
        const double amp = std::sqrt(static_cast<double>(ksq)) / (2.0 * std::numbers::pi) *
                           std::sqrt(spectrum[r] / ord.shell_count_full(r));
        const auto [x, y] =
            gaussian_pair(stream_key(seed, StreamTag::initial_field, static_cast<std::uint64_t>(member), k1, k2));
        return 0.5 * amp * Complex(x, y);
    };
    SpectralField omega(truncation);
    auto c = omega.data();
    for (std::size_t idx = 0; idx < omega.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        c[idx] = z(k.k1, k.k2) + std::conj(z(-k.k1, -k.k2));
    }
    return omega;
}

TrajectoryState spin_up(const SpectralField& initial, const ForcingField& force,
                        const SolverParams& params, double T, long sample_interval,
                        const std::function<void(long, const TrajectoryState&)>& sampler) {
    Stepper stepper(params, force);
    TrajectoryState state{0, initial};
    const long steps = steps_for_time(T, params.h);
    if (sampler && sample_interval > 0) sampler(0, state);
    for (long n = 1; n <= steps; ++n) {
        stepper.advance(state);
        if (sampler && sample_interval > 0 && n % sample_interval == 0) sampler(n, state);
    }
    return state;
}

std::pair<double, double> energy_enstrophy(const TrajectoryState& state) {
    return energy_enstrophy_of(state.omega);
}

void run_residual_phase(
    Stepper& stepper, TrajectoryState& state, ResidualBatch& batch, long total_steps,
    long interval, bool emit_initial,
    const std::function<void(long, const std::vector<double>&, const TrajectoryState&)>& sampler) {
    if (interval < 1) throw std::invalid_argument("run_residual_phase: interval must be >= 1");
    if (emit_initial && sampler && batch.step_index() % interval == 0)
        sampler(batch.step_index(), batch.norms_sq(), state);
    while (batch.step_index() < total_steps) {
        stepper.kernel().prepare(state.omega);
        batch.accumulate(stepper.kernel(), stepper.params().h);  // left endpoint, then advance
        stepper.advance_prepared(state);
        if (sampler && batch.step_index() % interval == 0)
            sampler(batch.step_index(), batch.norms_sq(), state);
    }
}

namespace {

struct MemberResult {
    std::vector<double> t;
    std::vector<std::vector<double>> norm_sq;  // [spec][sample]
};

}  // namespace

ErmsTable run_ensemble(const EnsembleConfig& cfg, const std::vector<FilterSpec>& specs,
                       const ForcingField& force, const SolverParams& params,
                       const EnsembleHooks& hooks) {
    cfg.validate();
    params.validate();
    if (specs.empty()) throw std::invalid_argument("run_ensemble: no filters");

    std::vector<MemberResult> results(static_cast<std::size_t>(cfg.size));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(cfg.size));

    auto run_member = [&](int j) {
        const SpectralField initial =
            synthesize_initial(cfg.seed, j, cfg.target_spectrum, params.truncation);
        Stepper stepper(params, force);
        TrajectoryState state{0, initial};
        const long spin_steps = steps_for_time(cfg.spinup_time, params.h);
        if (hooks.on_spinup_sample) hooks.on_spinup_sample(j, 0, state);
        for (long n = 1; n <= spin_steps; ++n) {
            stepper.advance(state);
            if (hooks.on_spinup_sample && n % cfg.sample_interval == 0) hooks.on_spinup_sample(j, n, state);
        }
        if (hooks.on_spinup_done) hooks.on_spinup_done(j, state);

        state.n = 0;  // residual clock starts at the ensemble point
        ResidualBatch batch(specs, params.truncation);
        MemberResult& out = results[static_cast<std::size_t>(j)];
        out.norm_sq.assign(specs.size(), {});
        run_residual_phase(stepper, state, batch, steps_for_time(cfg.run_time, params.h),
                           cfg.sample_interval, true,
                           [&](long n, const std::vector<double>& norms, const TrajectoryState& st) {
                               out.t.push_back(static_cast<double>(n) * params.h);
                               for (std::size_t s = 0; s < norms.size(); ++s)
                                   out.norm_sq[s].push_back(norms[s]);
                               if (hooks.on_residual_sample) hooks.on_residual_sample(j, n, st);
                           });
    };

    const int workers = std::min(cfg.threads, cfg.size);
    if (workers <= 1) {
        for (int j = 0; j < cfg.size; ++j) {
            try {
                run_member(j);
            } catch (...) {
                failures[static_cast<std::size_t>(j)] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const int j = next.fetch_add(1);
                    if (j >= cfg.size) return;
                    try {
                        run_member(j);
                    } catch (...) {
                        failures[static_cast<std::size_t>(j)] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (int j = 0; j < cfg.size; ++j) {
        if (!failures[static_cast<std::size_t>(j)]) continue;
        try {
            std::rethrow_exception(failures[static_cast<std::size_t>(j)]);
        } catch (const BlowUpError& e) {
            throw BlowUpError(e.step, j);
        }
    }

    ErmsTable table;
    table.specs = specs;
    table.t = results.front().t;
    for (const auto& r : results)
        if (r.t != table.t) throw std::logic_error("run_ensemble: members sampled at different times");
    table.erms.assign(specs.size(), std::vector<double>(table.t.size(), 0.0));
    for (std::size_t s = 0; s < specs.size(); ++s) {
        for (std::size_t i = 0; i < table.t.size(); ++i) {
            double sum = 0.0;
            for (int j = 0; j < cfg.size; ++j)  // fixed member order keeps the reduction bit-stable
                sum += results[static_cast<std::size_t>(j)].norm_sq[s][i];
            table.erms[s][i] = std::sqrt(sum / static_cast<double>(cfg.size));
        }
    }
    return table;
}

double trailing_window_change(const std::vector<double>& values, std::size_t window) {
    if (window < 1 || values.size() < 2 * window)
        throw std::invalid_argument("trailing_window_change: series shorter than two windows");
    auto mean = [&](std::size_t first) {
        double s = 0.0;
        for (std::size_t i = first; i < first + window; ++i) s += values[i];
        return s / static_cast<double>(window);
    };
    const double previous = mean(values.size() - 2 * window);
    const double last = mean(values.size() - window);
    return std::abs(last - previous) / std::max(std::abs(previous), 1e-300);
}

}  // namespace residlab
