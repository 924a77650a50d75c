#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "residlab/residual.hpp"
#include "residlab/solver.hpp"

namespace residlab {

struct EnsembleConfig {
    int size = 1;                         // number of trajectories
    std::uint64_t seed = 0;               // master seed; members use substreams
    double spinup_time = 0.0;
    double run_time = 0.0;
    std::vector<double> target_spectrum;  // E(r), indexed by shell r
    long sample_interval = 1;             // steps between recorded samples
    int threads = 1;

    void validate() const;
};

/// Random vorticity field whose velocity has expected energy spectrum E(r):
///   omega_k = Z_k + conj(Z_{-k}),
///   Z_k = (|k|/2pi) (E(r)/|J_r|)^{1/2} (X_k + i Y_k)/2,
/// with X,Y standard Gaussians drawn from the stream keyed by
/// (seed, member, k), so the result is independent of traversal order.
/// |J_r| counts the shell's lattice points inside the truncation square;
/// with that count E[ ||U||^2 ] = sum_r E(r) exactly for reachable shells.
SpectralField synthesize_initial(std::uint64_t seed, int member,
                                 const std::vector<double>& spectrum, int truncation);

/// Advance floor(T/h) steps from the initial vorticity.  The sampler, when
/// set, observes the state every sample_interval steps (and at step 0).
TrajectoryState spin_up(const SpectralField& initial, const ForcingField& force,
                        const SolverParams& params, double T, long sample_interval = 0,
                        const std::function<void(long n, const TrajectoryState&)>& sampler = {});

/// (||u||^2, ||omega||^2) of the state.
std::pair<double, double> energy_enstrophy(const TrajectoryState& state);

/// Ensemble RMS residual table: one row of sample times, one column per
/// filter, erms[spec][sample].
struct ErmsTable {
    std::vector<double> t;
    std::vector<FilterSpec> specs;
    std::vector<std::vector<double>> erms;
};

/// Per-member observation hooks; called from worker threads, one member per
/// thread at a time.
struct EnsembleHooks {
    std::function<void(int member, long n, const TrajectoryState&)> on_spinup_sample;
    std::function<void(int member, const TrajectoryState&)> on_spinup_done;
    std::function<void(int member, long n, const TrajectoryState&)> on_residual_sample;
};

/// Synthesize, spin up, and accumulate residuals for every member; members
/// run in parallel and the result is bit-identical for any thread count.
/// A blow-up in any member aborts with its member id and step.
ErmsTable run_ensemble(const EnsembleConfig& cfg, const std::vector<FilterSpec>& specs,
                       const ForcingField& force, const SolverParams& params,
                       const EnsembleHooks& hooks = {});

/// Residual-phase driver shared by the ensemble runner and the CLI: advances
/// the trajectory to total_steps (counted from the phase start) while
/// accumulating the batch, sampling every interval steps.  The sampler sees
/// the step index within the phase and the per-spec squared residual norms.
void run_residual_phase(
    Stepper& stepper, TrajectoryState& state, ResidualBatch& batch, long total_steps,
    long interval, bool emit_initial,
    const std::function<void(long n, const std::vector<double>& norms_sq,
                             const TrajectoryState&)>& sampler);

/// Relative change between the means of the last two length-`window` blocks
/// of a series; the stationarity heuristic used to judge spin-up length.
double trailing_window_change(const std::vector<double>& values, std::size_t window);

/// floor(T/h) with a tolerance guard for T that is an exact multiple of h.
long steps_for_time(double T, double h);

}  // namespace residlab
