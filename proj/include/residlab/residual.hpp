#pragma once

#include <utility>
#include <vector>

#include "residlab/filters.hpp"
#include "residlab/solver.hpp"
#include "residlab/spectral_field.hpp"

namespace residlab {

/// Accumulated model-error residual vorticity rho for one filter, advanced
/// along the exact trajectory by the left-endpoint sum
///   rho_k^{n+1} = rho_k^n + h ((ubar.grad omega)_k - (u.grad omega)_k).
/// rho = 0 at n = 0, and the model's own dynamics never enter.
struct ResidualState {
    FilterSpec spec;
    long n = 0;
    SpectralField rho;
};

ResidualState make_residual(const FilterSpec& spec, int truncation);

/// One accumulation step; requires res.n == state.n (left endpoints).
ResidualState accumulate(const ResidualState& res, const TrajectoryState& state,
                         const SolverParams& params);

/// Divergence-free residual velocity R_k = i rho_k (k2, -k1)/|k|^2.
std::pair<SpectralField, SpectralField> residual_velocity(const ResidualState& res);

/// 4 pi^2 sum_k |k|^2 |R_k|^2 for one member; equals l2_norm_sq(rho).  Both
/// routes are evaluated and must agree to 1e-12 relative.
double residual_norm_sq(const ResidualState& res);

/// Ensemble RMS { (4 pi^2/|U|) sum_members sum_k |k|^2 |R_k|^2 }^{1/2} over
/// residuals sharing one filter and step index.
double rms_over_ensemble(const std::vector<ResidualState>& residuals);

/// Tracks one residual per filter along a single trajectory, sharing the
/// unfiltered advection term of a prepared FlowKernel.
class ResidualBatch {
  public:
    ResidualBatch(const std::vector<FilterSpec>& specs, int truncation);

    long step_index() const { return n_; }
    std::size_t spec_count() const { return states_.size(); }
    const std::vector<ResidualState>& states() const { return states_; }
    ResidualState& state(std::size_t i) { return states_[i]; }

    /// Advance every residual one step using the kernel prepared at the
    /// trajectory's current vorticity; h is the trajectory time step.
    void accumulate(FlowKernel& kernel, double h);

    /// Restore one residual from a snapshot and align the batch clock; every
    /// filter must be restored to the same step index.
    void restore(std::size_t i, const SpectralField& rho, long n);

    /// residual_norm_sq per filter, in spec order.
    std::vector<double> norms_sq() const;

  private:
    long n_ = 0;
    std::vector<ResidualState> states_;
    std::vector<SymbolTable> tables_;
};

}  // namespace residlab
