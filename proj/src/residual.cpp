#include "residlab/residual.hpp"

#include <cmath>
#include <stdexcept>

namespace residlab {

ResidualState make_residual(const FilterSpec& spec, int truncation) {
    return ResidualState{spec, 0, SpectralField(truncation)};
}

ResidualState accumulate(const ResidualState& res, const TrajectoryState& state,
                         const SolverParams& params) {
    if (res.n != state.n)
        throw std::invalid_argument("accumulate: residual and trajectory step indices differ");
    if (res.rho.truncation() != state.omega.truncation())
        throw std::invalid_argument("accumulate: truncation mismatch");
    FlowKernel kernel(params.truncation, params.grid);
    kernel.prepare(state.omega);
    const SymbolTable table(res.spec, params.truncation);
    const SpectralField filtered = kernel.filtered_advection(table);
    const auto& plain = kernel.advection();

    ResidualState out = res;
    auto rho = out.rho.data();
    const auto f = filtered.data();
    const auto p = plain.data();
    for (std::size_t idx = 0; idx < rho.size(); ++idx) rho[idx] += params.h * (f[idx] - p[idx]);
    ++out.n;
    return out;
}

std::pair<SpectralField, SpectralField> residual_velocity(const ResidualState& res) {
    return velocity_from_vorticity(res.rho);
}

double residual_norm_sq(const ResidualState& res) {
    const double direct = l2_norm_sq(res.rho);
    // Independent route through the residual velocity, weighted by |k|^2.
    const auto [r1, r2] = residual_velocity(res);
    const ModeOrdering& ord = mode_ordering(res.rho.truncation());
    const auto modes = ord.modes();
    double weighted = 0.0;
    for (int r = 1; r <= ord.max_shell(); ++r) {
        double s = 0.0;
        for (std::size_t i = ord.shell_begin(r); i < ord.shell_end(r); ++i) {
            const WaveIndex k = modes[i];
            const std::size_t idx = res.rho.index_of(k.k1, k.k2);
            s += 2.0 * static_cast<double>(ksq_of(k)) *
                 (std::norm(r1.data()[idx]) + std::norm(r2.data()[idx]));
        }
        weighted += kFourPiSq * s;
    }
    if (std::abs(weighted - direct) > 1e-12 * direct)
        throw std::logic_error("residual_norm_sq: velocity-form and vorticity-form norms disagree");
    return direct;
}

double rms_over_ensemble(const std::vector<ResidualState>& residuals) {
    if (residuals.empty()) throw std::invalid_argument("rms_over_ensemble: empty ensemble");
    const auto& first = residuals.front();
    double sum = 0.0;
    for (const auto& res : residuals) {
        if (!(res.spec == first.spec) || res.n != first.n)
            throw std::invalid_argument("rms_over_ensemble: members must share filter and step index");
        sum += residual_norm_sq(res);
    }
    return std::sqrt(sum / static_cast<double>(residuals.size()));
}

ResidualBatch::ResidualBatch(const std::vector<FilterSpec>& specs, int truncation) {
    if (specs.empty()) throw std::invalid_argument("ResidualBatch: no filters");
    states_.reserve(specs.size());
    tables_.reserve(specs.size());
    for (const auto& spec : specs) {
        states_.push_back(make_residual(spec, truncation));
        tables_.emplace_back(spec, truncation);
    }
}

void ResidualBatch::accumulate(FlowKernel& kernel, double h) {
    const auto& plain = kernel.advection().data();
    for (std::size_t s = 0; s < states_.size(); ++s) {
        const SpectralField filtered = kernel.filtered_advection(tables_[s]);
        auto rho = states_[s].rho.data();
        const auto f = filtered.data();
        for (std::size_t idx = 0; idx < rho.size(); ++idx) rho[idx] += h * (f[idx] - plain[idx]);
        ++states_[s].n;
    }
    ++n_;
}

void ResidualBatch::restore(std::size_t i, const SpectralField& rho, long n) {
    if (i >= states_.size()) throw std::invalid_argument("ResidualBatch::restore: bad filter index");
    if (rho.truncation() != states_[i].rho.truncation())
        throw std::invalid_argument("ResidualBatch::restore: truncation mismatch");
    if (n_ != 0 && n_ != n)
        throw std::invalid_argument("ResidualBatch::restore: inconsistent step indices");
    states_[i].rho = rho;
    states_[i].n = n;
    n_ = n;
}

std::vector<double> ResidualBatch::norms_sq() const {
    std::vector<double> out;
    out.reserve(states_.size());
    for (const auto& st : states_) out.push_back(residual_norm_sq(st));
    return out;
}

}  // namespace residlab
