#include "residlab/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "residlab/errors.hpp"
#include "residlab/rng.hpp"

namespace residlab {

void SolverParams::validate() const {
    if (nu <= 0.0) throw std::invalid_argument("SolverParams: nu must be positive");
    if (h <= 0.0) throw std::invalid_argument("SolverParams: h must be positive");
    if (truncation < 1) throw std::invalid_argument("SolverParams: truncation must be >= 1");
    if (grid < 3 * truncation + 1)
        throw std::invalid_argument("SolverParams: grid must satisfy the two-thirds rule (grid >= 3K+1)");
    if (nu * h * 2.0 * truncation * truncation > 700.0)
        throw std::invalid_argument("SolverParams: nu*h*|k|^2 out of exponential range");
}

double force_norm_from_curl(const SpectralField& g) {
    const ModeOrdering& ord = mode_ordering(g.truncation());
    const auto modes = ord.modes();
    double total = 0.0;
    for (int r = 1; r <= ord.max_shell(); ++r) {
        double s = 0.0;
        for (std::size_t i = ord.shell_begin(r); i < ord.shell_end(r); ++i) {
            const WaveIndex k = modes[i];
            s += 2.0 * std::norm(g.data()[g.index_of(k.k1, k.k2)]) / static_cast<double>(ksq_of(k));
        }
        total += kFourPiSq * s;
    }
    return std::sqrt(total);
}

ForcingField make_force(std::uint64_t seed, double target_grashof, double nu, int truncation) {
    if (target_grashof <= 0.0) throw std::invalid_argument("make_force: Grashof target must be positive");
    if (nu <= 0.0) throw std::invalid_argument("make_force: nu must be positive");
    if (static_cast<long>(truncation) * truncation < kForceKsqMax)
        throw std::invalid_argument("make_force: truncation too small to carry the forced annulus");

    ForcingField out;
    out.seed = seed;
    out.g = SpectralField(truncation);
    const ModeOrdering& ord = mode_ordering(truncation);
    for (const WaveIndex k : ord.modes()) {
        const long ksq = ksq_of(k);
        if (ksq < kForceKsqMin || ksq > kForceKsqMax) continue;
        const auto [x, y] = gaussian_pair(stream_key(seed, StreamTag::force, 0, k.k1, k.k2));
        out.g.set_coeff(k.k1, k.k2, Complex(x, y));
    }
    const double target_fnorm = target_grashof * nu * nu;
    const double raw = force_norm_from_curl(out.g);
    out.g *= target_fnorm / raw;
    out.fnorm = force_norm_from_curl(out.g);
    out.grashof = out.fnorm / (nu * nu);
    return out;
}

double absorbing_bound(double fnorm, double nu, double c0) {
    if (!(c0 > 6.0 * kLambdaM / kLambda0))
        throw std::invalid_argument("absorbing_bound: c0 must exceed 6*lambda_M/lambda_0 = 204");
    if (nu <= 0.0) throw std::invalid_argument("absorbing_bound: nu must be positive");
    return c0 * fnorm / (nu * std::sqrt(kLambda0));
}

std::pair<SpectralField, SpectralField> velocity_from_vorticity(const SpectralField& omega) {
    SpectralField u1(omega.truncation());
    SpectralField u2(omega.truncation());
    auto w = omega.data();
    auto a = u1.data();
    auto b = u2.data();
    for (std::size_t idx = 0; idx < omega.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        const double inv = 1.0 / static_cast<double>(ksq_of(k));
        // u_k = i (k2, -k1) omega_k / |k|^2
        a[idx] = Complex(-k.k2 * w[idx].imag(), k.k2 * w[idx].real()) * inv;
        b[idx] = Complex(k.k1 * w[idx].imag(), -k.k1 * w[idx].real()) * inv;
    }
    return {std::move(u1), std::move(u2)};
}

FlowKernel::FlowKernel(int truncation, int grid)
    : K_(truncation),
      M_(grid),
      ws_(truncation, grid),
      u1k_(SpectralField(truncation).size()),
      u2k_(u1k_.size()),
      scratch_(truncation),
      u1r_(grid),
      u2r_(grid),
      wxr_(grid),
      wyr_(grid),
      prodr_(grid),
      f1r_(grid),
      f2r_(grid),
      adv_(truncation) {
    if (grid < 3 * truncation + 1)
        throw std::invalid_argument("FlowKernel: grid must satisfy the two-thirds rule");
}

namespace {

// Shared product loop: dst = a*b + c*d pointwise.  Both the plain and the
// filtered advection must run through this exact code so an identity filter
// reproduces the unfiltered term bit for bit.
inline void advect_product(RealGrid& dst, const RealGrid& a, const RealGrid& b, const RealGrid& c,
                           const RealGrid& d) {
    const std::size_t n = dst.size();
    double* out = dst.data();
    const double *pa = a.data(), *pb = b.data(), *pc = c.data(), *pd = d.data();
    for (std::size_t i = 0; i < n; ++i) out[i] = pa[i] * pb[i] + pc[i] * pd[i];
}

}  // namespace

void FlowKernel::synthesize_velocity(const std::vector<Complex>& vk1, const std::vector<Complex>& vk2,
                                     RealGrid& out1, RealGrid& out2) {
    auto s = scratch_.data();
    std::copy(vk1.begin(), vk1.end(), s.begin());
    ws_.synthesize(scratch_, out1);
    std::copy(vk2.begin(), vk2.end(), s.begin());
    ws_.synthesize(scratch_, out2);
}

void FlowKernel::prepare(const SpectralField& omega) {
    if (omega.truncation() != K_) throw std::invalid_argument("FlowKernel: truncation mismatch");
    auto w = omega.data();
    auto s = scratch_.data();
    for (std::size_t idx = 0; idx < omega.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        const double inv = 1.0 / static_cast<double>(ksq_of(k));
        u1k_[idx] = Complex(-k.k2 * w[idx].imag(), k.k2 * w[idx].real()) * inv;
        u2k_[idx] = Complex(k.k1 * w[idx].imag(), -k.k1 * w[idx].real()) * inv;
    }
    synthesize_velocity(u1k_, u2k_, u1r_, u2r_);
    // gradient: (i k1 omega, i k2 omega)
    for (std::size_t idx = 0; idx < omega.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        s[idx] = Complex(-k.k1 * w[idx].imag(), k.k1 * w[idx].real());
    }
    ws_.synthesize(scratch_, wxr_);
    for (std::size_t idx = 0; idx < omega.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        s[idx] = Complex(-k.k2 * w[idx].imag(), k.k2 * w[idx].real());
    }
    ws_.synthesize(scratch_, wyr_);
    advect_product(prodr_, u1r_, wxr_, u2r_, wyr_);
    ws_.analyze(prodr_, adv_);
    prepared_ = true;
}

const SpectralField& FlowKernel::advection() const {
    if (!prepared_) throw std::logic_error("FlowKernel: advection() before prepare()");
    return adv_;
}

SpectralField FlowKernel::filtered_advection(const SymbolTable& table) {
    if (!prepared_) throw std::logic_error("FlowKernel: filtered_advection() before prepare()");
    if (table.truncation() != K_) throw std::invalid_argument("FlowKernel: symbol table truncation mismatch");
    auto s = scratch_.data();
    for (std::size_t idx = 0; idx < scratch_.size(); ++idx) {
        const WaveIndex k = scratch_.mode_of(idx);
        s[idx] = u1k_[idx] * table.at_ksq(ksq_of(k));
    }
    ws_.synthesize(scratch_, f1r_);
    for (std::size_t idx = 0; idx < scratch_.size(); ++idx) {
        const WaveIndex k = scratch_.mode_of(idx);
        s[idx] = u2k_[idx] * table.at_ksq(ksq_of(k));
    }
    ws_.synthesize(scratch_, f2r_);
    advect_product(prodr_, f1r_, wxr_, f2r_, wyr_);
    SpectralField out(K_);
    ws_.analyze(prodr_, out);
    return out;
}

double FlowKernel::grid_speed_linf1() const {
    if (!prepared_) throw std::logic_error("FlowKernel: grid_speed_linf1() before prepare()");
    double m = 0.0;
    for (std::size_t i = 0; i < u1r_.size(); ++i)
        m = std::max(m, std::abs(u1r_[i]) + std::abs(u2r_[i]));
    return m;
}

Stepper::Stepper(const SolverParams& params, const ForcingField& force)
    : p_(params), kernel_(params.truncation, params.grid) {
    p_.validate();
    if (force.g.truncation() != p_.truncation)
        throw std::invalid_argument("Stepper: force truncation mismatch");
    const SpectralField probe(p_.truncation);
    decay_.resize(probe.size());
    force_inc_.resize(probe.size());
    for (std::size_t idx = 0; idx < probe.size(); ++idx) {
        const WaveIndex k = probe.mode_of(idx);
        const double a = p_.nu * static_cast<double>(ksq_of(k)) * p_.h;
        decay_[idx] = std::exp(-a);
        // g_k (1 - e^{-a})/(nu |k|^2), safe for a down to ~6e-7
        force_inc_[idx] = force.g.data()[idx] *
                          (-std::expm1(-a) / (p_.nu * static_cast<double>(ksq_of(k))));
    }
}

void Stepper::advance_prepared(TrajectoryState& state) {
    if (!kernel_.prepared()) throw std::logic_error("Stepper: kernel not prepared");
    auto w = state.omega.data();
    const auto adv = kernel_.advection().data();
    for (std::size_t idx = 0; idx < w.size(); ++idx)
        w[idx] = (w[idx] - p_.h * adv[idx]) * decay_[idx] + force_inc_[idx];
    ++state.n;
    if (!state.omega.all_finite()) throw BlowUpError(state.n);
}

void Stepper::advance(TrajectoryState& state) {
    kernel_.prepare(state.omega);
    advance_prepared(state);
}

SpectralField advection(const SpectralField& omega, const SolverParams& params) {
    FlowKernel kernel(params.truncation, params.grid);
    kernel.prepare(omega);
    return kernel.advection();
}

TrajectoryState step(const TrajectoryState& state, const ForcingField& force, const SolverParams& params) {
    Stepper stepper(params, force);
    TrajectoryState out = state;
    stepper.advance(out);
    return out;
}

double cfl_number(const TrajectoryState& state, const SolverParams& params) {
    FlowKernel kernel(params.truncation, params.grid);
    kernel.prepare(state.omega);
    return params.truncation * params.h / (2.0 * std::numbers::pi) * kernel.grid_speed_linf1();
}

}  // namespace residlab
