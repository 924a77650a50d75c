#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "residlab/filters.hpp"
#include "residlab/spectral_field.hpp"
#include "residlab/transforms.hpp"

namespace residlab {

/// Wavenumber bounds fixed by the forcing construction: the force is
/// supported on 16 <= |k|^2 <= 34, and the smallest grid eigenvalue is 1.
inline constexpr long kForceKsqMin = 16;
inline constexpr long kForceKsqMax = 34;
inline constexpr double kLambda0 = 1.0;
inline constexpr double kLambdaM = 34.0;

struct SolverParams {
    double nu = 0.0;   // kinematic viscosity
    double h = 0.0;    // time step
    int truncation = 0;
    int grid = 0;

    void validate() const;
};

/// Time-independent divergence-free body force, stored as g = curl f.
struct ForcingField {
    SpectralField g;
    double fnorm = 0.0;    // ||f||_{L2}
    double grashof = 0.0;  // nu^{-2} ||f||_{L2}
    std::uint64_t seed = 0;
};

struct TrajectoryState {
    long n = 0;
    SpectralField omega;
};

/// ||f||_{L2} of a force given by its curl g: (4 pi^2 sum |g_k|^2/|k|^2)^{1/2}.
double force_norm_from_curl(const SpectralField& g);

/// Random force with i.i.d. complex Gaussian amplitudes on the annulus
/// 16 <= |k|^2 <= 34, rescaled so nu^{-2}||f|| equals the target Grashof
/// number.  Bit-reproducible from the seed.
ForcingField make_force(std::uint64_t seed, double target_grashof, double nu, int truncation);

/// Absorbing-ball radius B = c0 ||f|| / (nu lambda0^{1/2}); requires
/// c0 > 6 lambda_M / lambda_0 = 204.
double absorbing_bound(double fnorm, double nu, double c0);

/// Biot-Savart: u_k = i (k2, -k1) omega_k / |k|^2, divergence free.
std::pair<SpectralField, SpectralField> velocity_from_vorticity(const SpectralField& omega);

/// Shared kernel for the dealiased nonlinear term: given omega, caches the
/// velocity (spectral and grid), the vorticity gradient on the grid, and
/// (u. grad omega).  Filtered advections reuse the cached gradient, so each
/// extra filter costs three transforms instead of five.
class FlowKernel {
  public:
    FlowKernel(int truncation, int grid);

    int truncation() const { return K_; }
    int grid() const { return M_; }

    void prepare(const SpectralField& omega);
    bool prepared() const { return prepared_; }

    /// Truncation of u . grad omega for the prepared vorticity.
    const SpectralField& advection() const;
    /// Same with the velocity filtered per mode by the symbol table.
    SpectralField filtered_advection(const SymbolTable& table);
    /// max over grid points of |u1| + |u2| for the prepared vorticity.
    double grid_speed_linf1() const;

  private:
    void synthesize_velocity(const std::vector<Complex>& vk1, const std::vector<Complex>& vk2,
                             RealGrid& out1, RealGrid& out2);

    int K_, M_;
    FourierWorkspace ws_;
    std::vector<Complex> u1k_, u2k_;        // spectral velocity, storage order
    SpectralField scratch_;
    RealGrid u1r_, u2r_, wxr_, wyr_, prodr_, f1r_, f2r_;
    SpectralField adv_;
    bool prepared_ = false;
};

/// One step of the discrete dynamics: exact integration of the linear part,
/// Euler treatment of the dealiased nonlinearity,
///   S(omega)_k = {omega_k - h (u.grad omega)_k} e^{-nu |k|^2 h}
///                + g_k (1 - e^{-nu |k|^2 h}) / (nu |k|^2),
/// with the force term in the cancellation-safe expm1 form (identical to the
/// e^{-a/2} sinh(a/2) expression).
class Stepper {
  public:
    Stepper(const SolverParams& params, const ForcingField& force);

    const SolverParams& params() const { return p_; }
    FlowKernel& kernel() { return kernel_; }

    /// Advance one step (prepares the kernel internally).
    void advance(TrajectoryState& state);
    /// Advance using the kernel already prepared at state.omega.
    void advance_prepared(TrajectoryState& state);

  private:
    SolverParams p_;
    FlowKernel kernel_;
    std::vector<double> decay_;       // e^{-nu |k|^2 h} per stored mode
    std::vector<Complex> force_inc_;  // g_k (1-e^{-nu|k|^2 h})/(nu |k|^2) per stored mode
};

/// Convenience single-call forms of the kernel operations.
SpectralField advection(const SpectralField& omega, const SolverParams& params);
TrajectoryState step(const TrajectoryState& state, const ForcingField& force, const SolverParams& params);

/// CFL = (K h / 2 pi) max_ij (|u1| + |u2|) at the current state; callers keep
/// the running supremum across steps.
double cfl_number(const TrajectoryState& state, const SolverParams& params);

}  // namespace residlab
