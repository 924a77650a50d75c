#pragma once

#include <utility>
#include <vector>

#include "residlab/spectral_field.hpp"

namespace residlab {

/// Time-averaged energy spectrum E(r) over an averaging window.
struct SpectrumSeries {
    std::vector<double> shells;  // E(r), indexed by r; [0] unused
    double t0 = 0.0;
    double t1 = 0.0;

    double total() const;
};

/// Running mean of velocity shells over vorticity snapshots.
class SpectrumAccumulator {
  public:
    void add(const SpectralField& omega);
    long count() const { return count_; }
    SpectrumSeries finalize(double t0, double t1) const;

  private:
    long count_ = 0;
    std::vector<double> sums_;
};

/// E(r) = (4 pi^2/(T-T0)) integral of sum_{J_r} |u_k|^2 dt by the
/// left-endpoint rule: the samples are vorticity snapshots at
/// t = T0 + i h, i = 0..m-1, covering [T0, T) with m h = T - T0.
SpectrumSeries time_averaged_spectrum(const std::vector<SpectralField>& samples, double T0, double T,
                                      double h);

/// Eddy turnover time tau = 4 pi^2 sum r^{-1} E(r) / (sum E(r))^{3/2}.
double eddy_turnover(const SpectrumSeries& spectrum);

/// Quadratic-through-origin least squares decomposition of squared residual
/// growth: E_rms(t)^2 ~ C2 t^2 + C1 t.  C1 estimates the stochastic trace,
/// C2 the squared bias (reported as-is when negative); eta = C2 T / C1 is the
/// bias-to-noise ratio at the fit horizon.
struct FitResult {
    double C1 = 0.0;
    double C2 = 0.0;
    double eta = 0.0;
    double T = 0.0;
};

using GrowthSeries = std::vector<std::pair<double, double>>;  // (t, E_rms)

/// Fit over the samples with max(0, t_lo) < t <= min(T, t_hi); the window
/// defaults to every positive-time sample up to the horizon.  The basis is
/// scaled to (t/T, (t/T)^2) to keep the normal equations conditioned over
/// long horizons; eta is always evaluated at the horizon T.
FitResult fit_growth(const GrowthSeries& series, double T, double t_lo = 0.0, double t_hi = 0.0);

/// Least-squares slope of log E_rms against log t over t in [t_lo, t_hi].
double growth_exponent(const GrowthSeries& series, double t_lo, double t_hi);

}  // namespace residlab
