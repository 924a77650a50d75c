#include "residlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace residlab {

double SpectrumSeries::total() const {
    double s = 0.0;
    for (std::size_t r = 1; r < shells.size(); ++r) s += shells[r];
    return s;
}

void SpectrumAccumulator::add(const SpectralField& omega) {
    const std::vector<double> shells = shell_decompose_velocity(omega);
    if (sums_.empty()) sums_.assign(shells.size(), 0.0);
    if (sums_.size() != shells.size())
        throw std::invalid_argument("SpectrumAccumulator: truncation changed mid-average");
    for (std::size_t r = 0; r < shells.size(); ++r) sums_[r] += shells[r];
    ++count_;
}

SpectrumSeries SpectrumAccumulator::finalize(double t0, double t1) const {
    if (count_ == 0) throw std::logic_error("SpectrumAccumulator: no samples");
    SpectrumSeries out;
    out.t0 = t0;
    out.t1 = t1;
    out.shells.assign(sums_.size(), 0.0);
    for (std::size_t r = 0; r < sums_.size(); ++r) out.shells[r] = sums_[r] / static_cast<double>(count_);
    return out;
}

SpectrumSeries time_averaged_spectrum(const std::vector<SpectralField>& samples, double T0, double T,
                                      double h) {
    if (!(T > T0)) throw std::invalid_argument("time_averaged_spectrum: empty window");
    if (samples.empty()) throw std::invalid_argument("time_averaged_spectrum: no samples");
    if (h <= 0.0) throw std::invalid_argument("time_averaged_spectrum: spacing must be positive");
    const double m = (T - T0) / h;
    if (std::abs(m - static_cast<double>(samples.size())) > 0.5)
        throw std::invalid_argument("time_averaged_spectrum: samples do not cover the window at spacing h");
    SpectrumAccumulator acc;
    for (const auto& f : samples) acc.add(f);
    return acc.finalize(T0, T);
}

double eddy_turnover(const SpectrumSeries& spectrum) {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t r = 1; r < spectrum.shells.size(); ++r) {
        total += spectrum.shells[r];
        weighted += spectrum.shells[r] / static_cast<double>(r);
    }
    if (!(total > 0.0)) throw std::invalid_argument("eddy_turnover: zero spectrum");
    return kFourPiSq * weighted / std::pow(total, 1.5);
}

FitResult fit_growth(const GrowthSeries& series, double T, double t_lo, double t_hi) {
    if (!(T > 0.0)) throw std::invalid_argument("fit_growth: horizon must be positive");
    const double lo = std::max(0.0, t_lo);
    const double hi = t_hi > 0.0 ? std::min(t_hi, T) : T;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, r1 = 0.0, r2 = 0.0;
    long used = 0;
    for (const auto& [t, e] : series) {
        if (!(t > lo) || t > hi) continue;
        const double s = t / T;
        const double y = e * e;
        const double s2 = s * s;
        m2 += s2;
        m3 += s2 * s;
        m4 += s2 * s2;
        r1 += s * y;
        r2 += s2 * y;
        ++used;
    }
    if (used < 3) throw std::invalid_argument("fit_growth: need at least 3 positive-time samples");
    const double det = m2 * m4 - m3 * m3;
    if (!(det > 1e-12 * m2 * m4))
        throw std::invalid_argument("fit_growth: degenerate design matrix");
    const double a = (m4 * r1 - m3 * r2) / det;  // coefficient of t/T
    const double b = (m2 * r2 - m3 * r1) / det;  // coefficient of (t/T)^2
    FitResult out;
    out.T = T;
    out.C1 = a / T;
    out.C2 = b / (T * T);
    out.eta = out.C2 * T / out.C1;
    return out;
}

double growth_exponent(const GrowthSeries& series, double t_lo, double t_hi) {
    if (!(t_hi > t_lo)) throw std::invalid_argument("growth_exponent: empty window");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long n = 0;
    for (const auto& [t, e] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (!(e > 0.0))
            throw std::invalid_argument("growth_exponent: nonpositive value in the window");
        const double x = std::log(t);
        const double y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("growth_exponent: need at least 2 samples in the window");
    const double denom = sxx - sx * sx / static_cast<double>(n);
    if (!(denom > 0.0)) throw std::invalid_argument("growth_exponent: degenerate window");
    return (sxy - sx * sy / static_cast<double>(n)) / denom;
}

}  // namespace residlab
