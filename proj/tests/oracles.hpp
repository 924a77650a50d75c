#pragma once

// Test-only reference implementations: direct evaluation of the defining
// sums.  Deliberately slow and independent of the library's FFT path.

#include <cmath>
#include <complex>

#include "residlab/filters.hpp"
#include "residlab/rng.hpp"
#include "residlab/solver.hpp"
#include "residlab/spectral_field.hpp"

namespace residlab::testing {

inline PhysicalField slow_to_physical(const SpectralField& f, int M) {
    const int K = f.truncation();
    PhysicalField out(M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const double x1 = 2.0 * std::numbers::pi * i / M;
            const double x2 = 2.0 * std::numbers::pi * j / M;
            std::complex<double> acc = 0.0;
            for (int k1 = -K; k1 <= K; ++k1)
                for (int k2 = -K; k2 <= K; ++k2) {
                    if (k1 == 0 && k2 == 0) continue;
                    acc += f.coeff(k1, k2) * std::polar(1.0, k1 * x1 + k2 * x2);
                }
            out.at(i, j) = acc.real();
        }
    }
    return out;
}

inline SpectralField slow_to_spectral(const PhysicalField& g, int K) {
    const int M = g.M;
    SpectralField out(K);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const WaveIndex k = out.mode_of(idx);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                const double phase = 2.0 * std::numbers::pi * (k.k1 * i + k.k2 * j) / M;
                acc += g.at(i, j) * std::polar(1.0, -phase);
            }
        out.data()[idx] = acc / (static_cast<double>(M) * M);
    }
    return out;
}

/// c_k = sum_{p+q=k, p,q in the truncation} a_p b_q.
inline SpectralField brute_convolution(const SpectralField& a, const SpectralField& b) {
    const int K = a.truncation();
    SpectralField out(K);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const WaveIndex k = out.mode_of(idx);
        std::complex<double> acc = 0.0;
        for (int p1 = -K; p1 <= K; ++p1)
            for (int p2 = -K; p2 <= K; ++p2) {
                if (p1 == 0 && p2 == 0) continue;
                const int q1 = k.k1 - p1, q2 = k.k2 - p2;
                if (!b.in_grid(q1, q2)) continue;
                acc += a.coeff(p1, p2) * b.coeff(q1, q2);
            }
        out.data()[idx] = acc;
    }
    return out;
}

/// (u . grad omega)_k = sum_{p+q=k} (i q . u_p) omega_q with the Biot-Savart
/// velocity u_p = i (p2, -p1) omega_p / |p|^2.
inline SpectralField brute_advection(const SpectralField& omega) {
    const int K = omega.truncation();
    SpectralField out(K);
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        std::complex<double> acc = 0.0;
        for (int p1 = -K; p1 <= K; ++p1)
            for (int p2 = -K; p2 <= K; ++p2) {
                if (p1 == 0 && p2 == 0) continue;
                const int q1 = k.k1 - p1, q2 = k.k2 - p2;
                if (!omega.in_grid(q1, q2)) continue;
                const double psq = static_cast<double>(ksq_of(p1, p2));
                const std::complex<double> u1 = I * static_cast<double>(p2) * omega.coeff(p1, p2) / psq;
                const std::complex<double> u2 = -I * static_cast<double>(p1) * omega.coeff(p1, p2) / psq;
                acc += (I * static_cast<double>(q1) * u1 + I * static_cast<double>(q2) * u2) *
                       omega.coeff(q1, q2);
            }
        out.data()[idx] = acc;
    }
    return out;
}

/// Same with the advecting velocity filtered per mode: ubar_p = H(|p|^2) u_p.
inline SpectralField brute_advection_filtered(const SpectralField& omega, const FilterSpec& spec) {
    const int K = omega.truncation();
    SpectralField out(K);
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const WaveIndex k = omega.mode_of(idx);
        std::complex<double> acc = 0.0;
        for (int p1 = -K; p1 <= K; ++p1)
            for (int p2 = -K; p2 <= K; ++p2) {
                if (p1 == 0 && p2 == 0) continue;
                const int q1 = k.k1 - p1, q2 = k.k2 - p2;
                if (!omega.in_grid(q1, q2)) continue;
                const double psq = static_cast<double>(ksq_of(p1, p2));
                const double h = symbol(spec, psq);
                const std::complex<double> u1 =
                    h * I * static_cast<double>(p2) * omega.coeff(p1, p2) / psq;
                const std::complex<double> u2 =
                    -h * I * static_cast<double>(p1) * omega.coeff(p1, p2) / psq;
                acc += (I * static_cast<double>(q1) * u1 + I * static_cast<double>(q2) * u2) *
                       omega.coeff(q1, q2);
            }
        out.data()[idx] = acc;
    }
    return out;
}

/// Explicit partial geometric sum sum_{n=0}^{N} rho^n / (1 + alpha^2 ksq).
inline double geometric_symbol_sum(int N, double alpha, double ksq) {
    const double x = alpha * alpha * ksq;
    const double rho = x / (1.0 + x);
    double sum = 0.0;
    double term = 1.0;
    for (int n = 0; n <= N; ++n) {
        sum += term;
        term *= rho;
    }
    return sum / (1.0 + x);
}

/// Random field with coefficients uniform in the complex square of the given
/// half-width; deterministic in the seed.
inline SpectralField random_field(int K, std::uint64_t seed, double scale = 1.0) {
    SpectralField f(K);
    SplitMix64 gen{splitmix64_mix(seed)};
    for (auto& c : f.data())
        c = Complex(scale * (2.0 * gen.next_closed_open() - 1.0),
                    scale * (2.0 * gen.next_closed_open() - 1.0));
    return f;
}

/// 4 pi^2 sum_k Re(conj(a_k) b_k) over the full square.
inline double inner_product(const SpectralField& a, const SpectralField& b) {
    double s = 0.0;
    for (std::size_t idx = 0; idx < a.size(); ++idx)
        s += 2.0 * (std::conj(a.data()[idx]) * b.data()[idx]).real();
    return kFourPiSq * s;
}

}  // namespace residlab::testing
