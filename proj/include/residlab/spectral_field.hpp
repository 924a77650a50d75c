#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace residlab {

using Complex = std::complex<double>;

inline constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

/// Integer wavenumber on the 2*pi-periodic square.
struct WaveIndex {
    int k1 = 0;
    int k2 = 0;
    friend bool operator==(const WaveIndex&, const WaveIndex&) = default;
};

inline long ksq_of(int k1, int k2) { return static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2; }
inline long ksq_of(WaveIndex k) { return ksq_of(k.k1, k.k2); }

/// Fourier coefficients of a real, zero-mean scalar on [0,2pi]^2, truncated to
/// the square -K <= k1,k2 <= K with k = 0 excluded.  Only the half-spectrum
/// with k1 > 0, or k1 == 0 and k2 > 0, is stored; the opposite half is the
/// complex conjugate, so the represented field is real by construction and
/// conjugate symmetry cannot be violated.
///
/// Storage order (also the on-disk checkpoint order): first k1 = 0 with
/// k2 = 1..K, then k1 = 1..K each with k2 = -K..K.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(int truncation);

    int truncation() const { return K_; }
    std::size_t size() const { return c_.size(); }

    static bool is_canonical(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }
    bool in_grid(int k1, int k2) const {
        return (k1 != 0 || k2 != 0) && k1 >= -K_ && k1 <= K_ && k2 >= -K_ && k2 <= K_;
    }

    /// Storage index of a canonical mode.
    std::size_t index_of(int k1, int k2) const;
    /// Canonical mode at a storage index.
    WaveIndex mode_of(std::size_t idx) const;

    /// Coefficient at any (k1,k2); conjugated on the implied half, zero at the
    /// origin and outside the truncation.
    Complex coeff(int k1, int k2) const;
    Complex coeff(WaveIndex k) const { return coeff(k.k1, k.k2); }
    /// Assign a coefficient; writing on the implied half stores the conjugate.
    void set_coeff(int k1, int k2, Complex v);

    std::span<const Complex> data() const { return c_; }
    std::span<Complex> data() { return c_; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField f) { return f *= s; }

    bool operator==(const SpectralField&) const = default;

    /// False as soon as any stored coefficient is NaN or infinite.
    bool all_finite() const;

  private:
    int K_ = 0;
    std::vector<Complex> c_;
};

/// Real samples at x_ij = 2*pi*(i,j)/M, row major with i along x1.
struct PhysicalField {
    int M = 0;
    std::vector<double> samples;

    PhysicalField() = default;
    explicit PhysicalField(int grid) : M(grid), samples(static_cast<std::size_t>(grid) * grid, 0.0) {}
    double& at(int i, int j) { return samples[static_cast<std::size_t>(i) * M + j]; }
    double at(int i, int j) const { return samples[static_cast<std::size_t>(i) * M + j]; }
    double mean() const;
};

/// Canonical modes sorted by (|k|^2, k1, k2) and grouped into the shells
/// J_r = { r-0.5 < |k| <= r+0.5 }.  This fixes the floating-point summation
/// order used by every norm and shell sum, so results are reproducible
/// bit for bit.
class ModeOrdering {
  public:
    explicit ModeOrdering(int truncation);

    int truncation() const { return K_; }
    int max_shell() const { return max_shell_; }
    std::span<const WaveIndex> modes() const { return modes_; }

    /// Half-open range of indices into modes() for shell r.
    std::size_t shell_begin(int r) const { return shell_first_[r]; }
    std::size_t shell_end(int r) const { return shell_first_[r + 1]; }
    /// Lattice points of J_r inside the full truncation square (both halves).
    int shell_count_full(int r) const {
        return 2 * static_cast<int>(shell_end(r) - shell_begin(r));
    }

    /// Shell index of |k|^2 (the nearest integer to |k|; shell boundaries
    /// (r+0.5)^2 are never integers, so there are no ties).
    static int shell_of(long ksq);

  private:
    int K_ = 0;
    int max_shell_ = 0;
    std::vector<WaveIndex> modes_;
    std::vector<std::size_t> shell_first_;
};

/// Shared, immutable ordering per truncation (built once, thread safe).
const ModeOrdering& mode_ordering(int truncation);

/// ||f||_{L2}^2 = 4 pi^2 sum_k |coeff(k)|^2 over the full square, accumulated
/// shell by shell in the documented deterministic order.
double l2_norm_sq(const SpectralField& f);
double l2_norm(const SpectralField& f);

/// Per-shell sums 4 pi^2 sum_{J_r} |coeff(k)|^2; entry [0] is always zero.
/// Summed in the same order as l2_norm_sq, so the shell sums add up to the
/// total bit-exactly.
std::vector<double> shell_decompose(const SpectralField& f);

/// Shells of the velocity energy |u_k|^2 = |omega_k|^2 / |k|^2 for a
/// vorticity field.
std::vector<double> shell_decompose_velocity(const SpectralField& omega);

/// (||u||^2, ||omega||^2) for a vorticity field.
std::pair<double, double> energy_enstrophy_of(const SpectralField& omega);

}  // namespace residlab
