#pragma once

#include <cstddef>
#include <memory>

#include "residlab/spectral_field.hpp"

namespace residlab {

/// Aligned real scratch grid for use with FourierWorkspace (fftw_malloc
/// storage so new-array execution keeps a single plan per direction).
class RealGrid {
  public:
    RealGrid() = default;
    explicit RealGrid(int grid);
    ~RealGrid();
    RealGrid(RealGrid&&) noexcept;
    RealGrid& operator=(RealGrid&&) noexcept;
    RealGrid(const RealGrid&) = delete;
    RealGrid& operator=(const RealGrid&) = delete;

    int grid() const { return M_; }
    std::size_t size() const { return static_cast<std::size_t>(M_) * M_; }
    double* data() { return p_; }
    const double* data() const { return p_; }
    double& operator[](std::size_t i) { return p_[i]; }
    double operator[](std::size_t i) const { return p_[i]; }

  private:
    int M_ = 0;
    double* p_ = nullptr;
};

/// FFTW-backed transform pair between the truncated square spectrum and an
/// M x M collocation grid.  Plans use FFTW_ESTIMATE only, so the algorithm
/// (and therefore every output bit) is a deterministic function of the input,
/// independent of run, machine load, or thread count.
class FourierWorkspace {
  public:
    /// Requires grid >= 2*truncation + 2 so the truncation embeds without
    /// wrap-around.
    FourierWorkspace(int truncation, int grid);
    ~FourierWorkspace();
    FourierWorkspace(FourierWorkspace&&) noexcept;
    FourierWorkspace& operator=(FourierWorkspace&&) noexcept;
    FourierWorkspace(const FourierWorkspace&) = delete;
    FourierWorkspace& operator=(const FourierWorkspace&) = delete;

    int truncation() const { return K_; }
    int grid() const { return M_; }

    RealGrid make_grid() const { return RealGrid(M_); }

    /// out(x_ij) = sum_k coeff(k) e^{i k.x_ij}; real by conjugate symmetry.
    void synthesize(const SpectralField& f, RealGrid& out) const;
    /// Truncated DFT coefficients of the grid samples; k = 0 is discarded.
    void analyze(const RealGrid& in, SpectralField& out) const;

    PhysicalField to_physical(const SpectralField& f) const;
    SpectralField to_spectral(const PhysicalField& g) const;

    /// Truncation of the exact convolution a*b (quadratic product with no
    /// aliasing); requires grid >= 3*truncation + 1.
    SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int K_ = 0;
    int M_ = 0;
};

/// Smallest even working grid satisfying the two-thirds rule for quadratic
/// products at truncation K.
int dealias_grid(int truncation);

PhysicalField to_physical(const SpectralField& f, int grid);
SpectralField to_spectral(const PhysicalField& g, int truncation);
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

}  // namespace residlab
