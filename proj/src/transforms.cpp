#include "residlab/transforms.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace residlab {

namespace {

// FFTW plan creation/destruction is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

RealGrid::RealGrid(int grid) : M_(grid) {
    if (grid < 1) throw std::invalid_argument("RealGrid: grid must be positive");
    p_ = static_cast<double*>(fftw_malloc(sizeof(double) * size()));
    if (!p_) throw std::bad_alloc();
    std::memset(p_, 0, sizeof(double) * size());
}

RealGrid::~RealGrid() {
    if (p_) fftw_free(p_);
}

RealGrid::RealGrid(RealGrid&& o) noexcept : M_(o.M_), p_(o.p_) {
    o.M_ = 0;
    o.p_ = nullptr;
}

RealGrid& RealGrid::operator=(RealGrid&& o) noexcept {
    if (this != &o) {
        if (p_) fftw_free(p_);
        M_ = o.M_;
        p_ = o.p_;
        o.M_ = 0;
        o.p_ = nullptr;
    }
    return *this;
}

struct FourierWorkspace::Impl {
    fftw_complex* cbuf = nullptr;   // M x (M/2+1), rows indexed by k1 mod M
    double* rbuf = nullptr;         // planning buffer, also convenience scratch
    fftw_plan c2r = nullptr;
    fftw_plan r2c = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (c2r) fftw_destroy_plan(c2r);
        if (r2c) fftw_destroy_plan(r2c);
        if (cbuf) fftw_free(cbuf);
        if (rbuf) fftw_free(rbuf);
    }
};

FourierWorkspace::FourierWorkspace(int truncation, int grid)
    : impl_(std::make_unique<Impl>()), K_(truncation), M_(grid) {
    if (truncation < 1) throw std::invalid_argument("FourierWorkspace: truncation must be >= 1");
    if (grid < 2 * truncation + 2)
        throw std::invalid_argument("FourierWorkspace: grid " + std::to_string(grid) +
                                    " too small for truncation " + std::to_string(truncation) +
                                    " (need grid >= 2K+2)");
    const std::size_t nc = static_cast<std::size_t>(M_) * (M_ / 2 + 1);
    impl_->cbuf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc));
    impl_->rbuf = static_cast<double*>(fftw_malloc(sizeof(double) * M_ * M_));
    if (!impl_->cbuf || !impl_->rbuf) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->c2r = fftw_plan_dft_c2r_2d(M_, M_, impl_->cbuf, impl_->rbuf, FFTW_ESTIMATE);
    impl_->r2c = fftw_plan_dft_r2c_2d(M_, M_, impl_->rbuf, impl_->cbuf, FFTW_ESTIMATE);
    if (!impl_->c2r || !impl_->r2c) throw std::runtime_error("FourierWorkspace: FFTW planning failed");
}

FourierWorkspace::~FourierWorkspace() = default;
FourierWorkspace::FourierWorkspace(FourierWorkspace&&) noexcept = default;
FourierWorkspace& FourierWorkspace::operator=(FourierWorkspace&&) noexcept = default;

void FourierWorkspace::synthesize(const SpectralField& f, RealGrid& out) const {
    if (f.truncation() != K_) throw std::invalid_argument("synthesize: truncation mismatch");
    if (out.grid() != M_) throw std::invalid_argument("synthesize: grid mismatch");
    const int half = M_ / 2 + 1;
    const std::size_t nc = static_cast<std::size_t>(M_) * half;
    std::memset(impl_->cbuf, 0, sizeof(fftw_complex) * nc);
    // Pack the non-negative k2 columns; rows carry k1 of both signs (mod M).
    // The k2 = 0 column is Hermitian in k1 by construction, as c2r requires.
    for (int k2 = 0; k2 <= K_; ++k2) {
        for (int k1 = -K_; k1 <= K_; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            const int row = k1 >= 0 ? k1 : k1 + M_;
            const Complex v = f.coeff(k1, k2);
            impl_->cbuf[static_cast<std::size_t>(row) * half + k2][0] = v.real();
            impl_->cbuf[static_cast<std::size_t>(row) * half + k2][1] = v.imag();
        }
    }
    fftw_execute_dft_c2r(impl_->c2r, impl_->cbuf, out.data());
}

void FourierWorkspace::analyze(const RealGrid& in, SpectralField& out) const {
    if (in.grid() != M_) throw std::invalid_argument("analyze: grid mismatch");
    if (out.truncation() != K_) out = SpectralField(K_);
    const int half = M_ / 2 + 1;
    fftw_execute_dft_r2c(impl_->r2c, const_cast<double*>(in.data()), impl_->cbuf);
    const double scale = 1.0 / (static_cast<double>(M_) * M_);
    auto fetch = [&](int k1, int k2) -> Complex {
        // r2c stores only k2 >= 0; reach the other half through conjugation.
        bool conj = false;
        if (k2 < 0) {
            k1 = -k1;
            k2 = -k2;
            conj = true;
        }
        const int row = k1 >= 0 ? k1 : k1 + M_;
        const double re = impl_->cbuf[static_cast<std::size_t>(row) * half + k2][0];
        const double im = impl_->cbuf[static_cast<std::size_t>(row) * half + k2][1];
        const Complex v{re * scale, im * scale};
        return conj ? std::conj(v) : v;
    };
    auto coeffs = out.data();
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const WaveIndex k = out.mode_of(idx);
        coeffs[idx] = fetch(k.k1, k.k2);
    }
}

PhysicalField FourierWorkspace::to_physical(const SpectralField& f) const {
    RealGrid g(M_);
    synthesize(f, g);
    PhysicalField out(M_);
    std::memcpy(out.samples.data(), g.data(), sizeof(double) * g.size());
    return out;
}

SpectralField FourierWorkspace::to_spectral(const PhysicalField& g) const {
    if (g.M != M_) throw std::invalid_argument("to_spectral: grid mismatch");
    RealGrid buf(M_);
    std::memcpy(buf.data(), g.samples.data(), sizeof(double) * buf.size());
    SpectralField out(K_);
    analyze(buf, out);
    return out;
}

SpectralField FourierWorkspace::dealiased_product(const SpectralField& a, const SpectralField& b) {
    if (a.truncation() != K_ || b.truncation() != K_)
        throw std::invalid_argument("dealiased_product: truncation mismatch");
    if (M_ < 3 * K_ + 1)
        throw std::invalid_argument("dealiased_product: grid " + std::to_string(M_) +
                                    " violates the two-thirds rule for truncation " + std::to_string(K_));
    RealGrid ga(M_), gb(M_);
    synthesize(a, ga);
    synthesize(b, gb);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] *= gb[i];
    SpectralField out(K_);
    analyze(ga, out);
    return out;
}

int dealias_grid(int truncation) {
    int m = 3 * truncation + 1;
    if (m % 2 != 0) ++m;
    return m;
}

PhysicalField to_physical(const SpectralField& f, int grid) {
    return FourierWorkspace(f.truncation(), grid).to_physical(f);
}

SpectralField to_spectral(const PhysicalField& g, int truncation) {
    if (2 * truncation + 2 > g.M)
        throw std::invalid_argument("to_spectral: truncation too large for grid");
    return FourierWorkspace(truncation, g.M).to_spectral(g);
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
    if (a.truncation() != b.truncation())
        throw std::invalid_argument("dealiased_product: truncation mismatch");
    FourierWorkspace ws(a.truncation(), dealias_grid(a.truncation()));
    return ws.dealiased_product(a, b);
}

}  // namespace residlab
