#include "residlab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace residlab {

SpectralField::SpectralField(int truncation) : K_(truncation) {
    if (truncation < 1) throw std::invalid_argument("SpectralField: truncation must be >= 1");
    c_.assign(static_cast<std::size_t>(2) * K_ * (K_ + 1), Complex(0.0, 0.0));
}

std::size_t SpectralField::index_of(int k1, int k2) const {
    // k1 = 0 row first (k2 = 1..K), then k1 = 1..K rows (k2 = -K..K).
    if (k1 == 0) return static_cast<std::size_t>(k2 - 1);
    return static_cast<std::size_t>(K_) + static_cast<std::size_t>(k1 - 1) * (2 * K_ + 1) +
           static_cast<std::size_t>(k2 + K_);
}

WaveIndex SpectralField::mode_of(std::size_t idx) const {
    if (idx < static_cast<std::size_t>(K_)) return {0, static_cast<int>(idx) + 1};
    const std::size_t rest = idx - K_;
    const int k1 = 1 + static_cast<int>(rest / (2 * K_ + 1));
    const int k2 = static_cast<int>(rest % (2 * K_ + 1)) - K_;
    return {k1, k2};
}

Complex SpectralField::coeff(int k1, int k2) const {
    if (!in_grid(k1, k2)) return {0.0, 0.0};
    if (is_canonical(k1, k2)) return c_[index_of(k1, k2)];
    return std::conj(c_[index_of(-k1, -k2)]);
}

void SpectralField::set_coeff(int k1, int k2, Complex v) {
    if (!in_grid(k1, k2)) {
        if (k1 == 0 && k2 == 0 && v == Complex(0.0, 0.0)) return;  // zero-mean convention
        throw std::invalid_argument("SpectralField::set_coeff: index outside the truncation");
    }
    if (is_canonical(k1, k2))
        c_[index_of(k1, k2)] = v;
    else
        c_[index_of(-k1, -k2)] = std::conj(v);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (K_ != o.K_) throw std::invalid_argument("SpectralField: mismatched truncations");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (K_ != o.K_) throw std::invalid_argument("SpectralField: mismatched truncations");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

bool SpectralField::all_finite() const {
    double acc = 0.0;
    for (const auto& v : c_) acc += v.real() + v.imag();  // NaN/Inf propagate
    return std::isfinite(acc);
}

double PhysicalField::mean() const {
    double s = 0.0;
    for (double v : samples) s += v;
    return samples.empty() ? 0.0 : s / static_cast<double>(samples.size());
}

int ModeOrdering::shell_of(long ksq) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(ksq))));
    // Exact integer check of (r-0.5)^2 < ksq <= (r+0.5)^2.
    while (static_cast<long>(r) * r - r + 1 > ksq) --r;
    while (static_cast<long>(r) * r + r < ksq) ++r;
    return r;
}

ModeOrdering::ModeOrdering(int truncation) : K_(truncation) {
    if (truncation < 1) throw std::invalid_argument("ModeOrdering: truncation must be >= 1");
    modes_.reserve(static_cast<std::size_t>(2) * K_ * (K_ + 1));
    for (int k2 = 1; k2 <= K_; ++k2) modes_.push_back({0, k2});
    for (int k1 = 1; k1 <= K_; ++k1)
        for (int k2 = -K_; k2 <= K_; ++k2) modes_.push_back({k1, k2});
    std::sort(modes_.begin(), modes_.end(), [](WaveIndex a, WaveIndex b) {
        const long asq = ksq_of(a), bsq = ksq_of(b);
        if (asq != bsq) return asq < bsq;
        if (a.k1 != b.k1) return a.k1 < b.k1;
        return a.k2 < b.k2;
    });
    max_shell_ = shell_of(ksq_of(modes_.back()));
    shell_first_.assign(static_cast<std::size_t>(max_shell_) + 2, modes_.size());
    int current = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        const int r = shell_of(ksq_of(modes_[i]));
        while (current < r) shell_first_[++current] = i;
    }
    shell_first_[0] = 0;
}

const ModeOrdering& mode_ordering(int truncation) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<const ModeOrdering>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[truncation];
    if (!slot) slot = std::make_unique<const ModeOrdering>(truncation);
    return *slot;
}

namespace {

// Shell-grouped accumulation shared by the norms and the shell sums; the
// conjugate mode doubles each stored |coeff|^2 (2*x is exact in binary).
template <typename PerShell>
double accumulate_shells(const SpectralField& f, bool weight_inv_ksq, PerShell&& emit) {
    const ModeOrdering& ord = mode_ordering(f.truncation());
    const auto modes = ord.modes();
    double total = 0.0;
    for (int r = 1; r <= ord.max_shell(); ++r) {
        double s = 0.0;
        for (std::size_t i = ord.shell_begin(r); i < ord.shell_end(r); ++i) {
            const WaveIndex k = modes[i];
            const double a2 = 2.0 * std::norm(f.data()[f.index_of(k.k1, k.k2)]);
            s += weight_inv_ksq ? a2 / static_cast<double>(ksq_of(k)) : a2;
        }
        const double shell_value = kFourPiSq * s;
        emit(r, shell_value);
        total += shell_value;
    }
    return total;
}

}  // namespace

double l2_norm_sq(const SpectralField& f) {
    return accumulate_shells(f, false, [](int, double) {});
}

double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }

std::vector<double> shell_decompose(const SpectralField& f) {
    std::vector<double> shells(static_cast<std::size_t>(mode_ordering(f.truncation()).max_shell()) + 1, 0.0);
    accumulate_shells(f, false, [&](int r, double v) { shells[r] = v; });
    return shells;
}

std::vector<double> shell_decompose_velocity(const SpectralField& omega) {
    std::vector<double> shells(static_cast<std::size_t>(mode_ordering(omega.truncation()).max_shell()) + 1, 0.0);
    accumulate_shells(omega, true, [&](int r, double v) { shells[r] = v; });
    return shells;
}

std::pair<double, double> energy_enstrophy_of(const SpectralField& omega) {
    const double energy = accumulate_shells(omega, true, [](int, double) {});
    const double enstrophy = accumulate_shells(omega, false, [](int, double) {});
    return {energy, enstrophy};
}

}  // namespace residlab
