#include "residlab/filters.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace residlab {

FilterOrder FilterOrder::finite(int n) {
    if (n < 0) throw std::invalid_argument("FilterOrder: order must be >= 0");
    return FilterOrder(n);
}

int FilterOrder::value() const {
    if (is_infinite()) throw std::logic_error("FilterOrder: infinite order has no finite value");
    return n_;
}

FilterOrder FilterOrder::parse(const std::string& token) {
    if (token == "inf" || token == "INF" || token == "Inf") return infinite();
    int n = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
    if (ec != std::errc() || ptr != token.data() + token.size() || n < 0)
        throw std::invalid_argument("FilterOrder: cannot parse order '" + token + "'");
    return finite(n);
}

double FilterSpec::alpha() const {
    return alpha0 * std::sqrt(static_cast<double>(order.value()) + 1.0);
}

namespace {

std::string format_short(double v) {
    char buf[32];
    int n = std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

// Shared kernel: both branches reduce to 1 - e^{-ell} for an exponent
//   ell = (N+1) log(1 + 1/x)   (finite N, x = alpha^2 ksq)
//   ell = 1/(alpha0^2 ksq)     (infinite order).
// The complement e^{-ell} is exact down to the underflow threshold, and the
// symbol switches to -expm1(-ell) when the complement dominates, avoiding
// cancellation on both sides.
double symbol_from_exponent(double ell) {
    if (ell < 0.6931471805599453) return -std::expm1(-ell);
    return 1.0 - std::exp(-ell);
}

double finite_exponent(int order, double x) {
    return (static_cast<double>(order) + 1.0) * std::log1p(1.0 / x);
}

}  // namespace

std::string FilterSpec::label() const {
    return "a" + format_short(alpha0) + "_N" + order.to_string();
}

double raw_symbol(int order, double alpha, double ksq) {
    if (order < 0) throw std::invalid_argument("raw_symbol: order must be >= 0");
    if (alpha < 0.0) throw std::invalid_argument("raw_symbol: alpha must be >= 0");
    if (ksq < 1.0) throw std::invalid_argument("raw_symbol: ksq must be >= 1");
    const double x = alpha * alpha * ksq;
    if (x == 0.0) return 1.0;
    if (order == 0) return 1.0 / (1.0 + x);  // one rounding; pins the half-attenuation anchor
    return symbol_from_exponent(finite_exponent(order, x));
}

double symbol(const FilterSpec& spec, double ksq) {
    if (ksq < 1.0) throw std::invalid_argument("symbol: ksq must be >= 1");
    if (spec.is_identity()) return 1.0;
    if (spec.order.is_infinite())
        return symbol_from_exponent(1.0 / (spec.alpha0 * spec.alpha0 * ksq));
    const int n = spec.order.value();
    const double x = (static_cast<double>(n) + 1.0) * spec.alpha0 * spec.alpha0 * ksq;
    if (n == 0) return 1.0 / (1.0 + x);
    return symbol_from_exponent(finite_exponent(n, x));
}

double symbol_complement(const FilterSpec& spec, double ksq) {
    if (ksq < 1.0) throw std::invalid_argument("symbol_complement: ksq must be >= 1");
    if (spec.is_identity()) return 0.0;
    if (spec.order.is_infinite())
        return std::exp(-1.0 / (spec.alpha0 * spec.alpha0 * ksq));
    const int n = spec.order.value();
    const double x = (static_cast<double>(n) + 1.0) * spec.alpha0 * spec.alpha0 * ksq;
    if (n == 0) return x / (1.0 + x);
    return std::exp(-finite_exponent(n, x));
}

SpectralField filter_field(const FilterSpec& spec, const SpectralField& f) {
    SpectralField out = f;
    auto coeffs = out.data();
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const WaveIndex k = out.mode_of(idx);
        coeffs[idx] *= symbol(spec, static_cast<double>(ksq_of(k)));
    }
    return out;
}

double consistency_error(const FilterSpec& spec, const SpectralField& f) {
    const ModeOrdering& ord = mode_ordering(f.truncation());
    const auto modes = ord.modes();
    double total = 0.0;
    for (int r = 1; r <= ord.max_shell(); ++r) {
        double s = 0.0;
        for (std::size_t i = ord.shell_begin(r); i < ord.shell_end(r); ++i) {
            const WaveIndex k = modes[i];
            const double c = symbol_complement(spec, static_cast<double>(ksq_of(k)));
            s += 2.0 * std::norm(f.data()[f.index_of(k.k1, k.k2)]) * (c * c);
        }
        total += kFourPiSq * s;
    }
    return std::sqrt(total);
}

SymbolTable::SymbolTable(const FilterSpec& spec, int truncation) : spec_(spec), K_(truncation) {
    if (truncation < 1) throw std::invalid_argument("SymbolTable: truncation must be >= 1");
    const long max_ksq = 2L * truncation * truncation;
    table_.assign(static_cast<std::size_t>(max_ksq) + 1, 1.0);
    table_[0] = 1.0;  // never addressed by grid modes
    for (long ksq = 1; ksq <= max_ksq; ++ksq)
        table_[static_cast<std::size_t>(ksq)] = symbol(spec, static_cast<double>(ksq));
}

}  // namespace residlab
