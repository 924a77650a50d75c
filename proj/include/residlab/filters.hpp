#pragma once

#include <string>
#include <vector>

#include "residlab/spectral_field.hpp"

namespace residlab {

/// Deconvolution order: a nonnegative integer or the limit value "inf".
class FilterOrder {
  public:
    static FilterOrder finite(int n);
    static FilterOrder infinite() { return FilterOrder(-1); }
    static FilterOrder parse(const std::string& token);

    bool is_infinite() const { return n_ < 0; }
    int value() const;  // finite orders only
    std::string to_string() const { return is_infinite() ? "inf" : std::to_string(n_); }

    friend bool operator==(FilterOrder a, FilterOrder b) { return a.n_ == b.n_; }

  private:
    explicit FilterOrder(int n) : n_(n) {}
    int n_;  // -1 encodes the infinite order
};

/// A smoothing filter: deconvolution order N plus the effective averaging
/// length alpha0.  The raw length is alpha = alpha0 * sqrt(N+1); rescaling by
/// sqrt(N+1) pins the high-frequency attenuation independently of N.
/// alpha0 == 0 is the identity filter (symbol exactly 1), the limit used by
/// the residual null control.
struct FilterSpec {
    FilterOrder order = FilterOrder::finite(0);
    double alpha0 = 0.0;

    bool is_identity() const { return alpha0 == 0.0; }
    double alpha() const;  // finite orders only
    /// Column label used in CSV output, e.g. "a0.04_N0", "a0.2_Ninf".
    std::string label() const;

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Attenuation factor of the order-N deconvolution filter with raw length
/// alpha at squared wavenumber ksq:
///   D_{N}/(1 + alpha^2 ksq) = 1 - (alpha^2 ksq / (1 + alpha^2 ksq))^{N+1},
/// the closed form of the geometric sum.  Value in (0,1]; 1 when alpha = 0.
double raw_symbol(int order, double alpha, double ksq);

/// Rescaled symbol H_{N}(ksq) of a FilterSpec: raw_symbol at
/// alpha = alpha0*sqrt(N+1) for finite N, and 1 - exp(-1/(alpha0^2 ksq)) for
/// the infinite order.
double symbol(const FilterSpec& spec, double ksq);

/// 1 - symbol, evaluated in closed form so values far below 1 ulp of 1
/// (e.g. e^{-400}) come out exact instead of cancelling to zero.
double symbol_complement(const FilterSpec& spec, double ksq);

/// Per-mode multiplication by the (real, even) symbol.
SpectralField filter_field(const FilterSpec& spec, const SpectralField& f);

/// || f - H_N f ||_{L2}, accumulated per mode as |coeff| * (1 - symbol) with
/// the stable complement, in the deterministic mode order.
double consistency_error(const FilterSpec& spec, const SpectralField& f);

/// Symbol per integer |k|^2 for one (spec, truncation), built once so the
/// per-step loops never re-evaluate powers.
class SymbolTable {
  public:
    SymbolTable(const FilterSpec& spec, int truncation);
    const FilterSpec& spec() const { return spec_; }
    int truncation() const { return K_; }
    double at_ksq(long ksq) const { return table_[static_cast<std::size_t>(ksq)]; }

  private:
    FilterSpec spec_;
    int K_;
    std::vector<double> table_;
};

}  // namespace residlab
