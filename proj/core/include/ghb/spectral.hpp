#pragma once

#include <complex>
#include <vector>

#include "ghb/model.hpp"

namespace ghb {

using Complex = std::complex<double>;

/// A finite set of complex Fourier coefficients over a contiguous signed
/// harmonic index range. Indices outside the range read as zero, which is
/// exactly the truncation rule used when multiplying Fourier series.
class IndexedCoeffs {
public:
    IndexedCoeffs() : lo_(0), hi_(-1) {}
    IndexedCoeffs(int lo, int hi) : lo_(lo), hi_(hi), c_(hi >= lo ? hi - lo + 1 : 0) {}

    int lo() const { return lo_; }
    int hi() const { return hi_; }

    Complex at(int n) const {
        if (n < lo_ || n > hi_) return {0.0, 0.0};
        return c_[static_cast<std::size_t>(n - lo_)];
    }
    void set(int n, Complex value) { c_.at(static_cast<std::size_t>(n - lo_)) = value; }
    void add(int n, Complex value) { c_.at(static_cast<std::size_t>(n - lo_)) += value; }

private:
    int lo_, hi_;
    std::vector<Complex> c_;
};

/// Truncated convolution (x * y)_k = sum_m x_m y_{k-m} for |k| <= keep.
/// Coefficients outside either operand's range are zero; output harmonics
/// above the bound are discarded.
IndexedCoeffs convolve_truncated(const IndexedCoeffs& x, const IndexedCoeffs& y, int keep);

/// Parity-constrained complex Fourier coefficients of the periodic stress
/// state at truncation H. Only nonnegative harmonics are stored:
///   a[k] <-> sigma11 harmonic 2k,   k = 0..H-1
///   b[k] <-> sigma22 harmonic 2k,   k = 0..H-1
///   c[k] <-> sigma12 harmonic 2k+1, k = 0..H-1
/// Negative harmonics follow by conjugation, so reconstructed stresses are
/// real. a[0] and b[0] carry no imaginary part.
class SpectralSolution {
public:
    SpectralSolution(int truncation, std::vector<Complex> a, std::vector<Complex> b,
                     std::vector<Complex> c, ModelParams params, Loading loading);

    int truncation() const { return truncation_; }
    const std::vector<Complex>& a() const { return a_; }
    const std::vector<Complex>& b() const { return b_; }
    const std::vector<Complex>& c() const { return c_; }
    const ModelParams& params() const { return params_; }
    const Loading& loading() const { return loading_; }

    /// Signed-index accessors; harmonics beyond the ansatz read as zero.
    Complex s11_harmonic(int n) const;  // n even
    Complex s22_harmonic(int n) const;  // n even
    Complex s12_harmonic(int n) const;  // n odd

    int real_unknown_count() const { return 6 * truncation_ - 2; }

private:
    int truncation_;
    std::vector<Complex> a_, b_, c_;
    ModelParams params_;
    Loading loading_;
};

/// Per-channel complex Fourier coefficients indexed directly by harmonic
/// number n >= 0 (entry n of each vector). Forbidden-parity entries are kept
/// as explicit zeros so the three channels share one indexing scheme.
struct CoefficientSets {
    std::vector<Complex> s11;
    std::vector<Complex> s22;
    std::vector<Complex> s12;
};

/// Expand a SpectralSolution into dense nonnegative-harmonic coefficients.
CoefficientSets to_coefficient_sets(const SpectralSolution& solution);

/// One period of the three stresses sampled on the uniform grid
/// times[i] = i * T / N_t. When dimensionless is set the values are
/// sigma/(G*Wi) on the grid t_tilde[i] = i * T_tilde / N_t.
struct Waveform {
    std::vector<double> times;
    std::vector<double> s11;
    std::vector<double> s22;
    std::vector<double> s12;
    bool dimensionless = false;

    int sample_count() const { return static_cast<int>(times.size()); }
    double n1(int i) const { return s11[static_cast<std::size_t>(i)] - s22[static_cast<std::size_t>(i)]; }
    double n2(int i) const { return s22[static_cast<std::size_t>(i)]; }
};

/// Sine/cosine harmonic coefficients in Pa, indexed by harmonic number.
/// Shear entries live at odd n, normal entries at even n; the other slots
/// are zero. F = P - Q and S = Q hold by construction.
struct HarmonicSpectrum {
    std::vector<double> g_prime, g_dprime;  // shear, odd n
    std::vector<double> f_prime, f_dprime;  // N1, even n
    std::vector<double> s_prime, s_dprime;  // N2, even n
    std::vector<double> p_prime, p_dprime;  // raw sigma11, even n
    std::vector<double> q_prime, q_dprime;  // raw sigma22, even n

    int max_harmonic() const { return static_cast<int>(g_prime.size()) - 1; }
};

/// Third-order intrinsic shear coefficients plus the linear moduli, all
/// normalized by G.
struct MaosIntrinsics {
    double g11_prime = 0.0, g11_dprime = 0.0;
    double g31_prime = 0.0, g31_dprime = 0.0;
    double g33_prime = 0.0, g33_dprime = 0.0;
};

}  // namespace ghb
