#include "ghb/spectral.hpp"

#include <algorithm>
#include <stdexcept>

namespace ghb {

IndexedCoeffs convolve_truncated(const IndexedCoeffs& x, const IndexedCoeffs& y, int keep) {
    IndexedCoeffs out(-keep, keep);
    for (int k = -keep; k <= keep; ++k) {
        Complex acc{0.0, 0.0};
        const int m_lo = std::max(x.lo(), k - y.hi());
        const int m_hi = std::min(x.hi(), k - y.lo());
        for (int m = m_lo; m <= m_hi; ++m) acc += x.at(m) * y.at(k - m);
        out.set(k, acc);
    }
    return out;
}

SpectralSolution::SpectralSolution(int truncation, std::vector<Complex> a, std::vector<Complex> b,
                                   std::vector<Complex> c, ModelParams params, Loading loading)
    : truncation_(truncation),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      params_(params),
      loading_(loading) {
    const auto h = static_cast<std::size_t>(truncation_);
    if (truncation_ < 1 || a_.size() != h || b_.size() != h || c_.size() != h)
        throw std::invalid_argument("SpectralSolution: coefficient arrays must have length H");
    if (a_[0].imag() != 0.0 || b_[0].imag() != 0.0)
        throw std::invalid_argument("SpectralSolution: zero-harmonic coefficients must be real");
}

Complex SpectralSolution::s11_harmonic(int n) const {
    if (n % 2 != 0) return {0.0, 0.0};
    const int k = std::abs(n) / 2;
    if (k >= truncation_) return {0.0, 0.0};
    const Complex v = a_[static_cast<std::size_t>(k)];
    return n < 0 ? std::conj(v) : v;
}

Complex SpectralSolution::s22_harmonic(int n) const {
    if (n % 2 != 0) return {0.0, 0.0};
    const int k = std::abs(n) / 2;
    if (k >= truncation_) return {0.0, 0.0};
    const Complex v = b_[static_cast<std::size_t>(k)];
    return n < 0 ? std::conj(v) : v;
}

Complex SpectralSolution::s12_harmonic(int n) const {
    if (n % 2 == 0) return {0.0, 0.0};
    const int k = (std::abs(n) - 1) / 2;
    if (k >= truncation_) return {0.0, 0.0};
    const Complex v = c_[static_cast<std::size_t>(k)];
    return n < 0 ? std::conj(v) : v;
}

CoefficientSets to_coefficient_sets(const SpectralSolution& solution) {
    const int h = solution.truncation();
    const int n_max = 2 * h - 1;
    CoefficientSets sets;
    sets.s11.assign(static_cast<std::size_t>(n_max) + 1, {0.0, 0.0});
    sets.s22.assign(static_cast<std::size_t>(n_max) + 1, {0.0, 0.0});
    sets.s12.assign(static_cast<std::size_t>(n_max) + 1, {0.0, 0.0});
    for (int k = 0; k < h; ++k) {
        sets.s11[static_cast<std::size_t>(2 * k)] = solution.a()[static_cast<std::size_t>(k)];
        sets.s22[static_cast<std::size_t>(2 * k)] = solution.b()[static_cast<std::size_t>(k)];
        sets.s12[static_cast<std::size_t>(2 * k + 1)] = solution.c()[static_cast<std::size_t>(k)];
    }
    return sets;
}

}  // namespace ghb
