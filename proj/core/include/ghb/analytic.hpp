#pragma once

#include "ghb/model.hpp"
#include "ghb/spectral.hpp"

namespace ghb {

struct LveModuli {
    double storage;  // G'/G
    double loss;     // G''/G
};

/// Maxwell linear moduli normalized by G:
///   G'/G = De^2 / (1 + De^2),  G''/G = De / (1 + De^2).
LveModuli lve_moduli(double deborah);

/// Third-order intrinsic shear coefficients of the Giesekus model,
/// normalized by G. All third-order entries carry an alpha prefactor and
/// vanish in the UCM limit.
MaosIntrinsics maos_shear_intrinsics(double anisotropy, double deborah);

/// Relaxation modulus G(t, gamma) after a step strain of magnitude gamma.
double step_strain_modulus(const ModelParams& params, double strain, double t);

/// Initial guess for the harmonic-balance solve built from the asymptotic
/// weakly nonlinear response: C1 and C3 from the intrinsic shear
/// coefficients, A0 and A2 from the N1 relations
///   F''0 = G'(w),  F'2 = G''(w) - G''(2w)/2,  F''2 = -G'(w) + G'(2w)/2,
/// B identically zero, and every harmonic above the third zero.
/// Requires H >= 2 so the third harmonic fits the ansatz.
SpectralSolution maos_initial_guess(const ModelParams& params, const Loading& loading,
                                    int truncation);

}  // namespace ghb
