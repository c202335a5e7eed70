#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghb/analytic.hpp"
#include "ghb/model.hpp"
#include "ghb/spectral.hpp"

namespace ghb {

/// Real unknown vector of length 6H-2 packing, in fixed order,
///   [Re A0, Re A2, Im A2, ..., Re A_{2H-2}, Im A_{2H-2},
///    Re B0, Re B2, Im B2, ..., Re B_{2H-2}, Im B_{2H-2},
///    Re C1, Im C1, ..., Re C_{2H-1}, Im C_{2H-1}].
using UnknownVector = Eigen::VectorXd;

struct PackedCoefficients {
    std::vector<Complex> a;
    std::vector<Complex> b;
    std::vector<Complex> c;
};

UnknownVector pack_unknowns(const PackedCoefficients& coeffs);
PackedCoefficients unpack_unknowns(const UnknownVector& v, int truncation);

UnknownVector pack_solution(const SpectralSolution& solution);
SpectralSolution unpack_solution(const UnknownVector& v, int truncation,
                                 const ModelParams& params, const Loading& loading);

struct SolverOptions {
    double tolerance = 1e-12;          // infinity norm on the residual
    int max_iterations = 200;
    double backtrack_factor = 0.5;     // step shrink per line-search trial
    double min_step_fraction = 1e-4;   // smallest admissible step scale
    std::vector<double> ladder_rungs = {0.1, 1.0, 2.2, 4.6};

    void validate() const;
};

class SolverFailure : public std::runtime_error {
public:
    enum class Reason { MaxIterations, SingularJacobian };

    SolverFailure(Reason reason, std::string message, UnknownVector best_iterate,
                  int iterations, double residual_norm)
        : std::runtime_error(std::move(message)),
          reason(reason),
          best_iterate(std::move(best_iterate)),
          iterations(iterations),
          residual_norm(residual_norm) {}

    Reason reason;
    UnknownVector best_iterate;
    int iterations;
    double residual_norm;
    double failed_rung = -1.0;  // set by ladder_solve
};

/// Residual of the harmonic-balance system, packed like UnknownVector:
/// one real entry for each zero harmonic of the normal equations, a
/// (Re, Im) pair for every other retained harmonic. Quadratic terms come
/// from truncated convolutions of the coefficient sets.
Eigen::VectorXd residual(const UnknownVector& v, const ModelParams& params,
                         const Loading& loading, int truncation);

/// Exact Jacobian of residual() with respect to the packed real unknowns.
/// The system is quadratic, so the Jacobian is affine in v.
Eigen::MatrixXd jacobian(const UnknownVector& v, const ModelParams& params,
                         const Loading& loading, int truncation);

struct NewtonResult {
    UnknownVector unknowns;
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Damped Newton iteration on residual() with the analytic Jacobian and a
/// backtracking line search on the residual 2-norm. Iterates are never
/// accepted unless finite.
NewtonResult newton_solve(const UnknownVector& v0, const ModelParams& params,
                          const Loading& loading, int truncation,
                          const SolverOptions& options = {});

/// Amplitude-ladder continuation: MAOS-seeded solve at the first rung,
/// re-seeding each subsequent rung below the target amplitude with the
/// previous converged solution, then the target itself. Amplitudes at or
/// below the first rung solve directly from the MAOS guess.
SpectralSolution ladder_solve(const ModelParams& params, const Loading& loading,
                              int truncation, const SolverOptions& options = {});

/// Strain amplitudes visited by ladder_solve, ending at the target.
std::vector<double> ladder_schedule(double target_amplitude, const std::vector<double>& rungs);

}  // namespace ghb
