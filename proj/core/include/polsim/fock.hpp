#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "polsim/stokes.hpp"

namespace polsim::fock {

/// Truncated Fock-space oracle for the Stokes algebra. Two-mode basis
/// |n_x, n_y> with n <= cutoff per mode, index n_x * (cutoff+1) + n_y.

/// Single-mode lowering operator, dimension (cutoff+1).
Eigen::MatrixXcd lowering(int cutoff);

/// Amplitude vector of a displaced squeezed state D(alpha) S(r, theta) |0>.
/// At theta = 0 the amplitude quadrature satisfies V(dX+) = exp(-2 r).
/// Throws std::runtime_error when the boundary occupancy |c_cutoff|^2
/// exceeds `leakage_threshold`.
Eigen::VectorXcd coherent_squeezed_state(std::complex<double> alpha, double r,
                                         double theta, int cutoff,
                                         double leakage_threshold = 1e-8);

/// Quadrature moments measured directly on a single-mode vector.
struct QuadratureMoments {
    double mean_plus, mean_minus, var_plus, var_minus;
    double mean_n, var_n;
};
QuadratureMoments quadrature_moments(const Eigen::VectorXcd& psi);

/// Normalized two-mode state.
struct FockState {
    int cutoff = 0;
    Eigen::VectorXcd amplitudes;  // dimension (cutoff+1)^2, unit norm

    /// Probability on the n_x = cutoff or n_y = cutoff boundary shells.
    double boundary_occupancy() const;
    bool truncation_safe(double leakage_threshold = 1e-8) const {
        return boundary_occupancy() < leakage_threshold;
    }
};

/// Product state of two single-mode vectors (equal cutoffs).
FockState product_state(const Eigen::VectorXcd& psi_x,
                        const Eigen::VectorXcd& psi_y);

/// Applies the Stokes operator S_j matrix-free to a two-mode vector.
Eigen::VectorXcd apply_stokes(int j, const FockState& state);

/// Exact Stokes means and variances from matrix expectation values.
/// Throws std::runtime_error for truncation-unsafe states.
StokesEstimate stokes_exact(const FockState& state,
                            double leakage_threshold = 1e-8);

/// Cutoff heuristic keeping the boundary leakage of a displaced squeezed
/// state with |alpha| = a below ~1e-8.
int auto_cutoff(double alpha_abs);

/// Dense two-mode Stokes matrices, Hermitian within truncation.
struct FockOperator {
    int cutoff = 0;
    Eigen::MatrixXcd matrix;
};
FockOperator stokes_operator(int j, int cutoff);
FockOperator number_operator_x(int cutoff);
FockOperator number_operator_y(int cutoff);

/// Max-norm residuals of the operator identities, evaluated on the interior
/// subspace n_x + n_y <= cutoff - 2 where truncation artifacts cannot reach:
///   [S0, Sj] = 0,
///   [S1, S2] = 2i S3 (and cyclic),
///   S1^2 + S2^2 + S3^2 = S0^2 + 2 S0.
struct IdentityReport {
    double max_commutator_s0 = 0.0;   // worst of [S0,S1],[S0,S2],[S0,S3]
    double max_commutator_su2 = 0.0;  // worst cyclic [Sj,Sk] - 2i Sl
    double poincare_residual = 0.0;
    double max_hermiticity = 0.0;     // worst |S - S^dagger| entry
};
IdentityReport verify_operator_identities(int cutoff);

/// One row of a linearization-vs-oracle comparison.
struct ConvergenceRow {
    double alpha;
    Eigen::Vector4d linearized;  // normalized variances
    Eigen::Vector4d exact;
    Eigen::Vector4d difference;  // |exact - linearized|
};

/// Compares stokes_linearized against the exact oracle on the canonical
/// example states (see build_example) across amplitudes. r is the squeeze
/// parameter, V(dX+) = exp(-2r).
std::vector<ConvergenceRow> convergence_study(int example_id,
                                              const std::vector<double>& alphas,
                                              double r);

}  // namespace polsim::fock
