#pragma once

#include <Eigen/Dense>
#include <complex>

namespace polsim {

/// Bright two-mode Gaussian state of the x/y polarization modes.
///
/// The state is the classical amplitude pair (alpha_x, alpha_y) plus a 4x4
/// covariance matrix of the quadrature noise vector
///     (dX+_x, dX-_x, dX+_y, dX-_y),
/// vacuum normalized: the identity matrix is the coherent/vacuum state.
/// A relative phase between the modes lives in arg(alpha_y) - arg(alpha_x);
/// the covariance is always expressed in the fixed lab quadrature frame.
struct TwoModeGaussianState {
    std::complex<double> alpha_x{0.0, 0.0};
    std::complex<double> alpha_y{0.0, 0.0};
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();

    /// Mean photon number |alpha_x|^2 + |alpha_y|^2.
    double mean_photons() const {
        return std::norm(alpha_x) + std::norm(alpha_y);
    }
};

/// Checks symmetry, positive semidefiniteness and the per-mode uncertainty
/// bound V(dX+) V(dX-) - C^2 >= 1. Throws std::invalid_argument on failure.
void validate(const TwoModeGaussianState& state, double tol = 1e-9);

/// Non-throwing variant of validate().
bool is_valid(const TwoModeGaussianState& state, double tol = 1e-9);

}  // namespace polsim
