#pragma once

#include <Eigen/Dense>
#include <optional>

#include "polsim/state.hpp"

namespace polsim {

/// Means and variances of the four Stokes parameters S0..S3.
///
/// Variances follow the linearization convention: they are quadratic forms
/// of the quadrature covariance and scale with the mean photon number.
/// `normalized` divides by the shot noise <n> and is absent when <n> = 0.
struct StokesEstimate {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Vector4d variance = Eigen::Vector4d::Zero();
    double shot_noise = 0.0;
    std::optional<Eigen::Vector4d> normalized;
};

/// Rows are the coefficient vectors c_j of the first-order Stokes
/// fluctuations dS_j = c_j . (dX+_x, dX-_x, dX+_y, dX-_y) for arbitrary
/// complex amplitudes. V_j = c_j^T cov c_j.
Eigen::Matrix4d stokes_noise_coefficients(std::complex<double> alpha_x,
                                          std::complex<double> alpha_y);

/// Classical Stokes means of an amplitude pair.
Eigen::Vector4d stokes_classical_mean(std::complex<double> alpha_x,
                                      std::complex<double> alpha_y);

/// First-order (linearized) Stokes statistics of a Gaussian state.
/// Throws std::invalid_argument if the covariance is not symmetric PSD.
StokesEstimate stokes_linearized(const TwoModeGaussianState& state);

/// Mean Stokes vector for real amplitudes with relative phase phi:
/// (ax^2+ay^2, ax^2-ay^2, 2 ax ay cos phi, 2 ax ay sin phi).
Eigen::Vector4d stokes_means_vs_phase(double alpha_x, double alpha_y,
                                      double phi);

}  // namespace polsim
