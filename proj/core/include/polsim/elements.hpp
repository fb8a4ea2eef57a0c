#pragma once

#include <Eigen/Dense>
#include <complex>
#include <variant>

#include "polsim/state.hpp"

namespace polsim {

using Jones = Eigen::Matrix2cd;

/// Mode-transformation conventions (fast axis at angle theta from x):
///   HWP(theta) = R(theta) diag(1,-1) R(-theta)
///   QWP(theta) = R(theta) diag(1, i) R(-theta)
///   PhaseShifter(phi): diag(1, e^{i phi}) on the y mode
///   Rotation(theta): R(theta)
/// Global phases are dropped; only the relative phase between the modes is
/// physically meaningful here.
struct HalfWavePlate { double theta = 0.0; };
struct QuarterWavePlate { double theta = 0.0; };
struct PhaseShifter { double phi = 0.0; };
struct Rotation { double theta = 0.0; };
/// Independent transmissivities per mode; vacuum mixes in through the
/// open port. eta in [0,1].
struct Loss { double eta_x = 1.0; double eta_y = 1.0; };

using OpticalElement = std::variant<HalfWavePlate, QuarterWavePlate,
                                    PhaseShifter, Rotation, Loss>;

Jones jones_matrix(const HalfWavePlate& e);
Jones jones_matrix(const QuarterWavePlate& e);
Jones jones_matrix(const PhaseShifter& e);
Jones jones_matrix(const Rotation& e);

/// 4x4 quadrature-space action induced by a 2x2 mode transformation.
Eigen::Matrix4d quadrature_action(const Jones& u);

/// Propagates a state through one element. Unitary kinds map the means by
/// U and the covariance by the induced orthogonal-symplectic matrix; Loss
/// applies alpha -> sqrt(eta) alpha, cov -> H cov H^T + (I - H^2).
TwoModeGaussianState apply_element(const TwoModeGaussianState& state,
                                   const OpticalElement& elem);

/// Applies a general 2x2 unitary mode transformation.
TwoModeGaussianState apply_unitary(const TwoModeGaussianState& state,
                                   const Jones& u);

}  // namespace polsim
