#pragma once

#include "polsim/state.hpp"

namespace polsim {

/// Canonical two-mode input states used throughout the tests and scenarios:
///   1: x amplitude squeezed with amplitude alpha, y vacuum
///   2: x amplitude squeezed, y coherent, equal amplitudes
///   3: both modes amplitude squeezed, equal amplitudes, zero relative phase
///
/// v_plus / v_minus are the squeezed / anti-squeezed quadrature variances
/// (vacuum = 1). Requires v_plus <= 1 <= v_minus, v_plus * v_minus >= 1 and
/// alpha > 0; throws std::invalid_argument otherwise.
TwoModeGaussianState build_example(int id, double v_plus, double v_minus,
                                   double alpha);

/// build_example(3, ...) with a relative phase phi on the y mode. The y-mode
/// squeezing ellipse co-rotates with the phase, i.e. the mode stays amplitude
/// squeezed along its own mean-field direction.
TwoModeGaussianState build_example3_with_phase(double v_plus, double v_minus,
                                               double alpha, double phi);

}  // namespace polsim
