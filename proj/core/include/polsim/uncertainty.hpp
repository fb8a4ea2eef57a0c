#pragma once

#include <array>
#include <optional>

#include "polsim/stokes.hpp"

namespace polsim {

enum class SqueezingClass {
    NotSqueezed,
    CoherentRelative,   // variance below the equally bright coherent state
    PolarizationSqueezed  // additionally below the state's MUS bound
};

const char* to_string(SqueezingClass c);

/// Uncertainty products, minimum-uncertainty-state bounds and per-parameter
/// squeezing classification, all in shot-noise-normalized form.
///
/// products[i] and bounds[i] pair up as
///   V1 V2 >= |<S3>|^2 / <n>^2,
///   V2 V3 >= |<S1>|^2 / <n>^2,
///   V3 V1 >= |<S2>|^2 / <n>^2.
struct UncertaintyReport {
    std::array<double, 3> products{};
    std::array<double, 3> bounds{};
    std::array<double, 3> mus_deficits{};  // products - bounds, >= 0 physically
    std::array<SqueezingClass, 4> classification{};
    /// For each PolarizationSqueezed j in {1,2,3}, index of the anti-squeezed
    /// conjugate partner k.
    std::array<std::optional<int>, 4> conjugate_partner{};
    /// True when all three mean bounds vanish, so no parameter can be
    /// polarization squeezed regardless of its variance.
    bool degenerate_bounds = false;
};

/// Classifies each Stokes parameter. Requires est.shot_noise > 0.
///
/// CoherentRelative: V~_j < 1. PolarizationSqueezed (j in {1,2,3}): there
/// is an assignment (j,k,l) of distinct indices with
/// V~_j < |<S_l>|/<n> < V~_k. S0 commutes with everything and can be at
/// most CoherentRelative. Strict inequalities carry a relative guard band
/// of 1e-9 against boundary flapping.
UncertaintyReport uncertainty_report(const StokesEstimate& est);

}  // namespace polsim
