#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polsim/detector.hpp"
#include "polsim/measurement.hpp"

namespace polsim {

struct MonteCarlo {
    std::int64_t shots = 100000;
    std::uint64_t seed = 0;
};

/// Per-mechanism contribution to the normalized channel variance, obtained
/// by enabling imperfections cumulatively on top of the ideal chain.
struct NoiseContribution {
    std::string mechanism;
    double delta_normalized;
};

struct ImperfectRecord {
    MeasurementRecord record;
    std::vector<NoiseContribution> breakdown;
    bool saturation_flagged = false;  // compression < 0.1 on some detector
    // Monte Carlo only:
    bool monte_carlo = false;
    double variance_standard_error = 0.0;
};

/// Measures through the chain with realistic detectors and environment.
///
/// Analytic mode averages the linearized channel statistics over the
/// Gaussian phase jitter by quadrature (law of total variance), applies the
/// misalignment offsets to the wave-plate angles, the extinction leakage,
/// per-detector AC gains with saturation compression, the direct
/// power-fluctuation photocurrent noise, and additive dark noise.
/// The normalization reference is the coherent-equivalent channel variance
/// at the same gains, so ideal detectors and environment reduce exactly to
/// measure().
ImperfectRecord measure_imperfect(const TwoModeGaussianState& state,
                                  const MeasurementConfig& config,
                                  const DetectorPairModel& det,
                                  const EnvironmentModel& env);

/// Monte Carlo mode: samples quadrature fluctuations, jitter, power
/// fluctuation and dark noise per shot. Shots use counter-derived random
/// streams, so results are reproducible for a fixed seed regardless of
/// evaluation order. Requires shots >= 1e4.
ImperfectRecord measure_imperfect(const TwoModeGaussianState& state,
                                  const MeasurementConfig& config,
                                  const DetectorPairModel& det,
                                  const EnvironmentModel& env,
                                  const MonteCarlo& mc);

struct PhaseSweepRow {
    double phi;
    Eigen::Vector4d mean;        // Stokes means at this phase
    Eigen::Vector4d normalized;  // measured normalized variances per chain
    Eigen::Vector4d db;
};

/// Sweeps the relative phase between the modes and measures all four chains
/// at each point (analytic mode).
std::vector<PhaseSweepRow> phase_sweep(const TwoModeGaussianState& state,
                                       const DetectorPairModel& det,
                                       const EnvironmentModel& env,
                                       const std::vector<double>& phi_grid);

enum class SweptParameter { HwpOffset, QwpOffset, AcGainRatio };

struct SensitivityRow {
    double value;  // the swept parameter value
    double normalized;
    double db;
};

/// Sweeps one imperfection parameter and records the measured normalized
/// variance of the configured chain.
std::vector<SensitivityRow> mixing_sensitivity(
    const TwoModeGaussianState& state, const MeasurementConfig& config,
    const DetectorPairModel& det, const EnvironmentModel& env,
    SweptParameter parameter, const std::vector<double>& grid);

}  // namespace polsim
