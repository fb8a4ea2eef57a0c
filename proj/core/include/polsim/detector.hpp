#pragma once

namespace polsim {

/// Balanced detector pair behind the PBS.
///
/// Gains are detector2 relative to detector1. Dark noise is stored as the
/// clearance (in dB) of the channel's electronic noise floor below the shot
/// noise of the measured beam; larger is quieter. Saturation compresses the
/// AC response by 1 / (1 + (DC / saturation_dc)^knee_sharpness).
/// The PBS extinction ratio is modeled as a fixed leakage of the orthogonal
/// port into each detector.
struct DetectorPairModel {
    double dc_gain_ratio = 1.005;
    double ac_gain_ratio = 1.06;
    double dark_noise_db = 1e9;       // clearance below shot noise; 1e9 = off
    double saturation_dc = 1e18;      // photon-number units
    double knee_sharpness = 2.0;
    double extinction_db = 1e9;       // 1e9 = perfect PBS

    static DetectorPairModel ideal() {
        return DetectorPairModel{1.0, 1.0, 1e9, 1e18, 2.0, 1e9};
    }

    /// AC compression factor at a given DC level, in (0, 1].
    double compression(double dc_level) const;
};

/// Residual environment imperfections: Gaussian phase jitter the lock cannot
/// cancel, wave-plate misalignment offsets, and relative RMS laser power
/// fluctuation (direct photocurrent noise only; the squeezing-vs-power
/// coupling is not modeled).
struct EnvironmentModel {
    double phase_jitter_std = 0.0;      // radians
    double hwp_misalignment = 0.0;      // radians
    double qwp_misalignment = 0.0;      // radians
    double power_fluctuation_rel = 0.0;

    static EnvironmentModel ideal() { return EnvironmentModel{}; }
    bool is_ideal() const {
        return phase_jitter_std == 0.0 && hwp_misalignment == 0.0 &&
               qwp_misalignment == 0.0 && power_fluctuation_rel == 0.0;
    }
};

void validate(const DetectorPairModel& det);
void validate(const EnvironmentModel& env);

}  // namespace polsim
