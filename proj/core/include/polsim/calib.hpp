#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace polsim::calib {

struct Sample {
    double dc;        // DC level, linear units
    double ac_power;  // AC noise power, linear units
};

struct CalibrationRecord {
    std::vector<Sample> samples;
    double dark_noise_power = 0.0;
    std::string metadata;  // analysis frequency / bandwidth annotations
};

/// Shot-noise calibration: linear fit of AC noise power against DC signal
/// restricted to the middle data region.
struct RegionPolicy {
    /// Drop samples where the dark noise exceeds this fraction of the AC
    /// power.
    double dark_fraction_max = 0.10;
    /// Drop the top DC range where the local slope falls below this fraction
    /// of the median local slope (saturation).
    double slope_ratio_min = 0.90;
    /// Weight samples by 1/ac^2 (heteroscedastic records). Off by default;
    /// the reference procedure is a plain linear fit.
    bool variance_weighted = false;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t n_used = 0;
    std::vector<std::size_t> retained;  // indices into the dc-sorted samples
    double rms_residual = 0.0;
    double max_residual = 0.0;

    /// Shot-noise power predicted for a summed DC level.
    double predict(double dc) const { return slope * dc + intercept; }
};

/// Fits AC = a * DC + b on the retained region. Throws std::runtime_error
/// when fewer than 3 points survive selection or the fitted slope is not
/// positive.
FitResult fit_shot_noise(const CalibrationRecord& rec,
                         const RegionPolicy& policy = {});

/// Sums two DC readings, referring detector 2 to detector 1's scale:
/// dc_1 + dc_2 / dc_gain_ratio.
double combine_dc(double dc_1, double dc_2, double dc_gain_ratio);

/// Reads `dc,ac_power` rows; `# dark_noise=<value>` and other `#` lines are
/// annotations. Throws std::runtime_error with a line number on bad input.
CalibrationRecord read_record_csv(std::istream& in);
CalibrationRecord read_record_file(const std::string& path);

/// Plain-text fit report.
std::string format_report(const CalibrationRecord& rec, const FitResult& fit);

}  // namespace polsim::calib
