#include "polsim/calib.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "polsim/units.hpp"

namespace polsim::calib {

double combine_dc(double dc_1, double dc_2, double dc_gain_ratio) {
    if (!(dc_gain_ratio > 0.0))
        throw std::invalid_argument("combine_dc: gain ratio must be > 0");
    return dc_1 + dc_2 / dc_gain_ratio;
}

FitResult fit_shot_noise(const CalibrationRecord& rec,
                         const RegionPolicy& policy) {
    if (rec.samples.size() < 5)
        throw std::runtime_error("fit_shot_noise: need at least 5 samples");
    for (const Sample& s : rec.samples)
        if (s.dc < 0.0)
            throw std::runtime_error("fit_shot_noise: negative DC level");

    std::vector<Sample> sorted = rec.samples;
    std::sort(sorted.begin(), sorted.end(),
              [](const Sample& a, const Sample& b) { return a.dc < b.dc; });

    // Low end: drop samples dominated by the dark-noise floor.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (rec.dark_noise_power <=
            policy.dark_fraction_max * sorted[i].ac_power)
            keep.push_back(i);
    if (keep.size() < 3)
        throw std::runtime_error(
            "fit_shot_noise: fewer than 3 points above the dark-noise floor");

    // High end: drop the saturated range where the local slope collapses.
    // Slopes span `stride` points so sample noise does not fake a knee, and
    // the median is recomputed as the tail shrinks: a long saturated run
    // would otherwise drag the reference slope down and survive the cut.
    const std::size_t stride = std::max<std::size_t>(1, keep.size() / 10);
    const auto local_slope = [&](std::size_t k) {
        const Sample& a = sorted[keep[k]];
        const Sample& b = sorted[keep[k + stride]];
        if (!(b.dc > a.dc))
            throw std::runtime_error("fit_shot_noise: degenerate DC levels");
        return (b.ac_power - a.ac_power) / (b.dc - a.dc);
    };
    if (keep.size() <= stride)
        throw std::runtime_error("fit_shot_noise: degenerate DC levels");
    std::vector<double> slopes;
    for (std::size_t k = 0; k + stride < keep.size(); ++k)
        slopes.push_back(local_slope(k));
    const auto median_of = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    while (slopes.size() >= 2 &&
           (slopes.back() <= 0.0 ||
            slopes.back() < policy.slope_ratio_min * median_of(slopes))) {
        keep.pop_back();
        slopes.pop_back();
    }
    if (median_of(slopes) <= 0.0)
        throw std::runtime_error(
            "fit_shot_noise: non-monotone or negative-slope data");
    if (keep.size() < 3)
        throw std::runtime_error(
            "fit_shot_noise: no valid region after saturation exclusion");

    // Weighted least squares, AC = a*DC + b.
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i : keep) {
        const double w = policy.variance_weighted
                             ? 1.0 / std::max(1e-300, sorted[i].ac_power *
                                                          sorted[i].ac_power)
                             : 1.0;
        sw += w;
        sx += w * sorted[i].dc;
        sy += w * sorted[i].ac_power;
        sxx += w * sorted[i].dc * sorted[i].dc;
        sxy += w * sorted[i].dc * sorted[i].ac_power;
    }
    const double denom = sw * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw std::runtime_error("fit_shot_noise: singular normal equations");

    FitResult fit;
    fit.slope = (sw * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / sw;
    if (fit.slope <= 0.0)
        throw std::runtime_error("fit_shot_noise: fitted slope is not positive");
    fit.retained = keep;
    fit.n_used = keep.size();
    double ss = 0.0, mx = 0.0;
    for (std::size_t i : keep) {
        const double r = sorted[i].ac_power - fit.predict(sorted[i].dc);
        ss += r * r;
        mx = std::max(mx, std::abs(r));
    }
    fit.rms_residual = std::sqrt(ss / double(keep.size()));
    fit.max_residual = mx;
    return fit;
}

CalibrationRecord read_record_csv(std::istream& in) {
    CalibrationRecord rec;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("dark_noise=");
            if (pos != std::string::npos)
                rec.dark_noise_power =
                    std::stod(line.substr(pos + std::string("dark_noise=").size()));
            else
                rec.metadata += line.substr(1) + "\n";
            continue;
        }
        if (!header_seen) {
            if (line.find("dc") == std::string::npos)
                throw std::runtime_error(
                    "calibration csv line " + std::to_string(lineno) +
                    ": expected header 'dc,ac_power'");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::runtime_error("calibration csv line " +
                                     std::to_string(lineno) +
                                     ": expected 'dc,ac_power'");
        try {
            rec.samples.push_back({std::stod(a), std::stod(b)});
        } catch (const std::exception&) {
            throw std::runtime_error("calibration csv line " +
                                     std::to_string(lineno) +
                                     ": malformed number");
        }
    }
    return rec;
}

CalibrationRecord read_record_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open calibration file: " + path);
    return read_record_csv(in);
}

std::string format_report(const CalibrationRecord& rec, const FitResult& fit) {
    std::ostringstream os;
    os << "shot-noise calibration fit\n"
       << "  samples:        " << rec.samples.size() << " (" << fit.n_used
       << " retained)\n"
       << "  dark noise:     " << rec.dark_noise_power << "\n"
       << "  slope:          " << fit.slope << "\n"
       << "  intercept:      " << fit.intercept << "\n"
       << "  rms residual:   " << fit.rms_residual << "\n"
       << "  max residual:   " << fit.max_residual << "\n";
    if (!rec.metadata.empty()) os << "  metadata:\n" << rec.metadata;
    return os.str();
}

}  // namespace polsim::calib
