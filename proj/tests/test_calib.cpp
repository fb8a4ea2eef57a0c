#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "polsim/calib.hpp"
#include "polsim/detector.hpp"
#include "polsim/units.hpp"

using namespace polsim;

namespace {

// Synthetic detector response: shot-noise slope, electronic floor, and the
// AC compression knee from the detector model.
calib::CalibrationRecord synthetic_record(double slope, double dark,
                                          const DetectorPairModel& det,
                                          int n_points, double dc_max,
                                          std::mt19937_64* rng = nullptr,
                                          double rel_noise = 0.0) {
    calib::CalibrationRecord rec;
    rec.dark_noise_power = dark;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 1; k <= n_points; ++k) {
        const double dc = dc_max * k / n_points;
        const double comp = det.compression(dc);
        double ac = slope * dc * comp * comp + dark;
        if (rng) ac *= 1.0 + rel_noise * g(*rng);
        rec.samples.push_back({dc, ac});
    }
    return rec;
}

}  // namespace

TEST_CASE("exact linear data: slope recovered, all points retained") {
    calib::CalibrationRecord rec;
    for (int k = 1; k <= 10; ++k)
        rec.samples.push_back({0.1 * k, 0.2 * k});
    const auto fit = calib::fit_shot_noise(rec);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.0).scale(1.0));
    CHECK(fit.n_used == 10);
    CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("dark-noise dominated points are dropped at the low end") {
    auto det = DetectorPairModel::ideal();
    const auto rec = synthetic_record(1.0, 0.5, det, 20, 20.0);
    const auto fit = calib::fit_shot_noise(rec);
    // ac = dc + 0.5; dark exceeds 10% of ac for dc < 4.5, so the first four
    // points fall to the floor cut while the clean line is untouched.
    CHECK(fit.n_used == 16);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.predict(40.0) == doctest::Approx(40.5).epsilon(1e-6));
}

TEST_CASE("saturated top range is excluded") {
    auto det = DetectorPairModel::ideal();
    det.saturation_dc = 50.0;
    det.knee_sharpness = 8.0;
    const auto rec = synthetic_record(2.0, 0.0, det, 40, 100.0);
    const auto fit = calib::fit_shot_noise(rec);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.05));
    CHECK(fit.n_used < rec.samples.size());
}

TEST_CASE("fully saturated record is rejected") {
    auto det = DetectorPairModel::ideal();
    det.saturation_dc = 0.1;
    det.knee_sharpness = 4.0;
    const auto rec = synthetic_record(2.0, 0.0, det, 20, 100.0);
    CHECK_THROWS_AS(calib::fit_shot_noise(rec), std::runtime_error);
}

TEST_CASE("too few samples rejected") {
    calib::CalibrationRecord rec;
    for (int k = 1; k <= 4; ++k) rec.samples.push_back({1.0 * k, 2.0 * k});
    CHECK_THROWS_AS(calib::fit_shot_noise(rec), std::runtime_error);
}

TEST_CASE("negative-slope data rejected") {
    calib::CalibrationRecord rec;
    for (int k = 1; k <= 8; ++k)
        rec.samples.push_back({1.0 * k, 10.0 - 1.0 * k});
    CHECK_THROWS_AS(calib::fit_shot_noise(rec), std::runtime_error);
}

TEST_CASE("combine_dc") {
    CHECK(calib::combine_dc(1.0, 1.005, 1.005) == doctest::Approx(2.0));
    CHECK(calib::combine_dc(3.7, 0.0, 1.06) == doctest::Approx(3.7));
    CHECK(calib::combine_dc(1.0, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(calib::combine_dc(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("property: scale equivariance") {
    auto det = DetectorPairModel::ideal();
    det.saturation_dc = 80.0;
    const auto rec = synthetic_record(1.5, 0.2, det, 25, 100.0);
    const auto fit = calib::fit_shot_noise(rec);
    const double cx = 3.0, cy = 7.0;
    calib::CalibrationRecord scaled = rec;
    scaled.dark_noise_power *= cy;
    for (auto& s : scaled.samples) {
        s.dc *= cx;
        s.ac_power *= cy;
    }
    const auto sfit = calib::fit_shot_noise(scaled);
    CHECK(sfit.slope == doctest::Approx(fit.slope * cy / cx).epsilon(1e-9));
    CHECK(sfit.intercept == doctest::Approx(fit.intercept * cy).epsilon(1e-6));
    // Relative (dB) prediction at proportionally scaled DC is unchanged.
    const double r0 = fit.predict(40.0);
    const double r1 = sfit.predict(40.0 * cx);
    CHECK(to_db(r1 / (r0 * cy)) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("property: round trip within 0.2 dB across 100 seeds") {
    auto det = DetectorPairModel::ideal();
    det.saturation_dc = 600.0;
    det.knee_sharpness = 8.0;
    const double true_slope = 2.5, dark = 0.4;
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const auto rec =
            synthetic_record(true_slope, dark, det, 40, 700.0, &rng, 0.01);
        // Multiplicative record noise is heteroscedastic; weight accordingly.
        calib::RegionPolicy policy;
        policy.variance_weighted = true;
        const auto fit = calib::fit_shot_noise(rec, policy);
        // Middle-decade prediction against the dark-corrected ground truth.
        for (const double dc : {20.0, 50.0, 100.0}) {
            const double err_db =
                std::abs(to_db(fit.predict(dc) / (true_slope * dc + dark)));
            if (err_db > 0.2) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("property: extra saturated points barely move the slope") {
    auto det = DetectorPairModel::ideal();
    det.saturation_dc = 60.0;
    det.knee_sharpness = 8.0;
    const auto base = synthetic_record(2.0, 0.1, det, 30, 45.0);
    auto extended = base;
    for (int k = 1; k <= 10; ++k) {
        const double dc = 60.0 + 10.0 * k;
        const double comp = det.compression(dc);
        extended.samples.push_back({dc, 2.0 * dc * comp * comp + 0.1});
    }
    const auto f0 = calib::fit_shot_noise(base);
    const auto f1 = calib::fit_shot_noise(extended);
    CHECK(std::abs(f1.slope - f0.slope) / f0.slope < 0.01);
}

TEST_CASE("csv reader") {
    std::istringstream in(
        "# analysis frequency 17.5 MHz\n"
        "# dark_noise=0.25\n"
        "dc,ac_power\n"
        "1.0,2.1\n"
        "2.0,4.2\n");
    const auto rec = calib::read_record_csv(in);
    REQUIRE(rec.samples.size() == 2);
    CHECK(rec.dark_noise_power == doctest::Approx(0.25));
    CHECK(rec.samples[1].dc == doctest::Approx(2.0));
    CHECK(rec.samples[1].ac_power == doctest::Approx(4.2));
}

TEST_CASE("csv reader rejects malformed rows with a line number") {
    std::istringstream in(
        "dc,ac_power\n"
        "1.0,2.0\n"
        "oops\n");
    try {
        calib::read_record_csv(in);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("report mentions the fit and the retained region") {
    calib::CalibrationRecord rec;
    for (int k = 1; k <= 10; ++k)
        rec.samples.push_back({0.5 * k, 1.5 * k});
    const auto fit = calib::fit_shot_noise(rec);
    const auto report = calib::format_report(rec, fit);
    CHECK(report.find("slope") != std::string::npos);
    CHECK(report.find("intercept") != std::string::npos);
    CHECK(!report.empty());
}
