#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "polsim/scenario.hpp"
#include "polsim/units.hpp"

using namespace polsim;
using scenario::ValidationError;

namespace {

const char* kMinimal = R"({
  "name": "t",
  "state": {"example": 3, "alpha": 50.0, "squeezing_db": -3.0},
  "measurements": [{"target": "S1"}]
})";

}  // namespace

TEST_CASE("parse: minimal document") {
    const auto sc = scenario::parse(kMinimal);
    CHECK(sc.name == "t");
    CHECK(sc.measurements.size() == 1);
    CHECK(sc.measurements[0].target == StokesIndex::S1);
    CHECK(std::abs(sc.state.alpha_x) == doctest::Approx(50.0));
    CHECK(sc.state.cov(0, 0) == doctest::Approx(from_db(-3.0)));
}

TEST_CASE("parse: empty measurement list is a validation error") {
    CHECK_THROWS_AS(scenario::parse(R"({
      "name": "t",
      "state": {"example": 1, "alpha": 10.0, "squeezing_db": -3.0},
      "measurements": []
    })"),
                    ValidationError);
}

TEST_CASE("parse: monte carlo requires a seed") {
    CHECK_THROWS_AS(scenario::parse(R"({
      "name": "t",
      "state": {"example": 1, "alpha": 10.0, "squeezing_db": -3.0},
      "measurements": [{"target": "S1", "mode": "monte_carlo"}]
    })"),
                    ValidationError);
    CHECK_NOTHROW(scenario::parse(R"({
      "name": "t",
      "state": {"example": 1, "alpha": 10.0, "squeezing_db": -3.0},
      "measurements": [{"target": "S1", "mode": "monte_carlo", "seed": 7}]
    })"));
}

TEST_CASE("parse: malformed syntax and bad fields") {
    CHECK_THROWS_AS(scenario::parse("{"), ValidationError);
    CHECK_THROWS_AS(scenario::parse(R"({
      "name": "t",
      "state": {"example": 9, "alpha": 10.0, "squeezing_db": -3.0},
      "measurements": [{"target": "S1"}]
    })"),
                    ValidationError);
    CHECK_THROWS_AS(scenario::parse(R"({
      "name": "t",
      "state": {"example": 1, "alpha": 10.0, "squeezing_db": -3.0},
      "measurements": [{"target": "S7"}]
    })"),
                    ValidationError);
}

TEST_CASE("run: diluted squeezing row carries value and classification") {
    // Squeezed plus coherent at -3 dB input: (V+ + 1)/2 = 0.7506, -1.25 dB,
    // polarization squeezed against the bright S2 direction.
    const auto sc = scenario::parse(*scenario::builtin_scenario("example2_3db"));
    const auto res = scenario::run(sc);
    const auto* s1 = [&]() -> const scenario::MeasurementRow* {
        for (const auto& row : res.rows)
            if (row.spec.target == StokesIndex::S1) return &row;
        return nullptr;
    }();
    REQUIRE(s1 != nullptr);
    CHECK(s1->result.record.normalized == doctest::Approx(0.7506).epsilon(1e-3));
    CHECK(s1->result.record.db == doctest::Approx(-1.2466).epsilon(1e-3));
    CHECK(s1->classification == SqueezingClass::PolarizationSqueezed);
    REQUIRE(s1->conjugate_partner.has_value());
    CHECK(*s1->conjugate_partner == 3);
}

TEST_CASE("run: single-beam scenario puts S2 and S3 at shot noise") {
    const auto sc = scenario::parse(*scenario::builtin_scenario("example1"));
    const auto res = scenario::run(sc);
    for (const auto& row : res.rows) {
        if (row.spec.target == StokesIndex::S2 ||
            row.spec.target == StokesIndex::S3) {
            CHECK(row.result.record.db == doctest::Approx(0.0).scale(1.0));
            CHECK(row.classification == SqueezingClass::NotSqueezed);
        }
    }
}

TEST_CASE("run: results table carries schema comment and header") {
    const auto res = scenario::run(scenario::parse(kMinimal));
    CHECK(res.results_csv.find("# schema=polsim-results-1") !=
          std::string::npos);
    CHECK(res.results_csv.find("target,mode,mean,variance") !=
          std::string::npos);
    CHECK(!res.summary.empty());
}

TEST_CASE("run: determinism for fixed seeds") {
    const char* doc = R"({
      "name": "t",
      "state": {"example": 3, "alpha": 50.0, "squeezing_db": -3.0},
      "environment": {"phase_jitter_std_deg": 0.3},
      "measurements": [
        {"target": "S2", "mode": "monte_carlo", "shots": 20000, "seed": 11}
      ]
    })";
    const auto a = scenario::run(scenario::parse(doc));
    const auto b = scenario::run(scenario::parse(doc));
    CHECK(a.results_csv == b.results_csv);
    CHECK(a.summary == b.summary);
}

TEST_CASE("run: phase sweep and mixing tables are emitted on demand") {
    const auto sweep = scenario::run(
        scenario::parse(*scenario::builtin_scenario("phase_sweep")));
    REQUIRE(sweep.phase_sweep_csv.has_value());
    CHECK(sweep.phase_sweep_csv->find("phi_deg") != std::string::npos);
    const auto mix = scenario::run(
        scenario::parse(*scenario::builtin_scenario("mixing_sensitivity")));
    REQUIRE(mix.mixing_sweep_csv.has_value());
}

TEST_CASE("run: breakdown table is emitted when requested") {
    const auto sc = scenario::parse(*scenario::builtin_scenario("paper_fig6"));
    CHECK(sc.breakdown);
    const auto res = scenario::run(sc);
    REQUIRE(res.breakdown_csv.has_value());
    CHECK(res.breakdown_csv->find("mechanism") != std::string::npos);
}

TEST_CASE("builtin scenarios parse and are listed") {
    const auto names = scenario::builtin_names();
    CHECK(names.size() == 7);
    for (const auto& n : names) {
        const std::string* text = scenario::builtin_scenario(n);
        REQUIRE(text != nullptr);
        CHECK_NOTHROW(scenario::parse(*text));
    }
    CHECK(scenario::builtin_scenario("nope") == nullptr);
}

TEST_CASE("poincare export: coherent cloud is isotropic at <n>") {
    TwoModeGaussianState s;
    s.alpha_x = 40.0;
    s.alpha_y = 30.0;
    const std::string cloud = scenario::poincare_export(s, 20000, 99);
    std::istringstream in(cloud);
    std::string line;
    double sum[3] = {0, 0, 0}, sumsq[3] = {0, 0, 0};
    int n = 0;
    double coherent_radius = 0.0;
    while (std::getline(in, line)) {
        const auto pos = line.find("coherent_radius=");
        if (line.rfind("#", 0) == 0 && pos != std::string::npos)
            coherent_radius =
                std::stod(line.substr(pos + std::string("coherent_radius=").size()));
        if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
        double v[3];
        std::istringstream row(line);
        std::string tok;
        for (double& x : v) {
            std::getline(row, tok, ',');
            x = std::stod(tok);
        }
        for (int j = 0; j < 3; ++j) {
            sum[j] += v[j];
            sumsq[j] += v[j] * v[j];
        }
        ++n;
    }
    REQUIRE(n == 20000);
    const double mean_photons = 40.0 * 40.0 + 30.0 * 30.0;
    CHECK(coherent_radius ==
          doctest::Approx(std::sqrt(3.0 * mean_photons)).epsilon(1e-9));
    // Means at the classical Stokes vector, unit-shot variance per axis.
    const double want_mean[3] = {40. * 40 - 30. * 30, 2 * 40. * 30, 0.0};
    for (int j = 0; j < 3; ++j) {
        const double m = sum[j] / n;
        const double var = sumsq[j] / n - m * m;
        CHECK(m == doctest::Approx(want_mean[j]).scale(mean_photons).epsilon(0.02));
        CHECK(var / mean_photons == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("poincare export: squeezed pair cloud anisotropy is V-/V+") {
    const auto sc = scenario::parse(kMinimal);
    const std::string cloud = scenario::poincare_export(sc.state, 40000, 5);
    std::istringstream in(cloud);
    std::string line;
    double mean1 = 0, mean3 = 0, sq1 = 0, sq3 = 0;
    int n = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
        double v[3];
        std::istringstream row(line);
        std::string tok;
        for (double& x : v) {
            std::getline(row, tok, ',');
            x = std::stod(tok);
        }
        mean1 += v[0];
        mean3 += v[2];
        sq1 += v[0] * v[0];
        sq3 += v[2] * v[2];
        ++n;
    }
    REQUIRE(n == 40000);
    const double v1 = sq1 / n - (mean1 / n) * (mean1 / n);
    const double v3 = sq3 / n - (mean3 / n) * (mean3 / n);
    const double v_plus = from_db(-3.0);
    CHECK(v3 / v1 == doctest::Approx((1.0 / v_plus) / v_plus).epsilon(0.1));
}

TEST_CASE("poincare export: single sample still renders") {
    TwoModeGaussianState s;
    s.alpha_x = 5.0;
    const std::string cloud = scenario::poincare_export(s, 1, 3);
    CHECK(cloud.find("# mean_s1=") != std::string::npos);
    CHECK_THROWS_AS(scenario::poincare_export(s, 0, 3), ValidationError);
}
