#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polsim/elements.hpp"
#include "polsim/examples.hpp"
#include "polsim/stokes.hpp"
#include "polsim/uncertainty.hpp"
#include "polsim/units.hpp"

using namespace polsim;

namespace {

// Random physical state: random squeezing through a random mode unitary, so
// the covariance is a valid (pure-state) Gaussian covariance by construction.
TwoModeGaussianState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> r01(0.0, 1.0);
    TwoModeGaussianState s;
    s.alpha_x = std::complex<double>(10.0 * u(rng), 10.0 * u(rng));
    s.alpha_y = std::complex<double>(10.0 * u(rng), 10.0 * u(rng));

    Eigen::Vector4d d;
    const double r1 = 0.8 * r01(rng), r2 = 0.8 * r01(rng);
    d << std::exp(-2.0 * r1), std::exp(2.0 * r1), std::exp(-2.0 * r2),
        std::exp(2.0 * r2);

    // Random mode unitary -> orthogonal-symplectic congruence.
    const double th = kPi * u(rng), ph = kPi * u(rng), la = kPi * u(rng);
    Eigen::Matrix2cd v;
    const std::complex<double> i(0.0, 1.0);
    v << std::cos(th) * std::exp(i * ph), -std::sin(th) * std::exp(i * la),
         std::sin(th) * std::exp(-i * la), std::cos(th) * std::exp(-i * ph);
    Eigen::Matrix4d m;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            m(2 * a, 2 * b) = v(a, b).real();
            m(2 * a, 2 * b + 1) = -v(a, b).imag();
            m(2 * a + 1, 2 * b) = v(a, b).imag();
            m(2 * a + 1, 2 * b + 1) = v(a, b).real();
        }
    s.cov = m * d.asDiagonal() * m.transpose();
    return s;
}

}  // namespace

TEST_CASE("coherent state has unit normalized variances") {
    TwoModeGaussianState s;
    s.alpha_x = std::complex<double>(3.0, 1.0);
    s.alpha_y = std::complex<double>(-2.0, 0.5);
    const StokesEstimate est = stokes_linearized(s);
    REQUIRE(est.normalized.has_value());
    for (int j = 0; j < 4; ++j)
        CHECK((*est.normalized)[j] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-mode vacuum: zero means and variances, undefined normalized") {
    TwoModeGaussianState s;  // alpha = 0, cov = I
    const StokesEstimate est = stokes_linearized(s);
    CHECK(est.mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK(est.variance.cwiseAbs().maxCoeff() == 0.0);
    CHECK(est.shot_noise == 0.0);
    CHECK(!est.normalized.has_value());
}

TEST_CASE("3 dB input squeezing dilutes to 1.25 dB with a coherent partner") {
    const double v_plus = 0.5012;
    const auto s = build_example(2, v_plus, 1.0 / v_plus, 50.0);
    const StokesEstimate est = stokes_linearized(s);
    const double expected = (v_plus + 1.0) / 2.0;
    CHECK((*est.normalized)[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK((*est.normalized)[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK((*est.normalized)[2] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(to_db(expected) == doctest::Approx(-1.2466).epsilon(1e-3));
}

TEST_CASE("squeezed pair keeps the full input squeezing") {
    const auto s = build_example(3, 0.5012, 2.1, 50.0);
    const StokesEstimate est = stokes_linearized(s);
    for (int j = 0; j < 3; ++j)
        CHECK((*est.normalized)[j] == doctest::Approx(0.5012).epsilon(1e-12));
    CHECK((*est.normalized)[3] == doctest::Approx(2.1).epsilon(1e-12));
}

TEST_CASE("stokes_means_vs_phase") {
    const double a = 3.0;
    SUBCASE("in-phase pair") {
        const Eigen::Vector4d m = stokes_means_vs_phase(a, a, 0.0);
        CHECK(m[0] == doctest::Approx(2 * a * a));
        CHECK(m[1] == doctest::Approx(0.0));
        CHECK(m[2] == doctest::Approx(2 * a * a));
        CHECK(m[3] == doctest::Approx(0.0));
    }
    SUBCASE("single mode is phase independent") {
        const Eigen::Vector4d m = stokes_means_vs_phase(a, 0.0, 1.234);
        CHECK(m[0] == doctest::Approx(a * a));
        CHECK(m[1] == doctest::Approx(a * a));
        CHECK(m[2] == doctest::Approx(0.0));
        CHECK(m[3] == doctest::Approx(0.0));
    }
    SUBCASE("quarter phase rotates S2 into S3") {
        const Eigen::Vector4d m = stokes_means_vs_phase(a, a, kPi / 2.0);
        CHECK(m[2] == doctest::Approx(0.0));
        CHECK(m[3] == doctest::Approx(2 * a * a));
    }
}

TEST_CASE("classification: squeezed mode plus vacuum") {
    const auto s = build_example(1, 0.5, 2.0, 10.0);
    const auto rep = uncertainty_report(stokes_linearized(s));
    CHECK(rep.classification[0] == SqueezingClass::CoherentRelative);
    CHECK(rep.classification[1] == SqueezingClass::CoherentRelative);
    CHECK(rep.classification[2] == SqueezingClass::NotSqueezed);
    CHECK(rep.classification[3] == SqueezingClass::NotSqueezed);
    // V2 V3 = 1 exactly against the bound |<S1>|^2/<n>^2 = 1.
    CHECK(rep.products[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.bounds[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.products[0] <= 1.0 + 1e-12);
    CHECK(rep.bounds[0] == doctest::Approx(0.0));
    CHECK(rep.products[2] <= 1.0 + 1e-12);
    CHECK(rep.bounds[2] == doctest::Approx(0.0));
}

TEST_CASE("classification: squeezed pair is polarization squeezed in S1") {
    const auto s = build_example(3, 0.5, 2.0, 10.0);
    const auto rep = uncertainty_report(stokes_linearized(s));
    CHECK(rep.classification[1] == SqueezingClass::PolarizationSqueezed);
    REQUIRE(rep.conjugate_partner[1].has_value());
    CHECK(*rep.conjugate_partner[1] == 3);
    CHECK(rep.classification[0] == SqueezingClass::CoherentRelative);
    CHECK(rep.classification[2] == SqueezingClass::CoherentRelative);
    CHECK(rep.classification[3] == SqueezingClass::NotSqueezed);
}

TEST_CASE("classification: coherent state is nowhere squeezed") {
    TwoModeGaussianState s;
    s.alpha_x = 5.0;
    s.alpha_y = 2.0;
    const auto rep = uncertainty_report(stokes_linearized(s));
    for (int j = 0; j < 4; ++j)
        CHECK(rep.classification[j] == SqueezingClass::NotSqueezed);
    for (int i = 0; i < 3; ++i)
        CHECK(rep.products[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate bounds are reported, not polarization squeezing") {
    // All three polarization means zero: every uncertainty bound collapses,
    // so no direction can certify polarization squeezing.
    TwoModeGaussianState s;
    s.alpha_x = 3.0;
    s.cov.diagonal() << 0.5, 2.0, 1.0, 1.0;
    auto est = stokes_linearized(s);
    est.mean[1] = est.mean[2] = est.mean[3] = 0.0;
    const auto rep = uncertainty_report(est);
    CHECK(rep.degenerate_bounds);
    for (int j = 1; j < 4; ++j)
        CHECK(rep.classification[j] != SqueezingClass::PolarizationSqueezed);
}

TEST_CASE("build_example rejects unphysical inputs") {
    CHECK_THROWS_AS(build_example(0, 0.5, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_example(1, 0.5, 1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_example(1, 1.2, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_example(2, 0.5, 2.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(build_example(2, 1.0, 1.0, 10.0));
}

TEST_CASE("build_example constructions") {
    const auto s1 = build_example(1, 0.5, 2.0, 10.0);
    CHECK(s1.alpha_y == std::complex<double>(0.0, 0.0));
    CHECK(s1.cov.diagonal().isApprox(Eigen::Vector4d(0.5, 2.0, 1.0, 1.0)));
    const auto s3 = build_example(3, 0.5, 2.0, 10.0);
    CHECK(s3.cov.diagonal().isApprox(Eigen::Vector4d(0.5, 2.0, 0.5, 2.0)));
}

TEST_CASE("rejects invalid covariance") {
    TwoModeGaussianState s;
    s.alpha_x = 1.0;
    s.cov(0, 1) = 0.5;  // asymmetric
    CHECK_THROWS_AS(stokes_linearized(s), std::invalid_argument);
    s.cov = -Eigen::Matrix4d::Identity();
    CHECK_THROWS_AS(stokes_linearized(s), std::invalid_argument);
    s.cov = 0.5 * Eigen::Matrix4d::Identity();  // below vacuum everywhere
    CHECK_THROWS_AS(stokes_linearized(s), std::invalid_argument);
}

TEST_CASE("property: MUS deficits nonnegative and Poincare mean identity") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const TwoModeGaussianState s = random_state(rng);
        const StokesEstimate est = stokes_linearized(s);
        if (est.shot_noise < 1e-6) continue;
        const auto rep = uncertainty_report(est);
        for (int i = 0; i < 3; ++i) CHECK(rep.mus_deficits[i] >= -1e-9);
        // Classical means of a pure amplitude pair lie on the sphere.
        const double lhs = est.mean[1] * est.mean[1] +
                           est.mean[2] * est.mean[2] +
                           est.mean[3] * est.mean[3];
        CHECK(lhs == doctest::Approx(est.mean[0] * est.mean[0]).epsilon(1e-9));
    }
}

TEST_CASE("property: V0, V1 insensitive to relative phase for block-diagonal cov") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        TwoModeGaussianState s;
        s.alpha_x = 4.0;
        s.alpha_y = 3.0;
        s.cov.diagonal() << 0.6, 1.8, 0.9, 1.2;
        const StokesEstimate base = stokes_linearized(s);
        const double phi = u(rng);
        // A physical phase shifter rotates the y-mode noise ellipse together
        // with the mean field; V0 and V1 are invariant under that.
        const TwoModeGaussianState rotated =
            apply_element(s, PhaseShifter{phi});
        const StokesEstimate rot = stokes_linearized(rotated);
        CHECK((*rot.normalized)[0] ==
              doctest::Approx((*base.normalized)[0]).epsilon(1e-12));
        CHECK((*rot.normalized)[1] ==
              doctest::Approx((*base.normalized)[1]).epsilon(1e-12));
    }
}

TEST_CASE("example-1 variance products, equality iff no squeezing") {
    const auto rep = [](double v_plus) {
        return uncertainty_report(
            stokes_linearized(build_example(1, v_plus, 1.0 / v_plus, 10.0)));
    };
    const auto squeezed = rep(0.5);
    CHECK(squeezed.products[0] < 1.0);
    CHECK(squeezed.products[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(squeezed.products[2] < 1.0);
    const auto coherent = rep(1.0);
    CHECK(coherent.products[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coherent.products[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relative phase on a squeezed pair moves noise between S2 and S3") {
    const auto s0 = build_example3_with_phase(0.5, 2.0, 10.0, 0.0);
    const auto s90 = build_example3_with_phase(0.5, 2.0, 10.0, kPi / 2.0);
    const auto n0 = *stokes_linearized(s0).normalized;
    const auto n90 = *stokes_linearized(s90).normalized;
    CHECK(n0[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(n0[3] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(n90[2] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(n90[3] == doctest::Approx(0.5).epsilon(1e-12));
    // S0 and S1 stay put.
    CHECK(n90[0] == doctest::Approx(n0[0]).epsilon(1e-12));
    CHECK(n90[1] == doctest::Approx(n0[1]).epsilon(1e-12));
}
