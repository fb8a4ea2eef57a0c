#include "polsim/uncertainty.hpp"

#include <cmath>
#include <stdexcept>

namespace polsim {

namespace {

constexpr double kGuard = 1e-9;  // relative guard band on strict inequalities

bool strictly_less(double a, double b) {
    return a < b - kGuard * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

const char* to_string(SqueezingClass c) {
    switch (c) {
        case SqueezingClass::NotSqueezed: return "NotSqueezed";
        case SqueezingClass::CoherentRelative: return "CoherentRelative";
        case SqueezingClass::PolarizationSqueezed: return "PolarizationSqueezed";
    }
    return "?";
}

UncertaintyReport uncertainty_report(const StokesEstimate& est) {
    if (!(est.shot_noise > 0.0))
        throw std::invalid_argument(
            "uncertainty_report: shot noise must be positive");

    const double n = est.shot_noise;
    const Eigen::Vector4d nv = est.normalized.value_or(est.variance / n);
    // |<S_l>| / <n> for l = 1, 2, 3.
    const double b1 = std::abs(est.mean[1]) / n;
    const double b2 = std::abs(est.mean[2]) / n;
    const double b3 = std::abs(est.mean[3]) / n;

    UncertaintyReport rep;
    rep.products = {nv[1] * nv[2], nv[2] * nv[3], nv[3] * nv[1]};
    rep.bounds = {b3 * b3, b1 * b1, b2 * b2};
    for (int i = 0; i < 3; ++i)
        rep.mus_deficits[i] = rep.products[i] - rep.bounds[i];
    rep.degenerate_bounds = b1 <= kGuard && b2 <= kGuard && b3 <= kGuard;

    const double mean_bound[4] = {0.0, b1, b2, b3};
    for (int j = 0; j < 4; ++j) {
        rep.classification[j] = strictly_less(nv[j], 1.0)
                                    ? SqueezingClass::CoherentRelative
                                    : SqueezingClass::NotSqueezed;
    }
    // Strict polarization squeezing: V_j < |<S_l>| < V_k for some
    // assignment of distinct j,k,l in {1,2,3}. S0 commutes with everything
    // and is excluded.
    for (int j = 1; j <= 3; ++j) {
        if (rep.classification[j] != SqueezingClass::CoherentRelative)
            continue;
        for (int k = 1; k <= 3; ++k) {
            if (k == j) continue;
            const int l = 6 - j - k;
            if (strictly_less(nv[j], mean_bound[l]) &&
                strictly_less(mean_bound[l], nv[k])) {
                rep.classification[j] = SqueezingClass::PolarizationSqueezed;
                rep.conjugate_partner[j] = k;
                break;
            }
        }
    }
    return rep;
}

}  // namespace polsim
