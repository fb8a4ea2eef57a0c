#include "polsim/measurement.hpp"

#include <cmath>

#include "polsim/stokes.hpp"
#include "polsim/units.hpp"

namespace polsim {

MeasurementConfig MeasurementConfig::ideal(StokesIndex target) {
    MeasurementConfig c;
    c.target = target;
    switch (target) {
        case StokesIndex::S0:
            c.channel = Channel::Sum;
            break;
        case StokesIndex::S1:
            break;  // HWP at 0, difference
        case StokesIndex::S2:
            // The quarter wave-plate stays mounted in this chain, oriented at
            // 45 deg where it is neutral for the ellipse-orientation readout.
            // Its presence is what makes a half wave-plate offset here admit
            // circular-component noise, the dominant misalignment channel.
            c.hwp_angle = deg_to_rad(22.5);
            c.qwp_angle = deg_to_rad(45.0);
            c.has_qwp = true;
            break;
        case StokesIndex::S3:
            c.hwp_angle = deg_to_rad(22.5);
            c.qwp_angle = 0.0;
            c.has_qwp = true;
            break;
    }
    return c;
}

PhotocurrentPair photocurrents(const TwoModeGaussianState& state) {
    PhotocurrentPair p;
    p.mean = {std::norm(state.alpha_x), std::norm(state.alpha_y)};
    // dn_x = Re(ax) dX+_x + Im(ax) dX-_x and likewise for y.
    Eigen::Matrix<double, 2, 4> c = Eigen::Matrix<double, 2, 4>::Zero();
    c(0, 0) = state.alpha_x.real();
    c(0, 1) = state.alpha_x.imag();
    c(1, 2) = state.alpha_y.real();
    c(1, 3) = state.alpha_y.imag();
    p.cov = c * state.cov * c.transpose();
    return p;
}

MeasurementRecord measure(const TwoModeGaussianState& state,
                          const MeasurementConfig& config) {
    TwoModeGaussianState s = state;
    if (config.has_qwp)
        s = apply_element(s, QuarterWavePlate{config.qwp_angle});
    s = apply_element(s, HalfWavePlate{config.hwp_angle});

    const PhotocurrentPair p = photocurrents(s);
    const Eigen::Vector2d w =
        config.channel == Channel::Sum ? Eigen::Vector2d(1.0, 1.0)
                                       : Eigen::Vector2d(1.0, -1.0);

    MeasurementRecord rec;
    rec.target = config.target;
    rec.mean_detector1 = p.mean[0];
    rec.mean_detector2 = p.mean[1];
    rec.channel_mean = w.dot(p.mean);
    // The QWP(0)+HWP(22.5 deg) chain delivers the negated ellipticity on the
    // difference channel; report +<S3>.
    if (config.target == StokesIndex::S3 &&
        config.channel == Channel::Difference)
        rec.channel_mean = -rec.channel_mean;
    rec.channel_variance = w.transpose() * p.cov * w;
    rec.shot_noise = p.mean.sum();
    if (rec.shot_noise > 0.0) {
        rec.normalized = rec.channel_variance / rec.shot_noise;
        rec.db = to_db(rec.normalized);
    }
    return rec;
}

RotatedBasisCorrelations rotated_basis_correlations(
    const TwoModeGaussianState& state, double angle) {
    // PBS axes at `angle`: express the state in the rotated mode basis.
    const TwoModeGaussianState r =
        apply_unitary(state, jones_matrix(Rotation{-angle}));
    RotatedBasisCorrelations out;
    out.cov = r.cov;
    out.cross = r.cov.block<2, 2>(0, 2);
    const auto joint = [&](int q, double sign) {
        // V((Xq_1 + sign Xq_2)/sqrt(2))
        return 0.5 * (r.cov(q, q) + r.cov(q + 2, q + 2) +
                      2.0 * sign * r.cov(q, q + 2));
    };
    out.joint_plus_sum = joint(0, +1.0);
    out.joint_plus_diff = joint(0, -1.0);
    out.joint_minus_sum = joint(1, +1.0);
    out.joint_minus_diff = joint(1, -1.0);
    return out;
}

}  // namespace polsim
