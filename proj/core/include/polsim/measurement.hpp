#pragma once

#include <Eigen/Dense>

#include "polsim/elements.hpp"
#include "polsim/state.hpp"

namespace polsim {

enum class StokesIndex { S0 = 0, S1 = 1, S2 = 2, S3 = 3 };

enum class Channel { Sum, Difference };

/// One balanced-detection chain: optional quarter and half wave-plate in
/// front of a polarizing beam splitter, whose two ports feed a detector
/// pair. The PBS transmits x into detector 1 and reflects y into detector 2.
///
/// Ideal settings (angles in radians):
///   S1: HWP at 0 (acts trivially on the photocurrents), difference channel
///   S2: QWP at 45 deg (neutral there) followed by HWP at 22.5 deg, difference
///   S3: QWP at 0 followed by HWP at 22.5 deg, difference
///   S0: sum channel of the S1 chain
/// With our plate conventions the S3 chain reads out the negated ellipticity
/// on the difference channel; measure() folds that sign back so the reported
/// mean equals <S3>.
struct MeasurementConfig {
    StokesIndex target = StokesIndex::S1;
    double hwp_angle = 0.0;
    double qwp_angle = 0.0;
    bool has_qwp = false;
    Channel channel = Channel::Difference;

    static MeasurementConfig ideal(StokesIndex target);
};

/// Ideal measurement outcome. Variances are linearized; `normalized` is the
/// channel variance divided by the shot noise <n> of the state in front of
/// the detectors.
struct MeasurementRecord {
    StokesIndex target{};
    double mean_detector1 = 0.0;   // mean photocurrent, photon-number units
    double mean_detector2 = 0.0;
    double channel_mean = 0.0;     // sum or (sign-corrected) difference
    double channel_variance = 0.0;
    double shot_noise = 0.0;
    double normalized = 0.0;
    double db = 0.0;
};

/// Runs the ideal chain. With ideal detectors the normalized difference
/// variance equals the corresponding normalized Stokes variance from
/// stokes_linearized, and the sum channel equals the S0 one.
MeasurementRecord measure(const TwoModeGaussianState& state,
                          const MeasurementConfig& config);

/// Photocurrent statistics behind a PBS: means and the 2x2 covariance of
/// the detector-photocurrent fluctuations (dn1, dn2) in linearization.
struct PhotocurrentPair {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

PhotocurrentPair photocurrents(const TwoModeGaussianState& state);

/// Covariance summary of the two output modes of a PBS whose axes sit at
/// `angle` to the x/y basis.
struct RotatedBasisCorrelations {
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();  // rotated-basis cov
    Eigen::Matrix2d cross = Eigen::Matrix2d::Zero();    // inter-mode block
    double joint_plus_sum = 1.0;    // V((X+_1 + X+_2)/sqrt2)
    double joint_plus_diff = 1.0;   // V((X+_1 - X+_2)/sqrt2)
    double joint_minus_sum = 1.0;
    double joint_minus_diff = 1.0;
};

RotatedBasisCorrelations rotated_basis_correlations(
    const TwoModeGaussianState& state, double angle);

}  // namespace polsim
