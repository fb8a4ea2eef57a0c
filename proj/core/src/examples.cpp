#include "polsim/examples.hpp"

#include <cmath>
#include <stdexcept>

namespace polsim {

namespace {

void check_inputs(int id, double v_plus, double v_minus, double alpha) {
    if (id < 1 || id > 3)
        throw std::invalid_argument("build_example: id must be 1, 2 or 3");
    if (!(alpha > 0.0))
        throw std::invalid_argument("build_example: alpha must be positive");
    if (!(v_plus <= 1.0 && 1.0 <= v_minus))
        throw std::invalid_argument(
            "build_example: need v_plus <= 1 <= v_minus");
    if (v_plus * v_minus < 1.0 - 1e-12)
        throw std::invalid_argument(
            "build_example: v_plus * v_minus must be >= 1");
}

}  // namespace

TwoModeGaussianState build_example(int id, double v_plus, double v_minus,
                                   double alpha) {
    check_inputs(id, v_plus, v_minus, alpha);

    TwoModeGaussianState s;
    s.alpha_x = alpha;
    s.alpha_y = (id == 1) ? 0.0 : alpha;
    s.cov = Eigen::Matrix4d::Identity();
    s.cov(0, 0) = v_plus;
    s.cov(1, 1) = v_minus;
    if (id == 3) {
        s.cov(2, 2) = v_plus;
        s.cov(3, 3) = v_minus;
    }
    return s;
}

TwoModeGaussianState build_example3_with_phase(double v_plus, double v_minus,
                                               double alpha, double phi) {
    TwoModeGaussianState s = build_example(3, v_plus, v_minus, alpha);
    s.alpha_y = alpha * std::exp(std::complex<double>(0.0, phi));
    // The squeezing ellipse follows the mean field: rotate the y quadrature
    // block into the lab frame.
    Eigen::Matrix2d r;
    r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    s.cov.block<2, 2>(2, 2) =
        r * s.cov.block<2, 2>(2, 2) * r.transpose();
    return s;
}

}  // namespace polsim
