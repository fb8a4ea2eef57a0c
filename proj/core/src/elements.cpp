#include "polsim/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace polsim {

namespace {

Jones basis_rotation(double theta) {
    Jones r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

Jones retarder(double theta, std::complex<double> slow_factor) {
    Jones d = Jones::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = slow_factor;
    return basis_rotation(theta) * d * basis_rotation(-theta);
}

}  // namespace

Jones jones_matrix(const HalfWavePlate& e) { return retarder(e.theta, -1.0); }

Jones jones_matrix(const QuarterWavePlate& e) {
    return retarder(e.theta, std::complex<double>(0.0, 1.0));
}

Jones jones_matrix(const PhaseShifter& e) {
    return retarder(0.0, std::exp(std::complex<double>(0.0, e.phi)));
}

Jones jones_matrix(const Rotation& e) { return basis_rotation(e.theta); }

Eigen::Matrix4d quadrature_action(const Jones& u) {
    // a_i -> sum_j u_ij a_j induces on (X+, X-) per 2x2 block:
    //   [[Re u_ij, -Im u_ij], [Im u_ij, Re u_ij]].
    Eigen::Matrix4d s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const std::complex<double> v = u(i, j);
            s(2 * i, 2 * j) = v.real();
            s(2 * i, 2 * j + 1) = -v.imag();
            s(2 * i + 1, 2 * j) = v.imag();
            s(2 * i + 1, 2 * j + 1) = v.real();
        }
    return s;
}

TwoModeGaussianState apply_unitary(const TwoModeGaussianState& state,
                                   const Jones& u) {
    TwoModeGaussianState out;
    const Eigen::Vector2cd a =
        u * Eigen::Vector2cd(state.alpha_x, state.alpha_y);
    out.alpha_x = a[0];
    out.alpha_y = a[1];
    const Eigen::Matrix4d s = quadrature_action(u);
    out.cov = s * state.cov * s.transpose();
    return out;
}

TwoModeGaussianState apply_element(const TwoModeGaussianState& state,
                                   const OpticalElement& elem) {
    if (const auto* loss = std::get_if<Loss>(&elem)) {
        if (loss->eta_x < 0.0 || loss->eta_x > 1.0 || loss->eta_y < 0.0 ||
            loss->eta_y > 1.0)
            throw std::invalid_argument("Loss: eta must lie in [0, 1]");
        TwoModeGaussianState out;
        out.alpha_x = std::sqrt(loss->eta_x) * state.alpha_x;
        out.alpha_y = std::sqrt(loss->eta_y) * state.alpha_y;
        Eigen::Vector4d h;
        h << std::sqrt(loss->eta_x), std::sqrt(loss->eta_x),
             std::sqrt(loss->eta_y), std::sqrt(loss->eta_y);
        const Eigen::Matrix4d hm = h.asDiagonal();
        out.cov = hm * state.cov * hm +
                  (Eigen::Matrix4d::Identity() - hm * hm);
        return out;
    }
    const Jones u = std::visit(
        [](const auto& e) -> Jones {
            if constexpr (std::is_same_v<std::decay_t<decltype(e)>, Loss>)
                return Jones::Identity();
            else
                return jones_matrix(e);
        },
        elem);
    return apply_unitary(state, u);
}

}  // namespace polsim
