#include "polsim/stokes.hpp"

#include <cmath>

namespace polsim {

// dS_j = c_j . (dX+_x, dX-_x, dX+_y, dX-_y) to first order in the noise.
// For a mode with amplitude beta, the combination beta* da + beta da^dag
// equals Re(beta) dX+ + Im(beta) dX-, which yields the rows below.
Eigen::Matrix4d stokes_noise_coefficients(std::complex<double> ax,
                                          std::complex<double> ay) {
    const double axr = ax.real(), axi = ax.imag();
    const double ayr = ay.real(), ayi = ay.imag();
    Eigen::Matrix4d c;
    c << axr,  axi,  ayr,  ayi,   // S0
         axr,  axi, -ayr, -ayi,   // S1
         ayr,  ayi,  axr,  axi,   // S2
         ayi, -ayr, -axi,  axr;   // S3
    return c;
}

Eigen::Vector4d stokes_classical_mean(std::complex<double> ax,
                                      std::complex<double> ay) {
    const std::complex<double> cross = std::conj(ax) * ay;
    return {std::norm(ax) + std::norm(ay), std::norm(ax) - std::norm(ay),
            2.0 * cross.real(), 2.0 * cross.imag()};
}

StokesEstimate stokes_linearized(const TwoModeGaussianState& state) {
    validate(state);

    StokesEstimate est;
    est.mean = stokes_classical_mean(state.alpha_x, state.alpha_y);
    const Eigen::Matrix4d c =
        stokes_noise_coefficients(state.alpha_x, state.alpha_y);
    for (int j = 0; j < 4; ++j)
        est.variance[j] = c.row(j) * state.cov * c.row(j).transpose();
    est.shot_noise = state.mean_photons();
    if (est.shot_noise > 0.0)
        est.normalized = (est.variance / est.shot_noise).eval();
    return est;
}

Eigen::Vector4d stokes_means_vs_phase(double alpha_x, double alpha_y,
                                      double phi) {
    const double ax2 = alpha_x * alpha_x, ay2 = alpha_y * alpha_y;
    return {ax2 + ay2, ax2 - ay2, 2.0 * alpha_x * alpha_y * std::cos(phi),
            2.0 * alpha_x * alpha_y * std::sin(phi)};
}

}  // namespace polsim
