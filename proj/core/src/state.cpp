#include "polsim/state.hpp"

#include <stdexcept>

namespace polsim {

namespace {

const char* check(const TwoModeGaussianState& state, double tol) {
    const Eigen::Matrix4d& v = state.cov;
    if (!v.allFinite()) return "covariance has non-finite entries";
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > tol)
        return "covariance is not symmetric";

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(v);
    if (es.eigenvalues().minCoeff() < -tol)
        return "covariance is not positive semidefinite";

    // Per-mode uncertainty bound V(dX+) V(dX-) - C^2 >= 1.
    for (int m = 0; m < 2; ++m) {
        const Eigen::Matrix2d block = v.block<2, 2>(2 * m, 2 * m);
        const double det = block(0, 0) * block(1, 1) -
                           block(0, 1) * block(1, 0);
        if (det < 1.0 - tol * std::max(1.0, block.trace()))
            return "mode block violates the quadrature uncertainty bound";
    }
    return nullptr;
}

}  // namespace

bool is_valid(const TwoModeGaussianState& state, double tol) {
    return check(state, tol) == nullptr;
}

void validate(const TwoModeGaussianState& state, double tol) {
    if (const char* why = check(state, tol))
        throw std::invalid_argument(std::string("invalid state: ") + why);
}

}  // namespace polsim
