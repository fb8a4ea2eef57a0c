#include "polsim/fock.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "polsim/examples.hpp"

namespace polsim::fock {

namespace {

using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};

Eigen::VectorXcd normalized(Eigen::VectorXcd v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::runtime_error("fock: zero-norm vector");
    return v / n;
}

}  // namespace

Eigen::MatrixXcd lowering(int cutoff) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Eigen::VectorXcd coherent_squeezed_state(Cd alpha, double r, double theta,
                                         int cutoff,
                                         double leakage_threshold) {
    const int dim = cutoff + 1;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi[0] = 1.0;

    if (r != 0.0) {
        const Cd xi = r * std::exp(2.0 * kI * theta);
        const Eigen::MatrixXcd a = lowering(cutoff);
        const Eigen::MatrixXcd a2 = a * a;
        const Eigen::MatrixXcd gen =
            0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
        psi = (gen.exp() * psi).eval();
    }
    if (alpha != 0.0) {
        const Eigen::MatrixXcd a = lowering(cutoff);
        const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
        psi = (gen.exp() * psi).eval();
    }
    psi = normalized(psi);
    if (std::norm(psi[cutoff]) >= leakage_threshold)
        throw std::runtime_error(
            "coherent_squeezed_state: boundary leakage exceeds threshold; "
            "increase the cutoff");
    return psi;
}

QuadratureMoments quadrature_moments(const Eigen::VectorXcd& psi) {
    const int dim = int(psi.size());
    Eigen::VectorXcd xp = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd xm = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd nv = Eigen::VectorXcd::Zero(dim);
    for (int n = 0; n < dim; ++n) {
        if (n + 1 < dim) {
            const double s = std::sqrt(double(n + 1));
            xp[n + 1] += s * psi[n];   // a^dag
            xm[n + 1] += kI * s * psi[n];
        }
        if (n > 0) {
            const double s = std::sqrt(double(n));
            xp[n - 1] += s * psi[n];   // a
            xm[n - 1] += -kI * s * psi[n];
        }
        nv[n] = double(n) * psi[n];
    }
    QuadratureMoments m{};
    m.mean_plus = std::real(psi.dot(xp));
    m.mean_minus = std::real(psi.dot(xm));
    m.var_plus = xp.squaredNorm() - m.mean_plus * m.mean_plus;
    m.var_minus = xm.squaredNorm() - m.mean_minus * m.mean_minus;
    m.mean_n = std::real(psi.dot(nv));
    m.var_n = nv.squaredNorm() - m.mean_n * m.mean_n;
    return m;
}

double FockState::boundary_occupancy() const {
    const int dim = cutoff + 1;
    double p = 0.0;
    for (int ny = 0; ny < dim; ++ny)
        p += std::norm(amplitudes[cutoff * dim + ny]);
    for (int nx = 0; nx < cutoff; ++nx)
        p += std::norm(amplitudes[nx * dim + cutoff]);
    return p;
}

FockState product_state(const Eigen::VectorXcd& psi_x,
                        const Eigen::VectorXcd& psi_y) {
    if (psi_x.size() != psi_y.size())
        throw std::invalid_argument("product_state: cutoffs differ");
    const int dim = int(psi_x.size());
    FockState s;
    s.cutoff = dim - 1;
    s.amplitudes.resize(dim * dim);
    for (int nx = 0; nx < dim; ++nx)
        for (int ny = 0; ny < dim; ++ny)
            s.amplitudes[nx * dim + ny] = psi_x[nx] * psi_y[ny];
    s.amplitudes = normalized(s.amplitudes);
    return s;
}

Eigen::VectorXcd apply_stokes(int j, const FockState& state) {
    const int dim = state.cutoff + 1;
    const auto& psi = state.amplitudes;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
    for (int nx = 0; nx < dim; ++nx) {
        for (int ny = 0; ny < dim; ++ny) {
            const Cd c = psi[nx * dim + ny];
            if (c == 0.0) continue;
            switch (j) {
                case 0:
                    out[nx * dim + ny] += double(nx + ny) * c;
                    break;
                case 1:
                    out[nx * dim + ny] += double(nx - ny) * c;
                    break;
                case 2:
                    // a_x^dag a_y + a_y^dag a_x
                    if (nx + 1 < dim && ny > 0)
                        out[(nx + 1) * dim + (ny - 1)] +=
                            std::sqrt(double((nx + 1) * ny)) * c;
                    if (nx > 0 && ny + 1 < dim)
                        out[(nx - 1) * dim + (ny + 1)] +=
                            std::sqrt(double(nx * (ny + 1))) * c;
                    break;
                case 3:
                    // i (a_y^dag a_x - a_x^dag a_y)
                    if (nx > 0 && ny + 1 < dim)
                        out[(nx - 1) * dim + (ny + 1)] +=
                            kI * std::sqrt(double(nx * (ny + 1))) * c;
                    if (nx + 1 < dim && ny > 0)
                        out[(nx + 1) * dim + (ny - 1)] -=
                            kI * std::sqrt(double((nx + 1) * ny)) * c;
                    break;
                default:
                    throw std::invalid_argument("apply_stokes: j out of range");
            }
        }
    }
    return out;
}

StokesEstimate stokes_exact(const FockState& state,
                            double leakage_threshold) {
    if (!state.truncation_safe(leakage_threshold))
        throw std::runtime_error("stokes_exact: truncation-unsafe state");
    StokesEstimate est;
    for (int j = 0; j < 4; ++j) {
        const Eigen::VectorXcd sj = apply_stokes(j, state);
        est.mean[j] = std::real(state.amplitudes.dot(sj));
        est.variance[j] = sj.squaredNorm() - est.mean[j] * est.mean[j];
    }
    est.shot_noise = est.mean[0];
    if (est.shot_noise > 0.0)
        est.normalized = (est.variance / est.shot_noise).eval();
    return est;
}

int auto_cutoff(double alpha_abs) {
    return int(std::ceil(alpha_abs * alpha_abs + 8.0 * alpha_abs + 20.0));
}

FockOperator stokes_operator(int j, int cutoff) {
    const int dim = cutoff + 1;
    const Eigen::MatrixXcd a = lowering(cutoff);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    const auto kron = [dim](const Eigen::MatrixXcd& l,
                            const Eigen::MatrixXcd& r) {
        Eigen::MatrixXcd out(dim * dim, dim * dim);
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k)
                out.block(i * dim, k * dim, dim, dim) = l(i, k) * r;
        return out;
    };
    const Eigen::MatrixXcd ax = kron(a, id);
    const Eigen::MatrixXcd ay = kron(id, a);
    FockOperator op;
    op.cutoff = cutoff;
    switch (j) {
        case 0: op.matrix = ax.adjoint() * ax + ay.adjoint() * ay; break;
        case 1: op.matrix = ax.adjoint() * ax - ay.adjoint() * ay; break;
        case 2: op.matrix = ax.adjoint() * ay + ay.adjoint() * ax; break;
        case 3:
            op.matrix = kI * (ay.adjoint() * ax - ax.adjoint() * ay);
            break;
        default:
            throw std::invalid_argument("stokes_operator: j out of range");
    }
    return op;
}

FockOperator number_operator_x(int cutoff) {
    FockOperator s0 = stokes_operator(0, cutoff);
    FockOperator s1 = stokes_operator(1, cutoff);
    return {cutoff, 0.5 * (s0.matrix + s1.matrix)};
}

FockOperator number_operator_y(int cutoff) {
    FockOperator s0 = stokes_operator(0, cutoff);
    FockOperator s1 = stokes_operator(1, cutoff);
    return {cutoff, 0.5 * (s0.matrix - s1.matrix)};
}

IdentityReport verify_operator_identities(int cutoff) {
    if (cutoff < 2)
        throw std::invalid_argument(
            "verify_operator_identities: cutoff must be >= 2");
    const int dim = cutoff + 1;
    Eigen::MatrixXcd s[4];
    for (int j = 0; j < 4; ++j) s[j] = stokes_operator(j, cutoff).matrix;

    // Interior subspace n_x + n_y <= cutoff - 2; the outermost two shells
    // are corrupted by truncation of the mode-exchange operators.
    std::vector<int> interior;
    for (int nx = 0; nx < dim; ++nx)
        for (int ny = 0; ny < dim; ++ny)
            if (nx + ny <= cutoff - 2) interior.push_back(nx * dim + ny);

    const auto interior_max = [&](const Eigen::MatrixXcd& m) {
        double mx = 0.0;
        for (int i : interior)
            for (int k : interior) mx = std::max(mx, std::abs(m(i, k)));
        return mx;
    };

    IdentityReport rep;
    for (int j = 0; j < 4; ++j)
        rep.max_hermiticity = std::max(
            rep.max_hermiticity,
            (s[j] - s[j].adjoint()).cwiseAbs().maxCoeff());
    for (int j = 1; j <= 3; ++j)
        rep.max_commutator_s0 = std::max(
            rep.max_commutator_s0, interior_max(s[0] * s[j] - s[j] * s[0]));
    const int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
    for (const auto& c : cyc)
        rep.max_commutator_su2 = std::max(
            rep.max_commutator_su2,
            interior_max(s[c[0]] * s[c[1]] - s[c[1]] * s[c[0]] -
                         2.0 * kI * s[c[2]]));
    rep.poincare_residual = interior_max(
        s[1] * s[1] + s[2] * s[2] + s[3] * s[3] - s[0] * s[0] - 2.0 * s[0]);
    return rep;
}

std::vector<ConvergenceRow> convergence_study(int example_id,
                                              const std::vector<double>& alphas,
                                              double r) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(alphas.size());
    const double v_plus = std::exp(-2.0 * r);
    const double v_minus = std::exp(2.0 * r);
    for (double alpha : alphas) {
        const int cutoff = auto_cutoff(alpha);
        const Eigen::VectorXcd squeezed =
            coherent_squeezed_state(alpha, r, 0.0, cutoff);
        Eigen::VectorXcd other;
        switch (example_id) {
            case 1: {
                other = Eigen::VectorXcd::Zero(cutoff + 1);
                other[0] = 1.0;
                break;
            }
            case 2:
                other = coherent_squeezed_state(alpha, 0.0, 0.0, cutoff);
                break;
            case 3:
                other = squeezed;
                break;
            default:
                throw std::invalid_argument(
                    "convergence_study: example_id must be 1, 2 or 3");
        }
        const StokesEstimate exact =
            stokes_exact(product_state(squeezed, other));
        const StokesEstimate lin = stokes_linearized(
            build_example(example_id, v_plus, v_minus, alpha));

        ConvergenceRow row;
        row.alpha = alpha;
        row.linearized = *lin.normalized;
        row.exact = *exact.normalized;
        row.difference = (row.exact - row.linearized).cwiseAbs();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace polsim::fock
