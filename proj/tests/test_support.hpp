// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa::testing {

/// Phase parameter of a unimodular q, kept away from the degenerate points 0
/// and pi.
inline double draw_eta(std::mt19937& g) {
    return std::uniform_real_distribution<double>(0.1, 3.0)(g);
}

/// Easy-axis q magnitudes amplify the auxiliary products as |q|^(2N), so
/// tests of exact identities on whole chains cap the log at ear_log_max to
/// keep the floating-point conditioning below the asserted tolerance.
inline cplx draw_q(Regime regime, std::mt19937& g, double ear_log_max = 1.2) {
    if (regime == Regime::EasyPlane) return std::exp(cplx(0.0, draw_eta(g)));
    const double s = std::uniform_real_distribution<double>(0.1, ear_log_max)(g);
    const double sign = std::bernoulli_distribution(0.5)(g) ? 1.0 : -1.0;
    return sign * std::exp(s);
}

/// Interaction parameter bounded away from 1, where the whole cycle collapses
/// to the identity and the steady state degenerates.
inline cplx draw_lambda(Regime regime, std::mt19937& g) {
    const double m = std::uniform_real_distribution<double>(0.2, 1.5)(g);
    const double sign = std::bernoulli_distribution(0.5)(g) ? 1.0 : -1.0;
    if (regime == Regime::EasyPlane) return std::exp(sign * m);
    return std::exp(cplx(0.0, sign * (0.2 + m)));
}

inline cplx draw_zeta(std::mt19937& g) {
    const double mag = std::uniform_real_distribution<double>(0.3, 2.5)(g);
    const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(g);
    return mag * std::exp(cplx(0.0, phase));
}

inline EulerAngles draw_euler(std::mt19937& g) {
    std::uniform_real_distribution<double> full(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> tilt(0.1, 1.4);
    return EulerAngles{full(g), tilt(g), full(g)};
}

inline CircuitParams draw_params(Regime regime, int n_sites, std::mt19937& g,
                                 bool hybrid = false, bool mild = false) {
    const cplx q = draw_q(regime, g, mild ? 0.45 : 1.2);
    const cplx lambda = draw_lambda(regime, g);
    const cplx z = draw_zeta(g);
    if (hybrid) return make_params(n_sites, q, lambda, HybridDrive{z, draw_euler(g)});
    return make_params(n_sites, q, lambda, TwoResetDrive{z, draw_zeta(g)});
}

/// Random full-rank density matrix from a complex Gaussian square root.
inline Eigen::MatrixXcd random_density(Eigen::Index dim, std::mt19937& g) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx(gauss(g), gauss(g));
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline Eigen::Vector2cd unconjugated_spinor(cplx zeta) {
    Eigen::Vector2cd psi;
    psi << cplx(1.0), zeta;
    psi /= std::sqrt(1.0 + std::norm(zeta));
    return psi;
}

/// Reference boundary channel built from first principles: couple the boundary
/// qubit to a fresh ancilla prepared in |psi><psi|, conjugate by the gate, and
/// trace the ancilla out. The ancilla sits outside the chain, so it is the
/// first tensor factor at the left edge and the second at the right edge.
inline Eigen::Matrix2cd coupled_reset_oracle(const Eigen::Matrix4cd& gate,
                                             const Eigen::Vector2cd& psi, Side side,
                                             const Eigen::Matrix2cd& rho) {
    const Eigen::Matrix2cd target = psi * psi.adjoint();
    Eigen::Matrix4cd joint;
    if (side == Side::Left) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                joint.block<2, 2>(2 * i, 2 * j) = target(i, j) * rho;
    } else {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                joint.block<2, 2>(2 * i, 2 * j) = rho(i, j) * target;
    }
    joint = (gate * joint * gate.adjoint()).eval();
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    if (side == Side::Left) {
        out = joint.block<2, 2>(0, 0) + joint.block<2, 2>(2, 2);
    } else {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out(i, j) = joint(2 * i, 2 * j) + joint(2 * i + 1, 2 * j + 1);
    }
    return out;
}

} // namespace nessmpa::testing
