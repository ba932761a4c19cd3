// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "nessmpa/scalar_algebra.hpp"
#include "test_support.hpp"

using namespace nessmpa;
using nessmpa::testing::draw_params;
using nessmpa::testing::draw_q;
using nessmpa::testing::draw_lambda;
using nessmpa::testing::draw_zeta;
using nessmpa::testing::draw_euler;
using nessmpa::testing::max_abs_diff;
using nessmpa::testing::random_density;
using nessmpa::testing::coupled_reset_oracle;
using nessmpa::testing::unconjugated_spinor;

TEST_CASE("gate is unitary in both regimes") {
    std::mt19937 g(11);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        for (int draw = 0; draw < 100; ++draw) {
            const cplx q = draw_q(regime, g);
            const cplx lambda = draw_lambda(regime, g);
            const Eigen::Matrix4cd u = build_gate(q, lambda);
            REQUIRE(max_abs_diff(u * u.adjoint(), Eigen::Matrix4cd::Identity()) < 1e-12);
        }
    }
}

TEST_CASE("gate limits") {
    const Eigen::Matrix4cd id = build_gate(std::exp(cplx(0.0, 0.4)), 1.0);
    REQUIRE(max_abs_diff(id, Eigen::Matrix4cd::Identity()) < 1e-15);

    Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    REQUIRE(max_abs_diff(build_gate(1.0, 2.0), swap) < 1e-15);

    const Eigen::Matrix4cd u = build_gate(std::exp(cplx(0.0, 0.3)), std::exp(0.9));
    REQUIRE(max_abs_diff(u * u.adjoint(), Eigen::Matrix4cd::Identity()) < 1e-12);
    REQUIRE(u(1, 2) == u(2, 1));
    REQUIRE(u(0, 1) == cplx(0.0));
}

TEST_CASE("gate inverts under q -> 1/q and lambda -> 1/lambda") {
    std::mt19937 g(12);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        for (int draw = 0; draw < 20; ++draw) {
            const cplx q = draw_q(regime, g);
            const cplx lambda = draw_lambda(regime, g);
            const Eigen::Matrix4cd u = build_gate(q, lambda);
            REQUIRE(max_abs_diff(build_gate(1.0 / q, lambda) * u, Eigen::Matrix4cd::Identity()) <
                    1e-12);
            REQUIRE(max_abs_diff(build_gate(q, 1.0 / lambda) * u, Eigen::Matrix4cd::Identity()) <
                    1e-12);
        }
    }
}

TEST_CASE("kraus pair is complete") {
    std::mt19937 g(13);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        for (Side side : {Side::Left, Side::Right}) {
            for (int draw = 0; draw < 100; ++draw) {
                const KrausPair kp =
                    build_kraus(side, draw_q(regime, g), draw_lambda(regime, g), draw_zeta(g));
                const Eigen::Matrix2cd comp =
                    kp.k1 * kp.k1.adjoint() + kp.k2 * kp.k2.adjoint();
                REQUIRE(max_abs_diff(comp, Eigen::Matrix2cd::Identity()) < 1e-12);
            }
        }
    }
}

TEST_CASE("kraus channel equals the gate-coupled reset") {
    std::mt19937 g(14);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        for (Side side : {Side::Left, Side::Right}) {
            for (int draw = 0; draw < 50; ++draw) {
                const cplx q = draw_q(regime, g);
                const cplx lambda = draw_lambda(regime, g);
                const cplx zeta = draw_zeta(g);
                const Eigen::Matrix2cd rho = random_density(2, g);
                const Eigen::Matrix2cd via_kraus =
                    apply_kraus(build_kraus(side, q, lambda, zeta), rho);
                const Eigen::Matrix2cd via_oracle = coupled_reset_oracle(
                    build_gate(q, lambda), unconjugated_spinor(zeta), side, rho);
                REQUIRE(max_abs_diff(via_kraus, via_oracle) < 1e-12);
                REQUIRE(std::abs(via_kraus.trace() - cplx(1.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("boundary spinor is the conjugate chart point") {
    const cplx zeta(0.7, 0.4);
    const Eigen::Vector2cd psi = build_boundary_spinor(zeta);
    REQUIRE(std::abs(psi.norm() - 1.0) < 1e-15);
    REQUIRE(std::abs(psi(1) / psi(0) - std::conj(zeta)) < 1e-15);
}

TEST_CASE("euler unitary is unitary for all tilts") {
    std::mt19937 g(15);
    for (int draw = 0; draw < 50; ++draw) {
        const EulerAngles e = draw_euler(g);
        const Eigen::Matrix2cd v = build_euler_unitary(e);
        REQUIRE(max_abs_diff(v * v.adjoint(), Eigen::Matrix2cd::Identity()) < 1e-14);
    }
    for (double beta : {0.0, 1.5707963267948966, 3.141592653589793}) {
        const Eigen::Matrix2cd v = build_euler_unitary(0.4, beta, -0.9);
        REQUIRE(max_abs_diff(v * v.adjoint(), Eigen::Matrix2cd::Identity()) < 1e-14);
    }
    REQUIRE(max_abs_diff(build_euler_unitary(0.0, 0.0, 0.0), Eigen::Matrix2cd::Identity()) <
            1e-15);
}

TEST_CASE("regime classification") {
    REQUIRE(classify_regime(std::exp(cplx(0.0, 0.73)), std::exp(0.9)) == Regime::EasyPlane);
    REQUIRE(classify_regime(std::exp(0.62), std::exp(cplx(0.0, 0.8))) == Regime::EasyAxis);
    REQUIRE(classify_regime(-std::exp(0.62), std::exp(cplx(0.0, 0.8))) == Regime::EasyAxis);
    REQUIRE_THROWS_AS(classify_regime(cplx(1.0), cplx(1.0)), AmbiguousRegime);
    REQUIRE_THROWS_AS(classify_regime(std::exp(cplx(0.3, 0.3)), std::exp(cplx(0.2, 0.7))),
                      NonUnitaryRegime);
}

TEST_CASE("parameter validation") {
    const TwoResetDrive drive{cplx(1.0), cplx(0.5)};
    REQUIRE_THROWS_AS(make_params(4, std::exp(cplx(0.0, 0.3)), 2.0, drive), InvalidParameter);
    REQUIRE_THROWS_AS(make_params(-3, std::exp(cplx(0.0, 0.3)), 2.0, drive), InvalidParameter);
    REQUIRE_THROWS_AS(make_params(3, cplx(1.0), 2.0, drive), InvalidParameter);
    REQUIRE_THROWS_AS(make_params(3, cplx(-1.0), 2.0, drive), InvalidParameter);
    REQUIRE_THROWS_AS(make_params(3, std::exp(cplx(0.0, 0.3)), 2.0, TwoResetDrive{cplx(0.0), cplx(1.0)}),
                      ZeroStereoCoord);
    const CircuitParams p = make_params(5, std::exp(cplx(0.0, 0.3)), std::exp(0.9), drive);
    REQUIRE(p.regime == Regime::EasyPlane);
    REQUIRE_FALSE(p.is_hybrid());
    REQUIRE(p.w() == cplx(0.5));
    const CircuitParams h = make_params(5, std::exp(cplx(0.0, 0.3)), std::exp(0.9),
                                        HybridDrive{cplx(1.0), EulerAngles{0.1, 0.2, 0.3}});
    REQUIRE(h.is_hybrid());
    REQUIRE_THROWS_AS(h.w(), InvalidParameter);
}

TEST_CASE("bloch vector of a pure tilted state") {
    const double theta = std::numbers::pi / 3.0;
    const double phi = std::numbers::pi / 4.0;
    Eigen::Vector2cd psi;
    psi << std::cos(theta / 2.0), std::exp(cplx(0.0, phi)) * std::sin(theta / 2.0);
    const Eigen::Matrix2cd rho = psi * psi.adjoint();
    const auto b = bloch_vector(rho);
    REQUIRE(std::abs(b[0] - 0.6123724356957945) < 1e-14);
    REQUIRE(std::abs(b[1] - 0.6123724356957945) < 1e-14);
    REQUIRE(std::abs(b[2] - 0.5) < 1e-14);
    const auto mixed = bloch_vector(Eigen::Matrix2cd::Identity() * 0.5);
    REQUIRE(std::abs(mixed[0]) + std::abs(mixed[1]) + std::abs(mixed[2]) < 1e-15);
}

TEST_CASE("coherence observable reads the lower-left entry") {
    std::mt19937 g(16);
    const Eigen::Matrix2cd rho = random_density(2, g);
    REQUIRE(std::abs((sigma_plus() * rho).trace() - rho(1, 0)) < 1e-15);
}

TEST_CASE("integer powers") {
    const cplx q(0.6, 0.8);
    REQUIRE(std::abs(ipow(q, 3) - q * q * q) < 1e-15);
    REQUIRE(std::abs(ipow(q, 0) - cplx(1.0)) < 1e-15);
    REQUIRE(std::abs(ipow(q, -2) - 1.0 / (q * q)) < 1e-14);
}
