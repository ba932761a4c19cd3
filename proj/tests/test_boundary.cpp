// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>

#include "nessmpa/boundary.hpp"
#include "nessmpa/scalar_algebra.hpp"
#include "test_support.hpp"

using namespace nessmpa;
using nessmpa::testing::draw_lambda;
using nessmpa::testing::draw_q;
using nessmpa::testing::draw_zeta;
using nessmpa::testing::max_abs_diff;

TEST_CASE("left vector pinned values at unit drive magnitude") {
    const Eigen::Matrix2cd l = left_vector(Regime::EasyPlane, std::exp(0.9), cplx(1.0));
    REQUIRE(std::abs(l(0, 0) - cplx(1.4330863854487745)) < 1e-14);
    REQUIRE(std::abs(l(0, 1) - cplx(1.0)) < 1e-15);
    REQUIRE(std::abs(l(1, 0) - cplx(1.0)) < 1e-15);
    REQUIRE(std::abs(l(1, 1) - cplx(1.4330863854487745)) < 1e-14);
}

TEST_CASE("left vector is hermitian in both regimes") {
    std::mt19937 g(41);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        for (int draw = 0; draw < 20; ++draw) {
            const Eigen::Matrix2cd l =
                left_vector(regime, draw_lambda(regime, g), draw_zeta(g));
            REQUIRE(max_abs_diff(l, l.adjoint()) < 1e-14);
        }
    }
    REQUIRE_THROWS_AS(left_vector(Regime::EasyPlane, std::exp(0.9), cplx(0.0)), ZeroStereoCoord);
}

TEST_CASE("reset right vector is hermitian with unit peak") {
    std::mt19937 g(42);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        for (int n : {3, 7}) {
            const Eigen::MatrixXcd r = right_vector_reset(regime, n, draw_q(regime, g),
                                                          draw_lambda(regime, g), draw_zeta(g),
                                                          draw_zeta(g));
            REQUIRE(r.rows() == n + 2);
            REQUIRE(r.cols() == n + 2);
            REQUIRE(max_abs_diff(r, r.adjoint()) < 1e-13);
            REQUIRE(std::abs(r.cwiseAbs().maxCoeff() - 1.0) < 1e-14);
        }
    }
    REQUIRE_THROWS_AS(right_vector_reset(Regime::EasyPlane, 4, std::exp(cplx(0.0, 0.3)),
                                         std::exp(0.9), cplx(1.0), cplx(0.5)),
                      InvalidParameter);
}

TEST_CASE("reset right vector collapses at the helix drive") {
    const int n = 5;
    const cplx q = std::exp(cplx(0.0, 0.73));
    const cplx lambda = std::exp(0.9);
    const cplx z = 0.7 * std::exp(cplx(0.0, 0.2));
    const cplx w = ipow(q, n + 1) * lambda * z;
    const Eigen::MatrixXcd r = right_vector_reset(Regime::EasyPlane, n, q, lambda, z, w);
    REQUIRE(std::abs(std::abs(r(0, 0)) - 1.0) < 1e-13);
    for (int j = 0; j < r.rows(); ++j)
        for (int jp = 0; jp < r.cols(); ++jp)
            if (j != 0 || jp != 0) REQUIRE(std::abs(r(j, jp)) < 1e-14);
}

TEST_CASE("reset right vector truncates to the wall sector at kink drives") {
    const int n = 7;
    const cplx q = std::exp(cplx(0.0, 0.41));
    const cplx lambda = std::exp(0.7);
    const cplx z = 1.2 * std::exp(cplx(0.0, -0.5));
    for (int m_k : {1, 2}) {
        const cplx w = ipow(q, n + 1 - 2 * m_k) * lambda * z;
        const Eigen::MatrixXcd r = right_vector_reset(Regime::EasyPlane, n, q, lambda, z, w);
        for (int j = 0; j < r.rows(); ++j)
            for (int jp = 0; jp < r.cols(); ++jp) {
                const bool inside = j <= m_k && jp <= m_k;
                if (inside)
                    REQUIRE(std::abs(r(j, jp)) > 1e-8);
                else
                    REQUIRE(std::abs(r(j, jp)) < 1e-13);
            }
    }
}

TEST_CASE("reset right vector pole detection") {
    const int n = 3;
    const cplx q = std::exp(cplx(0.0, 0.73));
    const cplx lambda = std::exp(0.9);
    const cplx z = 0.7 * std::exp(cplx(0.0, 0.2));
    const long long offset = -1;
    const cplx w = z / (lambda * ipow(q, 2 * offset + 2));
    REQUIRE_THROWS_AS(right_vector_reset(Regime::EasyPlane, n, q, lambda, z, w), PoleInB);
}

TEST_CASE("hybrid right vector limits") {
    const int n = 5;
    const cplx q = std::exp(cplx(0.0, 0.73));
    const cplx z = 0.7 * std::exp(cplx(0.0, 0.2));

    const Eigen::MatrixXcd trivial =
        right_vector_hybrid(n, q, std::exp(0.9), z, EulerAngles{0.0, 0.0, 0.0});
    REQUIRE(max_abs_diff(trivial, Eigen::MatrixXcd::Ones(n + 2, n + 2)) < 1e-12);
    REQUIRE(schmidt_rank(trivial) == 1);

    const Eigen::MatrixXcd flat =
        right_vector_hybrid(n, q, cplx(1.0), z, EulerAngles{0.5, 0.8, -0.3});
    Eigen::MatrixXcd checker(n + 2, n + 2);
    for (int j = 0; j < n + 2; ++j)
        for (int jp = 0; jp < n + 2; ++jp) checker(j, jp) = ((j - jp) % 2 == 0) ? 1.0 : -1.0;
    REQUIRE(max_abs_diff(flat, checker) < 1e-12);
}

TEST_CASE("hybrid right vector is hermitian with unit peak") {
    std::mt19937 g(43);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        const Eigen::MatrixXcd r =
            right_vector_hybrid(5, draw_q(regime, g), draw_lambda(regime, g), draw_zeta(g),
                                nessmpa::testing::draw_euler(g));
        REQUIRE(max_abs_diff(r, r.adjoint()) < 1e-13);
        REQUIRE(std::abs(r.cwiseAbs().maxCoeff() - 1.0) < 1e-14);
        REQUIRE(schmidt_rank(r) == 1);
    }
}

TEST_CASE("schmidt ranks of the boundary vectors") {
    std::mt19937 g(44);
    for (Regime regime : {Regime::EasyPlane, Regime::EasyAxis}) {
        const cplx q = draw_q(regime, g);
        const cplx lambda = draw_lambda(regime, g);
        const cplx z = draw_zeta(g);
        const cplx w = draw_zeta(g);
        REQUIRE(schmidt_rank(left_vector(regime, lambda, z)) == 2);
        REQUIRE(schmidt_rank(right_vector_reset(regime, 5, q, lambda, z, w)) == 2);
        REQUIRE(schmidt_rank(right_vector_hybrid(5, q, lambda, z, EulerAngles{0.4, 0.7, 0.2})) ==
                1);
    }
    REQUIRE(schmidt_rank(Eigen::MatrixXcd::Zero(3, 3)) == 0);
}

TEST_CASE("right vector dispatch follows the drive") {
    const cplx q = std::exp(cplx(0.0, 0.73));
    const cplx lambda = std::exp(0.9);
    const cplx z = 0.7 * std::exp(cplx(0.0, 0.2));
    const cplx w = 1.1 * std::exp(cplx(0.0, -0.4));
    const CircuitParams reset = make_params(5, q, lambda, TwoResetDrive{z, w});
    REQUIRE(max_abs_diff(right_vector(reset),
                         right_vector_reset(Regime::EasyPlane, 5, q, lambda, z, w)) < 1e-15);
    const EulerAngles ang{0.5, 0.8, -0.3};
    const CircuitParams hybrid = make_params(5, q, lambda, HybridDrive{z, ang});
    REQUIRE(max_abs_diff(right_vector(hybrid), right_vector_hybrid(5, q, lambda, z, ang)) <
            1e-15);
}
