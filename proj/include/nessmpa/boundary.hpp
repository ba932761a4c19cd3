// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nessmpa/errors.hpp"
#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa {

/// Left boundary vector over the auxiliary pair (j, j') in {0,1}^2, kept
/// unnormalized. Easy-plane:
///   l_00/l_11 = (lambda + 1/lambda)/2 +- (lambda - 1/lambda)/2 * (|z|^2-1)/(|z|^2+1),
///   l_01 = l_10 = 1.
/// Easy-axis:
///   l_00 = l_11 = 1,  l_01 = conj(l_10) = (lambda|z| + 1/(lambda|z|)) / (|z| + 1/|z|).
inline Eigen::Matrix2cd left_vector(Regime regime, cplx lambda, cplx z) {
    if (std::abs(z) < 1e-300) throw ZeroStereoCoord("left vector needs a nonzero spinor coordinate");
    Eigen::Matrix2cd l = Eigen::Matrix2cd::Zero();
    const double az = std::abs(z);
    if (regime == Regime::EasyPlane) {
        const double s = std::real(lambda);
        const double mean = 0.5 * (s + 1.0 / s);
        const double skew = 0.5 * (s - 1.0 / s) * (az * az - 1.0) / (az * az + 1.0);
        l(0, 0) = mean + skew;
        l(0, 1) = 1.0;
        l(1, 0) = 1.0;
        l(1, 1) = mean - skew;
    } else {
        l(0, 0) = 1.0;
        l(1, 1) = 1.0;
        l(0, 1) = (lambda * az + 1.0 / (lambda * az)) / (az + 1.0 / az);
        l(1, 0) = std::conj(l(0, 1));
    }
    return l;
}

namespace detail {

/// Amplitude ratio for the two-reset right vector,
///   b_n = (lambda z q^(-n) - w q^n) / (z q^(-n-1) - lambda w q^(n+1)).
/// A vanishing denominator with a finite numerator is a simple pole, reported
/// as nullopt so the cumulative products can take the projective limit. A
/// simultaneous zero of both is genuinely undefined and throws.
inline std::optional<cplx> reset_ratio(long long n, cplx q, cplx lambda, cplx z, cplx w) {
    const cplx qn = ipow(q, n);
    const cplx num = lambda * z / qn - w * qn;
    const cplx t1 = z / (qn * q);
    const cplx t2 = lambda * w * qn * q;
    const cplx den = t1 - t2;
    const double scale = std::abs(t1) + std::abs(t2);
    if (std::abs(den) < 1e-14 * scale || scale < 1e-300) {
        if (std::abs(num) < 1e-14 * (std::abs(lambda * z / qn) + std::abs(w * qn)))
            throw PoleInB("reset amplitude ratio is 0/0 at offset " + std::to_string(n));
        return std::nullopt;
    }
    return num / den;
}

/// Amplitude ratio for the hybrid right vector. With u = e^{i alpha},
/// v = e^{i gamma}, c = cos(beta), s = sin(beta):
///   g_n = [(c - v^2 z s q^(-2n-1)) z lambda - u^2 (s q^(2n+1) + v^2 z c)]
///       / [(c - v^2 z s q^(-2n-1)) z        - u^2 (s q^(2n+1) + v^2 z c) lambda].
inline std::optional<cplx> hybrid_ratio(long long n, cplx q, cplx lambda, cplx z,
                                        const EulerAngles& ang) {
    const cplx u2 = std::exp(cplx(0.0, 2.0 * ang.alpha));
    const cplx v2 = std::exp(cplx(0.0, 2.0 * ang.gamma));
    const double c = std::cos(ang.beta);
    const double s = std::sin(ang.beta);
    const cplx qq = ipow(q, 2 * n + 1);
    const cplx left = (c - v2 * z * s / qq) * z;
    const cplx right = u2 * (s * qq + v2 * z * c);
    const cplx den = left - right * lambda;
    const double scale = std::abs(left) + std::abs(right * lambda);
    if (std::abs(den) < 1e-14 * scale || scale < 1e-300) {
        if (std::abs(left * lambda - right) < 1e-14 * (std::abs(left * lambda) + std::abs(right)))
            throw PoleInG("hybrid amplitude ratio is 0/0 at offset " + std::to_string(n));
        return std::nullopt;
    }
    return (left * lambda - right) / den;
}

/// Cumulative products P_j = prod_{k=0}^{j-1} ratio(k - M), P_0 = 1. A simple
/// pole of the ratio sends every product past it to infinity together; since
/// the right vector is only defined up to scale, the projective limit keeps
/// the products relative to the first index after the last pole and zeroes
/// everything before it.
template <typename Ratio>
std::vector<cplx> cumulative_products(int count, int m_center, Ratio&& ratio) {
    std::vector<cplx> p(static_cast<std::size_t>(count));
    p[0] = 1.0;
    for (int j = 1; j < count; ++j) {
        const std::optional<cplx> b = ratio(static_cast<long long>(j - 1 - m_center));
        if (b) {
            p[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j - 1)] * *b;
        } else {
            std::fill(p.begin(), p.begin() + j, cplx(0.0));
            p[static_cast<std::size_t>(j)] = 1.0;
        }
    }
    return p;
}

/// Rescale so the largest entry has unit magnitude; a real positive scale, so
/// hermiticity of the entry pattern is preserved.
inline void normalize_max_abs(Eigen::MatrixXcd& r) {
    const double m = r.cwiseAbs().maxCoeff();
    if (m < 1e-300) throw NormalizationFailure("right vector vanished");
    r /= m;
}

} // namespace detail

/// Right boundary vector for a right-edge reset channel, indexed by auxiliary
/// pairs (j, j') in {0..N+1}^2 with M = (N+1)/2:
///   r_{j,j'} = c_{j,j'} P_j conj(P_{j'}),
///   easy-plane c = (-1)^(j-j') (|z| q^(j'-j) + q^(j-j')/|z|),
///   easy-axis  c = (-1)^(j+j') (|z| q^(2M-j-j') + q^(j+j'-2M)/|z|),
/// normalized to unit max magnitude.
inline Eigen::MatrixXcd right_vector_reset(Regime regime, int n_sites, cplx q, cplx lambda,
                                           cplx z, cplx w) {
    if (n_sites < 1 || n_sites % 2 == 0) throw InvalidParameter("n_sites must be odd and positive");
    const int count = n_sites + 2;
    const int m_center = (n_sites + 1) / 2;
    const double az = std::abs(z);
    if (az < 1e-300 || std::abs(w) < 1e-300)
        throw ZeroStereoCoord("right vector needs nonzero spinor coordinates");
    const std::vector<cplx> p = detail::cumulative_products(
        count, m_center, [&](long long n) { return detail::reset_ratio(n, q, lambda, z, w); });
    Eigen::MatrixXcd r(count, count);
    for (int j = 0; j < count; ++j) {
        for (int jp = 0; jp < count; ++jp) {
            cplx c;
            if (regime == Regime::EasyPlane) {
                const cplx qd = ipow(q, jp - j);
                c = ((j - jp) % 2 == 0 ? 1.0 : -1.0) * (az * qd + 1.0 / (az * qd));
            } else {
                const cplx qd = ipow(q, 2LL * m_center - j - jp);
                c = ((j + jp) % 2 == 0 ? 1.0 : -1.0) * (az * qd + 1.0 / (az * qd));
            }
            r(j, jp) = c * p[static_cast<std::size_t>(j)] * std::conj(p[static_cast<std::size_t>(jp)]);
        }
    }
    detail::normalize_max_abs(r);
    return r;
}

/// Right boundary vector for a right-edge single-qubit unitary,
///   r_{j,j'} = (-1)^(j-j') P_j conj(P_{j'}),
/// normalized to unit max magnitude.
inline Eigen::MatrixXcd right_vector_hybrid(int n_sites, cplx q, cplx lambda, cplx z,
                                            const EulerAngles& angles) {
    if (n_sites < 1 || n_sites % 2 == 0) throw InvalidParameter("n_sites must be odd and positive");
    const int count = n_sites + 2;
    const int m_center = (n_sites + 1) / 2;
    if (std::abs(z) < 1e-300) throw ZeroStereoCoord("right vector needs a nonzero spinor coordinate");
    const std::vector<cplx> p = detail::cumulative_products(
        count, m_center, [&](long long n) { return detail::hybrid_ratio(n, q, lambda, z, angles); });
    Eigen::MatrixXcd r(count, count);
    for (int j = 0; j < count; ++j)
        for (int jp = 0; jp < count; ++jp)
            r(j, jp) = ((j - jp) % 2 == 0 ? 1.0 : -1.0) * p[static_cast<std::size_t>(j)] *
                       std::conj(p[static_cast<std::size_t>(jp)]);
    detail::normalize_max_abs(r);
    return r;
}

/// Right boundary vector for whichever drive the parameter set carries.
inline Eigen::MatrixXcd right_vector(const CircuitParams& p) {
    if (p.is_hybrid()) return right_vector_hybrid(p.n_sites, p.q, p.lambda, p.z(), p.euler());
    return right_vector_reset(p.regime, p.n_sites, p.q, p.lambda, p.z(), p.w());
}

/// Number of singular values above rel_cutoff * sigma_1.
inline int schmidt_rank(const Eigen::MatrixXcd& m, double rel_cutoff = 1e-12) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd s = svd.singularValues();
    if (s.size() == 0 || s(0) < 1e-300) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_cutoff * s(0)) ++rank;
    return rank;
}

} // namespace nessmpa
