// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <utility>

#include "nessmpa/boundary.hpp"
#include "nessmpa/dense_oracle.hpp"
#include "nessmpa/errors.hpp"
#include "nessmpa/lax.hpp"
#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa {

/// Cycle builds the fixed point of the full cycle (plus-layer on odd sites);
/// HalfCycle builds its even-half image (signs swapped).
enum class CycleParity { Cycle, HalfCycle };

inline LaxSign sign_at_site(CycleParity parity, int site) {
    const bool odd = (site % 2 == 1);
    if (parity == CycleParity::Cycle) return odd ? LaxSign::Plus : LaxSign::Minus;
    return odd ? LaxSign::Minus : LaxSign::Plus;
}

/// Auxiliary band width at one site: indices 0..site+1, widened by
/// aux_inflation for truncation-soundness checks.
inline int aux_band_limit(int site, int aux_inflation = 0) {
    if (aux_inflation < 0) throw InvalidParameter("aux_inflation must be nonnegative");
    return site + 1 + aux_inflation;
}

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

using AuxKey = std::pair<int, int>;
using AuxMap = std::map<AuxKey, Eigen::MatrixXcd>;

} // namespace detail

/// Contract the matrix-product form of the steady state into a dense density
/// operator, normalized to unit trace. The chain is split in the middle and
/// accumulated from both ends to bound intermediate sizes.
inline DenseOperator assemble_density(const CircuitParams& p,
                                      CycleParity parity = CycleParity::Cycle,
                                      int aux_inflation = 0) {
    const int n = p.n_sites;
    if (n > DenseOperator::kMaxSites)
        throw MemoryGuard("dense assembly limited to " + std::to_string(DenseOperator::kMaxSites) +
                          " sites, got " + std::to_string(n));
    const Eigen::Matrix2cd l = left_vector(p.regime, p.lambda, p.z());
    const Eigen::MatrixXcd r = right_vector(p);
    const int mid = (n + 1) / 2;

    detail::AuxMap left;
    for (int j = 0; j < 2; ++j)
        for (int jp = 0; jp < 2; ++jp)
            if (std::abs(l(j, jp)) > 0.0)
                left[{j, jp}] = l(j, jp) * Eigen::MatrixXcd::Identity(1, 1);
    for (int site = 1; site <= mid; ++site) {
        const DoubleLax dl = build_double_lax(sign_at_site(parity, site), site, p.q, p.lambda,
                                              p.z(), aux_band_limit(site, aux_inflation));
        detail::AuxMap next;
        Eigen::Matrix2cd blk;
        for (const auto& [key, op] : left) {
            const auto [j, jp] = key;
            for (int k = j; k <= j + 1; ++k)
                for (int kp = jp; kp <= jp + 1; ++kp) {
                    if (!dl.block(j, jp, k, kp, blk)) continue;
                    const Eigen::MatrixXcd term = detail::kron(op, blk);
                    auto [it, fresh] = next.try_emplace({k, kp}, term);
                    if (!fresh) it->second += term;
                }
        }
        left = std::move(next);
    }

    detail::AuxMap right;
    for (int j = 0; j < r.rows(); ++j)
        for (int jp = 0; jp < r.cols(); ++jp)
            if (std::abs(r(j, jp)) > 0.0)
                right[{j, jp}] = r(j, jp) * Eigen::MatrixXcd::Identity(1, 1);
    for (int site = n; site > mid; --site) {
        const DoubleLax dl = build_double_lax(sign_at_site(parity, site), site, p.q, p.lambda,
                                              p.z(), aux_band_limit(site, aux_inflation));
        detail::AuxMap next;
        Eigen::Matrix2cd blk;
        for (const auto& [key, op] : right) {
            const auto [k, kp] = key;
            for (int j = k - 1; j <= k; ++j)
                for (int jp = kp - 1; jp <= kp; ++jp) {
                    if (j < 0 || jp < 0) continue;
                    if (!dl.block(j, jp, k, kp, blk)) continue;
                    const Eigen::MatrixXcd term = detail::kron(blk, op);
                    auto [it, fresh] = next.try_emplace({j, jp}, term);
                    if (!fresh) it->second += term;
                }
        }
        right = std::move(next);
    }

    const Eigen::Index dim = Eigen::Index(1) << n;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [key, lop] : left) {
        const auto it = right.find(key);
        if (it == right.end()) continue;
        rho += detail::kron(lop, it->second);
    }
    DenseOperator state(n, std::move(rho));
    state.normalize();
    return state;
}

/// Expectation value of a single-site observable in the matrix-product steady
/// state, evaluated as a ratio of two transfer contractions with per-site
/// rescaling. Usable far beyond the dense-assembly size limit.
inline cplx contract_expectation(const CircuitParams& p, const Eigen::Matrix2cd& obs, int site,
                                 CycleParity parity = CycleParity::Cycle) {
    const int n = p.n_sites;
    if (site < 1 || site > n)
        throw IndexOutOfRange("site " + std::to_string(site) + " outside 1.." + std::to_string(n));
    const Eigen::Matrix2cd l = left_vector(p.regime, p.lambda, p.z());
    const Eigen::MatrixXcd r = right_vector(p);
    const int count = n + 3;

    const auto sweep = [&](bool with_obs, double& log_scale) {
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(count, count);
        v.topLeftCorner(2, 2) = l;
        log_scale = 0.0;
        Eigen::Matrix2cd blk;
        for (int s = 1; s <= n; ++s) {
            const DoubleLax dl =
                build_double_lax(sign_at_site(parity, s), s, p.q, p.lambda, p.z(),
                                 aux_band_limit(s));
            const bool insert = with_obs && s == site;
            Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(count, count);
            for (int j = 0; j < count; ++j)
                for (int jp = 0; jp < count; ++jp) {
                    const cplx amp = v(j, jp);
                    if (amp == cplx(0.0)) continue;
                    for (int k = j; k <= j + 1 && k < count; ++k)
                        for (int kp = jp; kp <= jp + 1 && kp < count; ++kp) {
                            if (!dl.block(j, jp, k, kp, blk)) continue;
                            const cplx t = insert ? (obs * blk).trace() : blk.trace();
                            next(k, kp) += amp * t;
                        }
                }
            const double m = next.cwiseAbs().maxCoeff();
            if (m < 1e-300) throw NormalizationFailure("transfer contraction vanished");
            next /= m;
            log_scale += std::log(m);
            v = std::move(next);
        }
        cplx total = 0.0;
        for (int j = 0; j < r.rows() && j < count; ++j)
            for (int jp = 0; jp < r.cols() && jp < count; ++jp) total += v(j, jp) * r(j, jp);
        return total;
    };

    double log_num = 0.0;
    double log_den = 0.0;
    const cplx num = sweep(true, log_num);
    const cplx den = sweep(false, log_den);
    if (std::abs(den) < 1e-250) throw NormalizationFailure("trace contraction vanished");
    return num / den * std::exp(log_num - log_den);
}

} // namespace nessmpa
