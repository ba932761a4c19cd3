// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nessmpa/boundary.hpp"
#include "nessmpa/dense_oracle.hpp"
#include "nessmpa/errors.hpp"
#include "nessmpa/lax.hpp"
#include "nessmpa/mpa.hpp"
#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa {

/// Auxiliary-index range a residual is evaluated over.
struct AuxWindow {
    int lo = 0;
    int hi = 4;
};

struct ResidualReport {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string params_echo;
    AuxWindow window;

    bool passed() const { return residual < tolerance; }
};

inline std::string format_complex(cplx v) {
    std::ostringstream os;
    os.precision(12);
    os << v.real();
    if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
    return os.str();
}

inline std::string format_params(const CircuitParams& p) {
    std::ostringstream os;
    os << "n=" << p.n_sites << " q=" << format_complex(p.q)
       << " lambda=" << format_complex(p.lambda)
       << " regime=" << (p.regime == Regime::EasyPlane ? "easy-plane" : "easy-axis")
       << " z=" << format_complex(p.z());
    if (p.is_hybrid()) {
        const EulerAngles& a = p.euler();
        os << " euler=(" << a.alpha << "," << a.beta << "," << a.gamma << ")";
    } else {
        os << " w=" << format_complex(p.w());
    }
    return os.str();
}

namespace detail {

/// Product of two neighboring single-layer Lax bands: 4x4 physical block at
/// auxiliary entry (j, k), summed over the intermediate band index.
inline Eigen::Matrix4cd lax_pair_block(const SiteLax& left, const SiteLax& right, int j, int k) {
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    for (int m = j; m <= j + 1; ++m) {
        const Eigen::Matrix2cd* a = left.block(j, m);
        const Eigen::Matrix2cd* b = right.block(m, k);
        if (a == nullptr || b == nullptr) continue;
        Eigen::Matrix4cd term;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) term.block<2, 2>(2 * r, 2 * c) = (*a)(r, c) * (*b);
        out += term;
    }
    return out;
}

/// Same contraction for double-layer Lax: auxiliary entry ((j,j'),(k,k')).
inline Eigen::Matrix4cd double_pair_block(const DoubleLax& left, const DoubleLax& right, int j,
                                          int jp, int k, int kp) {
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    Eigen::Matrix2cd a, b;
    for (int m = j; m <= j + 1; ++m)
        for (int mp = jp; mp <= jp + 1; ++mp) {
            if (!left.block(j, jp, m, mp, a)) continue;
            if (!right.block(m, mp, k, kp, b)) continue;
            Eigen::Matrix4cd term;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) term.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
            out += term;
        }
    return out;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

inline double relative(double worst, double base) {
    if (base < 1e-300) throw NormalizationFailure("residual reference vanished");
    return worst / base;
}

} // namespace detail

/// Exchange relation between neighboring single-layer Lax operators: the gate
/// intertwines the (+,-) product with the (-,+) product,
///   U L+_n L-_{n+1} = L-_n L+_{n+1} U,
/// blockwise over the auxiliary window, for both the plain and the starred
/// family. Returns the worst entry of the defect relative to the largest entry
/// of the left-hand side.
inline double rll_residual_with_gate(const Eigen::Matrix4cd& gate, cplx q, cplx lambda, cplx zeta,
                                     int n, AuxWindow window = {}) {
    if (window.lo < 0 || window.hi < window.lo) throw InvalidParameter("bad auxiliary window");
    const int jmax = window.hi + 1;
    double worst = 0.0;
    double base = 0.0;
    for (const bool starred : {false, true}) {
        const LaxKind plus = starred ? LaxKind::PlusStar : LaxKind::Plus;
        const LaxKind minus = starred ? LaxKind::MinusStar : LaxKind::Minus;
        const SiteLax plus_n = build_lax(plus, n, q, lambda, zeta, jmax);
        const SiteLax plus_n1 = build_lax(plus, n + 1, q, lambda, zeta, jmax);
        const SiteLax minus_n = build_lax(minus, n, q, lambda, zeta, jmax);
        const SiteLax minus_n1 = build_lax(minus, n + 1, q, lambda, zeta, jmax);
        for (int j = window.lo; j <= window.hi; ++j)
            for (int k = window.lo; k <= window.hi; ++k) {
                const Eigen::Matrix4cd lhs = gate * detail::lax_pair_block(plus_n, minus_n1, j, k);
                const Eigen::Matrix4cd rhs = detail::lax_pair_block(minus_n, plus_n1, j, k) * gate;
                worst = std::max(worst, detail::max_abs(lhs - rhs));
                base = std::max(base, detail::max_abs(lhs));
            }
    }
    return detail::relative(worst, base);
}

inline double rll_residual(cplx q, cplx lambda, cplx zeta, int n, AuxWindow window = {}) {
    return rll_residual_with_gate(build_gate(q, lambda), q, lambda, zeta, n, window);
}

/// Double-layer exchange relation: conjugation by the gate maps the (+,-)
/// product to the (-,+) product,
///   U LL+_n LL-_{n+1} U^dagger = LL-_n LL+_{n+1},
/// blockwise over the auxiliary window in both layers.
inline double double_rll_residual_with_gate(const Eigen::Matrix4cd& gate, const CircuitParams& p,
                                            int n, AuxWindow window = {}) {
    if (window.lo < 0 || window.hi < window.lo) throw InvalidParameter("bad auxiliary window");
    const int jmax = window.hi + 1;
    const DoubleLax plus_n = build_double_lax(LaxSign::Plus, n, p.q, p.lambda, p.z(), jmax);
    const DoubleLax plus_n1 = build_double_lax(LaxSign::Plus, n + 1, p.q, p.lambda, p.z(), jmax);
    const DoubleLax minus_n = build_double_lax(LaxSign::Minus, n, p.q, p.lambda, p.z(), jmax);
    const DoubleLax minus_n1 = build_double_lax(LaxSign::Minus, n + 1, p.q, p.lambda, p.z(), jmax);
    const Eigen::Matrix4cd gate_dag = gate.adjoint();
    double worst = 0.0;
    double base = 0.0;
    for (int j = window.lo; j <= window.hi; ++j)
        for (int jp = window.lo; jp <= window.hi; ++jp)
            for (int k = window.lo; k <= window.hi; ++k)
                for (int kp = window.lo; kp <= window.hi; ++kp) {
                    const Eigen::Matrix4cd lhs =
                        gate * detail::double_pair_block(plus_n, minus_n1, j, jp, k, kp) * gate_dag;
                    const Eigen::Matrix4cd rhs =
                        detail::double_pair_block(minus_n, plus_n1, j, jp, k, kp);
                    worst = std::max(worst, detail::max_abs(lhs - rhs));
                    base = std::max(base, detail::max_abs(lhs));
                }
    return detail::relative(worst, base);
}

inline double double_rll_residual(const CircuitParams& p, int n, AuxWindow window = {}) {
    return double_rll_residual_with_gate(build_gate(p.q, p.lambda), p, n, window);
}

/// Left boundary closure: the left vector annihilates the difference between
/// the plus layer and the channel-conjugated minus layer on site 1,
///   <L| (LL+_1 - sum_mu K^dagger LL-_1 K) = 0,
/// evaluated on outgoing auxiliary columns (k, k') in {0..2}^2.
inline double left_boundary_residual_with_channel(const KrausPair& kraus, const CircuitParams& p) {
    const Eigen::Matrix2cd l = left_vector(p.regime, p.lambda, p.z());
    const int jmax = 2;
    const DoubleLax plus = build_double_lax(LaxSign::Plus, 1, p.q, p.lambda, p.z(), jmax);
    const DoubleLax minus = build_double_lax(LaxSign::Minus, 1, p.q, p.lambda, p.z(), jmax);
    double worst = 0.0;
    double base = 0.0;
    Eigen::Matrix2cd blk;
    for (int k = 0; k <= jmax; ++k)
        for (int kp = 0; kp <= jmax; ++kp) {
            Eigen::Matrix2cd tp = Eigen::Matrix2cd::Zero();
            Eigen::Matrix2cd tm = Eigen::Matrix2cd::Zero();
            for (int j = 0; j < 2; ++j)
                for (int jp = 0; jp < 2; ++jp) {
                    if (plus.block(j, jp, k, kp, blk)) tp += l(j, jp) * blk;
                    if (minus.block(j, jp, k, kp, blk)) tm += l(j, jp) * blk;
                }
            const Eigen::Matrix2cd res = tp - apply_kraus(kraus, tm);
            worst = std::max(worst, detail::max_abs(res));
            base = std::max(base, detail::max_abs(tp));
        }
    return detail::relative(worst, base);
}

inline double left_boundary_residual(const CircuitParams& p) {
    return left_boundary_residual_with_channel(build_kraus(Side::Left, p.q, p.lambda, p.z()), p);
}

/// Right boundary closure: the right vector annihilates the difference between
/// the minus layer and the channel-conjugated plus layer on site N,
///   (LL-_N - channel(LL+_N)) |R> = 0,
/// evaluated on incoming auxiliary rows (j, j') in {0..N}^2. The last
/// auxiliary row lies beyond the bond dimension reachable from the left edge
/// and is excluded.
inline double right_boundary_residual_with_channel(const BoundaryChannel& channel,
                                                   const CircuitParams& p) {
    const int n = p.n_sites;
    const Eigen::MatrixXcd r = right_vector(p);
    const int jmax = n + 1;
    const DoubleLax plus = build_double_lax(LaxSign::Plus, n, p.q, p.lambda, p.z(), jmax);
    const DoubleLax minus = build_double_lax(LaxSign::Minus, n, p.q, p.lambda, p.z(), jmax);
    double worst = 0.0;
    double base = 0.0;
    Eigen::Matrix2cd blk;
    for (int j = 0; j <= n; ++j)
        for (int jp = 0; jp <= n; ++jp) {
            Eigen::Matrix2cd tp = Eigen::Matrix2cd::Zero();
            Eigen::Matrix2cd tm = Eigen::Matrix2cd::Zero();
            for (int k = j; k <= j + 1; ++k)
                for (int kp = jp; kp <= jp + 1; ++kp) {
                    if (plus.block(j, jp, k, kp, blk)) tp += r(k, kp) * blk;
                    if (minus.block(j, jp, k, kp, blk)) tm += r(k, kp) * blk;
                }
            Eigen::Matrix2cd mapped;
            if (const auto* kp2 = std::get_if<KrausPair>(&channel))
                mapped = apply_kraus(*kp2, tp);
            else
                mapped = std::get<Eigen::Matrix2cd>(channel) * tp *
                         std::get<Eigen::Matrix2cd>(channel).adjoint();
            const Eigen::Matrix2cd res = tm - mapped;
            worst = std::max(worst, detail::max_abs(res));
            base = std::max(base, detail::max_abs(tm));
        }
    return detail::relative(worst, base);
}

inline double right_boundary_residual(const CircuitParams& p) {
    BoundaryChannel channel;
    if (p.is_hybrid())
        channel = build_euler_unitary(p.euler());
    else
        channel = build_kraus(Side::Right, p.q, p.lambda, p.w());
    return right_boundary_residual_with_channel(channel, p);
}

/// Fixed-point defect of the assembled pair (rho, rho_half) under the two half
/// cycles and the full cycle, as the largest Frobenius deviation. The optional
/// second parameter set drives the circuit, letting perturbed dynamics probe
/// the sharpness of the check.
inline double fixed_point_residual(const CircuitParams& p, const CircuitParams& cycle_params) {
    const DenseOperator rho = assemble_density(p, CycleParity::Cycle);
    const DenseOperator rho_half = assemble_density(p, CycleParity::HalfCycle);
    const CycleOps ops = make_cycle_ops(cycle_params);
    const DenseOperator even = apply_even_half(rho, ops);
    const DenseOperator odd = apply_odd_half(rho_half, ops);
    const DenseOperator full = apply_odd_half(even, ops);
    const double r_even = (even.matrix() - rho_half.matrix()).norm();
    const double r_odd = (odd.matrix() - rho.matrix()).norm();
    const double r_full = (full.matrix() - rho.matrix()).norm();
    return std::max({r_even, r_odd, r_full});
}

inline double fixed_point_residual(const CircuitParams& p) { return fixed_point_residual(p, p); }

/// Frobenius distance between the assembled steady state and the
/// power-iterated fixed point of the dense cycle.
inline double oracle_agreement(const CircuitParams& p, double power_tol = 1e-12) {
    const DenseOperator mpa = assemble_density(p, CycleParity::Cycle);
    const NessResult power = power_iterate_ness(p, power_tol);
    return (mpa.matrix() - power.rho.matrix()).norm();
}

/// Full verification sweep for one parameter set. The dense cross-checks are
/// included only where the dense oracle is tractable.
inline std::vector<ResidualReport> verify_all(const CircuitParams& p) {
    std::vector<ResidualReport> reports;
    const std::string echo = format_params(p);
    const AuxWindow window{};

    ResidualReport rll{"lax-exchange", 0.0, 1e-12, echo, window};
    for (int n : {1, 2, 5})
        rll.residual = std::max(rll.residual, rll_residual(p.q, p.lambda, p.z(), n, window));
    reports.push_back(rll);

    ResidualReport drll{"double-lax-exchange", 0.0, 1e-12, echo, window};
    for (int n : {1, 2})
        drll.residual = std::max(drll.residual, double_rll_residual(p, n, window));
    reports.push_back(drll);

    reports.push_back({"left-boundary", left_boundary_residual(p), 1e-12, echo, AuxWindow{0, 2}});
    reports.push_back(
        {"right-boundary", right_boundary_residual(p), 1e-11, echo, AuxWindow{0, p.n_sites}});

    if (p.n_sites <= DenseOperator::kMaxSites)
        reports.push_back({"fixed-point", fixed_point_residual(p), 1e-10, echo,
                           AuxWindow{0, p.n_sites + 1}});
    if (p.n_sites <= 7)
        reports.push_back(
            {"oracle-agreement", oracle_agreement(p), 1e-8, echo, AuxWindow{0, p.n_sites + 1}});
    return reports;
}

} // namespace nessmpa
