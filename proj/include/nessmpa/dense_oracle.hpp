// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <sstream>
#include <utility>
#include <variant>

#include "nessmpa/errors.hpp"
#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa {

/// Exact density operator on N qubits, N <= 9. Site 1 is the most significant
/// bit of the computational-basis index.
class DenseOperator {
public:
    static constexpr int kMaxSites = 9;

    DenseOperator(int n_sites, Eigen::MatrixXcd mat) : n_sites_(n_sites), mat_(std::move(mat)) {
        guard_sites(n_sites_);
        const Eigen::Index d = dim_for(n_sites_);
        if (mat_.rows() != d || mat_.cols() != d)
            throw DimensionMismatch("matrix is " + std::to_string(mat_.rows()) + "x" +
                                    std::to_string(mat_.cols()) + ", expected 2^" +
                                    std::to_string(n_sites_) + " square");
    }

    static DenseOperator maximally_mixed(int n_sites) {
        guard_sites(n_sites);
        const Eigen::Index d = dim_for(n_sites);
        return DenseOperator(n_sites,
                             Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
    }

    static DenseOperator pure(int n_sites, const Eigen::VectorXcd& psi) {
        guard_sites(n_sites);
        if (psi.size() != dim_for(n_sites))
            throw DimensionMismatch("state vector length does not match 2^n_sites");
        const double nrm2 = psi.squaredNorm();
        if (nrm2 < 1e-300) throw NormalizationFailure("zero state vector");
        Eigen::MatrixXcd m = psi * psi.adjoint() / nrm2;
        return DenseOperator(n_sites, std::move(m));
    }

    int n_sites() const { return n_sites_; }
    Eigen::Index dim() const { return mat_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    Eigen::MatrixXcd& matrix() { return mat_; }

    cplx trace() const { return mat_.trace(); }

    void normalize() {
        const double t = mat_.trace().real();
        if (std::abs(t) < 1e-250) throw NormalizationFailure("trace below 1e-250");
        mat_ /= t;
    }

private:
    static Eigen::Index dim_for(int n) { return Eigen::Index(1) << n; }
    static void guard_sites(int n) {
        if (n < 1) throw InvalidParameter("n_sites must be positive");
        if (n > kMaxSites)
            throw MemoryGuard("dense oracle limited to " + std::to_string(kMaxSites) +
                              " sites, got " + std::to_string(n));
    }

    int n_sites_;
    Eigen::MatrixXcd mat_;
};

namespace detail {

/// mat <- (I x op x I) * mat with a 2x2 op embedded at `site`.
inline void left_mult_single(Eigen::MatrixXcd& mat, const Eigen::Matrix2cd& op, int site, int n) {
    const Eigen::Index dim = mat.rows();
    const Eigen::Index stride = Eigen::Index(1) << (n - site);
    const Eigen::Index block = stride * 2;
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (Eigen::Index base = 0; base < dim; base += block) {
            for (Eigen::Index r = 0; r < stride; ++r) {
                const Eigen::Index i0 = base + r;
                const Eigen::Index i1 = i0 + stride;
                const cplx v0 = mat(i0, col);
                const cplx v1 = mat(i1, col);
                mat(i0, col) = op(0, 0) * v0 + op(0, 1) * v1;
                mat(i1, col) = op(1, 0) * v0 + op(1, 1) * v1;
            }
        }
    }
}

/// mat <- (I x op x I) * mat with a 4x4 op embedded at sites (site, site+1).
inline void left_mult_pair(Eigen::MatrixXcd& mat, const Eigen::Matrix4cd& op, int site, int n) {
    const Eigen::Index dim = mat.rows();
    const Eigen::Index stride = Eigen::Index(1) << (n - site - 1);
    const Eigen::Index block = stride * 4;
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (Eigen::Index base = 0; base < dim; base += block) {
            for (Eigen::Index r = 0; r < stride; ++r) {
                Eigen::Vector4cd v;
                for (int p = 0; p < 4; ++p) v(p) = mat(base + p * stride + r, col);
                const Eigen::Vector4cd w = op * v;
                for (int p = 0; p < 4; ++p) mat(base + p * stride + r, col) = w(p);
            }
        }
    }
}

} // namespace detail

/// rho -> (I x U x I) rho (I x U x I)^dagger with U on (left_site, left_site+1).
inline DenseOperator apply_two_site_gate(DenseOperator state, const Eigen::Matrix4cd& gate,
                                         int left_site) {
    const int n = state.n_sites();
    if (left_site < 1 || left_site > n - 1)
        throw IndexOutOfRange("gate site " + std::to_string(left_site) + " outside 1.." +
                              std::to_string(n - 1));
    Eigen::MatrixXcd& m = state.matrix();
    detail::left_mult_pair(m, gate, left_site, n);
    m.adjointInPlace();
    detail::left_mult_pair(m, gate, left_site, n);
    m.adjointInPlace();
    return state;
}

using BoundaryChannel = std::variant<KrausPair, Eigen::Matrix2cd>;

/// rho -> sum_mu K^dagger rho K (Kraus case) or V rho V^dagger (unitary case)
/// on a boundary site.
inline DenseOperator apply_boundary_channel(DenseOperator state, const BoundaryChannel& channel,
                                            int site) {
    const int n = state.n_sites();
    if (site != 1 && site != n)
        throw IndexOutOfRange("boundary channel site must be 1 or " + std::to_string(n));
    if (auto* kp = std::get_if<KrausPair>(&channel)) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(state.dim(), state.dim());
        for (const Eigen::Matrix2cd& k : {kp->k1, kp->k2}) {
            Eigen::MatrixXcd term = state.matrix();
            const Eigen::Matrix2cd kd = k.adjoint();
            detail::left_mult_single(term, kd, site, n);
            term.adjointInPlace();
            detail::left_mult_single(term, kd, site, n);
            term.adjointInPlace();
            acc += term;
        }
        state.matrix() = std::move(acc);
    } else {
        const Eigen::Matrix2cd& v = std::get<Eigen::Matrix2cd>(channel);
        Eigen::MatrixXcd& m = state.matrix();
        detail::left_mult_single(m, v, site, n);
        m.adjointInPlace();
        detail::left_mult_single(m, v, site, n);
        m.adjointInPlace();
    }
    return state;
}

/// Precomputed per-cycle operators for one parameter set.
struct CycleOps {
    int n_sites;
    Eigen::Matrix4cd gate;
    KrausPair left;
    BoundaryChannel right;
};

inline CycleOps make_cycle_ops(const CircuitParams& p) {
    CycleOps ops;
    ops.n_sites = p.n_sites;
    ops.gate = build_gate(p.q, p.lambda);
    ops.left = build_kraus(Side::Left, p.q, p.lambda, p.z());
    if (p.is_hybrid())
        ops.right = build_euler_unitary(p.euler());
    else
        ops.right = build_kraus(Side::Right, p.q, p.lambda, p.w());
    return ops;
}

/// M_e: gates on (1,2),(3,4),...,(N-2,N-1), then the right boundary channel on
/// site N.
inline DenseOperator apply_even_half(DenseOperator state, const CycleOps& ops) {
    for (int s = 1; s <= ops.n_sites - 2; s += 2)
        state = apply_two_site_gate(std::move(state), ops.gate, s);
    return apply_boundary_channel(std::move(state), ops.right, ops.n_sites);
}

/// M_o: left boundary channel on site 1, then gates on (2,3),(4,5),...,(N-1,N).
inline DenseOperator apply_odd_half(DenseOperator state, const CycleOps& ops) {
    state = apply_boundary_channel(std::move(state), BoundaryChannel(ops.left), 1);
    for (int s = 2; s <= ops.n_sites - 1; s += 2)
        state = apply_two_site_gate(std::move(state), ops.gate, s);
    return state;
}

/// One full brickwork cycle M = M_o after M_e.
inline DenseOperator full_cycle(DenseOperator state, const CircuitParams& p) {
    if (state.n_sites() != p.n_sites)
        throw DimensionMismatch("state has " + std::to_string(state.n_sites()) +
                                " sites, params have " + std::to_string(p.n_sites));
    const CycleOps ops = make_cycle_ops(p);
    return apply_odd_half(apply_even_half(std::move(state), ops), ops);
}

struct NessResult {
    DenseOperator rho;      // fixed point of the full cycle
    DenseOperator rho_half; // M_e(rho), the other member of the 2-cycle
    int iterations;
    double residual;
};

/// Power-iterate the cycle from the maximally mixed state until the Frobenius
/// distance between successive iterates drops below tol.
inline NessResult power_iterate_ness(const CircuitParams& p, double tol = 1e-12,
                                     int max_iter = 0) {
    if (tol <= 0.0) throw InvalidParameter("tol must be positive");
    if (max_iter <= 0) max_iter = 200 * p.n_sites;
    const CycleOps ops = make_cycle_ops(p);
    DenseOperator rho = DenseOperator::maximally_mixed(p.n_sites);
    double diff = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        DenseOperator next = apply_odd_half(apply_even_half(rho, ops), ops);
        diff = (next.matrix() - rho.matrix()).norm();
        rho = std::move(next);
        if (diff < tol) {
            rho.normalize();
            DenseOperator half = apply_even_half(rho, ops);
            return NessResult{std::move(rho), std::move(half), it, diff};
        }
    }
    std::ostringstream msg;
    msg << "power iteration did not reach tol " << tol << " in " << max_iter << " cycles";
    throw NoConvergence(msg.str(), max_iter, diff);
}

/// Partial trace down to one site.
inline Eigen::Matrix2cd reduced_density_matrix(const DenseOperator& state, int site) {
    const int n = state.n_sites();
    if (site < 1 || site > n)
        throw IndexOutOfRange("site " + std::to_string(site) + " outside 1.." + std::to_string(n));
    const Eigen::Index stride = Eigen::Index(1) << (n - site);
    const Eigen::Index dim = state.dim();
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    const Eigen::MatrixXcd& m = state.matrix();
    for (Eigen::Index base = 0; base < dim; base += stride * 2) {
        for (Eigen::Index r = 0; r < stride; ++r) {
            const Eigen::Index i0 = base + r;
            const Eigen::Index i1 = i0 + stride;
            out(0, 0) += m(i0, i0);
            out(0, 1) += m(i0, i1);
            out(1, 0) += m(i1, i0);
            out(1, 1) += m(i1, i1);
        }
    }
    return out;
}

/// tr(obs_site * rho) for a single-site observable.
inline cplx local_expectation(const DenseOperator& state, const Eigen::Matrix2cd& obs, int site) {
    const Eigen::Matrix2cd r = reduced_density_matrix(state, site);
    return (obs * r).trace();
}

} // namespace nessmpa
