// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nessmpa/errors.hpp"
#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa {

/// Amplitude matrix entering every Lax block,
///   A^[n](zeta; q) = [[1, -q^(-n)/zeta], [q^n zeta, -1]].
inline Eigen::Matrix2cd site_matrix_A(long long n, cplx q, cplx zeta) {
    if (std::abs(zeta) < 1e-300) throw ZeroStereoCoord("site matrix needs a nonzero spinor coordinate");
    const cplx qn = ipow(q, n);
    Eigen::Matrix2cd a;
    a << 1.0, -1.0 / (qn * zeta), qn * zeta, -1.0;
    return a;
}

enum class LaxKind { Plus, Minus, PlusStar, MinusStar };

inline constexpr bool is_starred(LaxKind k) {
    return k == LaxKind::PlusStar || k == LaxKind::MinusStar;
}

inline constexpr LaxKind starred_partner(LaxKind k) {
    switch (k) {
        case LaxKind::Plus: return LaxKind::PlusStar;
        case LaxKind::Minus: return LaxKind::MinusStar;
        case LaxKind::PlusStar: return LaxKind::Plus;
        case LaxKind::MinusStar: return LaxKind::Minus;
    }
    return LaxKind::Plus;
}

/// One site's Lax operator: a lower-bidiagonal band of 2x2 physical blocks over
/// auxiliary indices 0..jmax, with nonzero blocks only at (j, j) and (j, j+1).
class SiteLax {
public:
    SiteLax(int site, int jmax, LaxKind kind, std::vector<Eigen::Matrix2cd> diag,
            std::vector<Eigen::Matrix2cd> super)
        : site_(site), jmax_(jmax), kind_(kind), diag_(std::move(diag)), super_(std::move(super)) {
        if (diag_.size() != static_cast<std::size_t>(jmax_ + 1) ||
            super_.size() != static_cast<std::size_t>(jmax_))
            throw DimensionMismatch("band vectors do not match jmax");
    }

    int site() const { return site_; }
    int jmax() const { return jmax_; }
    LaxKind kind() const { return kind_; }

    /// Block at (j_out, j_in); nullptr outside the band or the index range.
    const Eigen::Matrix2cd* block(int j_out, int j_in) const {
        if (j_out < 0 || j_out > jmax_ || j_in < 0 || j_in > jmax_) return nullptr;
        if (j_in == j_out) return &diag_[static_cast<std::size_t>(j_out)];
        if (j_in == j_out + 1) return &super_[static_cast<std::size_t>(j_out)];
        return nullptr;
    }

private:
    int site_;
    int jmax_;
    LaxKind kind_;
    std::vector<Eigen::Matrix2cd> diag_;
    std::vector<Eigen::Matrix2cd> super_;
};

/// Build the Lax band for one site. Unstarred blocks are
///   plus:  diag_j = A^[site-2j] D,  super_j = A^[site-2j] E,
///   minus: diag_j = E A^[site-2j],  super_j = D A^[site-2j],
/// with D = diag(lambda, 1), E = diag(1, lambda); starred kinds are the
/// blockwise conjugate transposes of their unstarred partners.
inline SiteLax build_lax(LaxKind kind, int site, cplx q, cplx lambda, cplx zeta, int jmax) {
    if (site < 1) throw InvalidParameter("site must be positive");
    if (jmax < 0) throw InvalidParameter("jmax must be nonnegative");
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
    d(0, 0) = lambda;
    d(1, 1) = 1.0;
    e(0, 0) = 1.0;
    e(1, 1) = lambda;
    const bool plus = (kind == LaxKind::Plus || kind == LaxKind::PlusStar);
    std::vector<Eigen::Matrix2cd> diag(static_cast<std::size_t>(jmax) + 1);
    std::vector<Eigen::Matrix2cd> super(static_cast<std::size_t>(jmax));
    for (int j = 0; j <= jmax; ++j) {
        const Eigen::Matrix2cd a = site_matrix_A(site - 2LL * j, q, zeta);
        Eigen::Matrix2cd dg, sp;
        if (plus) {
            dg = a * d;
            sp = a * e;
        } else {
            dg = e * a;
            sp = d * a;
        }
        if (is_starred(kind)) {
            dg = dg.adjoint().eval();
            sp = sp.adjoint().eval();
        }
        diag[static_cast<std::size_t>(j)] = dg;
        if (j < jmax) super[static_cast<std::size_t>(j)] = sp;
    }
    return SiteLax(site, jmax, kind, std::move(diag), std::move(super));
}

/// Two-layer Lax for the density operator: an unstarred factor acting on kets
/// paired with its starred partner acting on bras. The composite block at
/// auxiliary index pair ((j, j'), (k, k')) is ket_block(j, k) * bra_block(j', k').
class DoubleLax {
public:
    DoubleLax(SiteLax ket, SiteLax bra) : ket_(std::move(ket)), bra_(std::move(bra)) {
        if (ket_.jmax() != bra_.jmax() || ket_.site() != bra_.site())
            throw DimensionMismatch("ket and bra layers disagree on site or jmax");
        if (is_starred(ket_.kind()) || !is_starred(bra_.kind()) ||
            starred_partner(ket_.kind()) != bra_.kind())
            throw InvalidParameter("bra layer must be the starred partner of the ket layer");
    }

    int site() const { return ket_.site(); }
    int jmax() const { return ket_.jmax(); }
    const SiteLax& ket() const { return ket_; }
    const SiteLax& bra() const { return bra_; }

    /// Composite 2x2 physical block; false if either factor is outside its band.
    bool block(int j, int jp, int k, int kp, Eigen::Matrix2cd& out) const {
        const Eigen::Matrix2cd* a = ket_.block(j, k);
        const Eigen::Matrix2cd* b = bra_.block(jp, kp);
        if (a == nullptr || b == nullptr) return false;
        out = (*a) * (*b);
        return true;
    }

private:
    SiteLax ket_;
    SiteLax bra_;
};

enum class LaxSign { Plus, Minus };

inline LaxSign opposite(LaxSign s) { return s == LaxSign::Plus ? LaxSign::Minus : LaxSign::Plus; }

inline DoubleLax build_double_lax(LaxSign sign, int site, cplx q, cplx lambda, cplx zeta,
                                  int jmax) {
    const LaxKind ket = (sign == LaxSign::Plus) ? LaxKind::Plus : LaxKind::Minus;
    return DoubleLax(build_lax(ket, site, q, lambda, zeta, jmax),
                     build_lax(starred_partner(ket), site, q, lambda, zeta, jmax));
}

} // namespace nessmpa
