// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <variant>

#include "nessmpa/errors.hpp"

namespace nessmpa {

using cplx = std::complex<double>;

inline constexpr double kRegimeTol = 1e-12;

enum class Regime { EasyPlane, EasyAxis };
enum class Side { Left, Right };

/// Integer power by binary exponentiation; exact for the integer exponents
/// appearing in the Lax construction (negative exponents use 1/base).
inline cplx ipow(cplx base, long long n) {
    if (n < 0) {
        base = cplx(1.0) / base;
        n = -n;
    }
    cplx r(1.0);
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

inline bool is_easy_plane(cplx q, cplx lambda) {
    return std::abs(std::abs(q) - 1.0) <= kRegimeTol &&
           std::abs(lambda.imag()) <= kRegimeTol * std::abs(lambda);
}

inline bool is_easy_axis(cplx q, cplx lambda) {
    return std::abs(q.imag()) <= kRegimeTol * std::abs(q) &&
           std::abs(std::abs(lambda) - 1.0) <= kRegimeTol;
}

/// Decide the unitarity regime of the gate parameters: |q|=1 with real lambda
/// (easy plane) or real q with |lambda|=1 (easy axis).
inline Regime classify_regime(cplx q, cplx lambda) {
    const bool epr = is_easy_plane(q, lambda);
    const bool ear = is_easy_axis(q, lambda);
    if (epr && ear)
        throw AmbiguousRegime("parameters satisfy both regime conditions (q and lambda both real of unit modulus)");
    if (epr) return Regime::EasyPlane;
    if (ear) return Regime::EasyAxis;
    throw NonUnitaryRegime("parameters satisfy neither |q|=1 with real lambda nor real q with |lambda|=1");
}

struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct TwoResetDrive {
    cplx z;
    cplx w;
};

struct HybridDrive {
    cplx z;
    EulerAngles euler;
};

using Drive = std::variant<TwoResetDrive, HybridDrive>;

struct CircuitParams {
    int n_sites = 0;
    cplx q;
    cplx lambda;
    Regime regime = Regime::EasyPlane;
    Drive drive;

    cplx z() const {
        if (auto* d = std::get_if<TwoResetDrive>(&drive)) return d->z;
        return std::get<HybridDrive>(drive).z;
    }
    bool is_hybrid() const { return std::holds_alternative<HybridDrive>(drive); }
    cplx w() const {
        if (auto* d = std::get_if<TwoResetDrive>(&drive)) return d->w;
        throw InvalidParameter("right reset coordinate w requested on a hybrid drive");
    }
    const EulerAngles& euler() const { return std::get<HybridDrive>(drive).euler; }
};

inline CircuitParams make_params(int n_sites, cplx q, cplx lambda, Drive drive) {
    if (n_sites < 1 || n_sites % 2 == 0)
        throw InvalidParameter("n_sites must be odd and positive, got " + std::to_string(n_sites));
    if (std::abs(q) < 1e-300 || std::abs(lambda) < 1e-300)
        throw InvalidParameter("q and lambda must be nonzero");
    if (std::abs(q - 1.0) <= kRegimeTol || std::abs(q + 1.0) <= kRegimeTol)
        throw InvalidParameter("q = +-1 degenerates the gate parameterization");
    CircuitParams p;
    p.n_sites = n_sites;
    p.q = q;
    p.lambda = lambda;
    p.regime = classify_regime(q, lambda);
    if (auto* d = std::get_if<TwoResetDrive>(&drive)) {
        if (std::abs(d->z) < 1e-300 || std::abs(d->w) < 1e-300)
            throw ZeroStereoCoord("reset coordinates z, w must be nonzero (pole of the stereographic chart)");
    } else {
        auto& h = std::get<HybridDrive>(drive);
        if (std::abs(h.z) < 1e-300)
            throw ZeroStereoCoord("reset coordinate z must be nonzero (pole of the stereographic chart)");
    }
    p.drive = std::move(drive);
    return p;
}

/// Two-qubit XXZ (fSim) gate on the basis |00>,|01>,|10>,|11>.
inline Eigen::Matrix4cd build_gate(cplx q, cplx lambda) {
    classify_regime(q, lambda);
    const cplx den = q * lambda - cplx(1.0) / (q * lambda);
    if (std::abs(den) < 1e-300)
        throw InvalidParameter("q*lambda on the unit square root locus: gate denominator vanishes");
    const cplx a = (q - cplx(1.0) / q) / den;
    const cplx b = (lambda - cplx(1.0) / lambda) / den;
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    u(1, 1) = a;
    u(1, 2) = b;
    u(2, 1) = b;
    u(2, 2) = a;
    return u;
}

/// Boundary spinor of the stereographic chart: (1, conj(zeta))/sqrt(1+|zeta|^2).
/// Note the conjugation: the Bloch azimuth of the returned spinor is -arg(zeta).
/// The reset channel built by build_kraus targets the conjugate spinor
/// (1, zeta)/sqrt(1+|zeta|^2); see build_kraus.
inline Eigen::Vector2cd build_boundary_spinor(cplx zeta) {
    const double s = 1.0 / std::sqrt(1.0 + std::norm(zeta));
    Eigen::Vector2cd psi;
    psi << cplx(s), std::conj(zeta) * s;
    return psi;
}

struct KrausPair {
    Eigen::Matrix2cd k1;
    Eigen::Matrix2cd k2;
};

/// Kraus matrices of the boundary reset channel rho -> sum_mu K^[mu]dagger rho K^[mu].
/// Completeness holds as sum_mu K K^dagger = I. The induced channel equals the
/// partial-trace reset channel with target spinor (1, zeta)/sqrt(1+|zeta|^2);
/// left and right channels share the same matrices because the gate is
/// symmetric under swapping the two qubits.
inline KrausPair build_kraus(Side side, cplx q, cplx lambda, cplx zeta) {
    (void)side;
    classify_regime(q, lambda);
    if (std::abs(zeta) < 1e-300)
        throw ZeroStereoCoord("reset coordinate at a pole of the stereographic chart");
    const cplx da = q / lambda - lambda / q;
    if (std::abs(da) < 1e-300)
        throw InvalidParameter("q/lambda on the unit square root locus: Kraus denominator vanishes");
    const cplx ka = (q - cplx(1.0) / q) / da;
    const cplx kb = (lambda - cplx(1.0) / lambda) / (-da);
    const cplx zb = std::conj(zeta);
    const double s = 1.0 / std::sqrt(1.0 + std::norm(zeta));
    KrausPair kp;
    kp.k1 << cplx(1.0), kb * zb, cplx(0.0), ka;
    kp.k2 << ka * zb, cplx(0.0), kb, zb;
    kp.k1 *= s;
    kp.k2 *= s;
    return kp;
}

/// Apply the reset channel to a single-qubit density matrix.
inline Eigen::Matrix2cd apply_kraus(const KrausPair& kp, const Eigen::Matrix2cd& rho) {
    return kp.k1.adjoint() * rho * kp.k1 + kp.k2.adjoint() * rho * kp.k2;
}

/// Single-qubit unitary parameterized by Euler angles. Written with cos/sin
/// rather than tan so the beta = pi/2 pole of the tangent form is removable;
/// the two forms agree up to a global sign, which the channel V rho V^dagger
/// cannot see.
inline Eigen::Matrix2cd build_euler_unitary(double alpha, double beta, double gamma) {
    const cplx u = std::polar(1.0, alpha);
    const cplx v = std::polar(1.0, gamma);
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    Eigen::Matrix2cd m;
    m << c / (u * v), -(v / u) * s, (u / v) * s, u * v * c;
    return m;
}

inline Eigen::Matrix2cd build_euler_unitary(const EulerAngles& e) {
    return build_euler_unitary(e.alpha, e.beta, e.gamma);
}

/// Bloch vector (x, y, z) of a single-qubit density matrix.
inline std::array<double, 3> bloch_vector(const Eigen::Matrix2cd& rho) {
    return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    s(0, 1) = 1.0;
    return s;
}

inline Eigen::Matrix2cd sigma_z() {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

} // namespace nessmpa
