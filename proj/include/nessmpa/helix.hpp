// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nessmpa/errors.hpp"
#include "nessmpa/mpa.hpp"
#include "nessmpa/scalar_algebra.hpp"

namespace nessmpa {

/// Standard: the left drive coordinate is given and the right one is derived.
/// Inverted: the right drive coordinate is given and the left one is derived.
enum class Helicity { Standard, Inverted };

/// Drive coordinate that locks the steady state onto a pure spin helix with
/// m_k domain walls (m_k = 0 is the wall-free helix):
///   zeta' = q^(N+1-2 m_k) lambda zeta.
inline cplx helix_condition(cplx zeta, cplx q, cplx lambda, int n_sites, int m_k = 0,
                            Helicity helicity = Helicity::Standard) {
    (void)helicity;
    if (n_sites < 1 || n_sites % 2 == 0) throw InvalidParameter("n_sites must be odd and positive");
    if (m_k < 0 || 2 * m_k > n_sites + 1)
        throw InvalidParameter("wall count must lie in 0..(n_sites+1)/2");
    if (std::abs(zeta) < 1e-300) throw ZeroStereoCoord("helix condition needs a nonzero coordinate");
    return ipow(q, n_sites + 1 - 2LL * m_k) * lambda * zeta;
}

/// Pure product state of alternating site spinors. Plus parity places the
/// undressed family on odd sites; Minus parity is its half-cycle image with
/// the families swapped. Standard spinors are (1, z q^n) and (1, lambda z q^n);
/// inverted spinors are (1, z q^-n) and (lambda, z q^-n).
inline Eigen::VectorXcd helix_state(const CircuitParams& p, CycleParity parity,
                                    Helicity helicity = Helicity::Standard) {
    const int n = p.n_sites;
    if (n > DenseOperator::kMaxSites)
        throw MemoryGuard("dense helix state limited to " + std::to_string(DenseOperator::kMaxSites) +
                          " sites");
    const cplx z = p.z();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (int site = 1; site <= n; ++site) {
        const bool undressed = (site % 2 == 1) == (parity == CycleParity::Cycle);
        Eigen::Vector2cd s;
        if (helicity == Helicity::Standard) {
            const cplx zq = z * ipow(p.q, site);
            s << 1.0, (undressed ? zq : p.lambda * zq);
        } else {
            const cplx zq = z * ipow(p.q, -site);
            s << (undressed ? cplx(1.0) : p.lambda), zq;
        }
        s.normalize();
        Eigen::VectorXcd next(psi.size() * 2);
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            next(2 * i) = psi(i) * s(0);
            next(2 * i + 1) = psi(i) * s(1);
        }
        psi = std::move(next);
    }
    return psi;
}

struct Indicators {
    double f1 = 0.0;
    double f2 = 0.0;
};

/// Helix indicators from the edge coherence:
///   f1 = 1 - arg(sigma_plus / z) / eta,
///   f2 = -1 + |(|z| + 1/|z|) sigma_plus|.
/// Both vanish exactly on a pure helix.
inline Indicators indicators(cplx sigma_plus_site1, cplx z, double eta) {
    if (std::abs(sigma_plus_site1) < 1e-300)
        throw UndefinedArg("edge coherence too small for a phase");
    if (std::abs(z) < 1e-300) throw ZeroStereoCoord("indicators need a nonzero spinor coordinate");
    if (eta == 0.0) throw UndefinedArg("anisotropy parameter must be nonzero");
    Indicators f;
    f.f1 = 1.0 - std::arg(sigma_plus_site1 / z) / eta;
    f.f2 = -1.0 + std::abs((std::abs(z) + 1.0 / std::abs(z)) * sigma_plus_site1);
    return f;
}

struct ScanRow {
    double eta_over_pi = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    cplx sigma_plus = 0.0;
    std::string status = "ok";
};

struct ScanTable {
    std::vector<ScanRow> rows;

    void write_csv(std::ostream& os) const {
        os << "eta_over_pi,f1,f2,re_sigma_plus,im_sigma_plus,status\n";
        for (const ScanRow& r : rows) {
            os << format(r.eta_over_pi) << ',' << format(r.f1) << ',' << format(r.f2) << ','
               << format(r.sigma_plus.real()) << ',' << format(r.sigma_plus.imag()) << ','
               << r.status << '\n';
        }
    }

    std::string to_csv() const {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }

private:
    static std::string format(double v) {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    }
};

/// Uniform grid of eta/pi values strictly inside (0, 1).
inline std::vector<double> default_eta_grid(int points = 2001) {
    if (points < 1) throw InvalidParameter("grid needs at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 1; k <= points; ++k)
        grid[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / (points + 1);
    return grid;
}

/// Worker count for scans: the NESS_MPA_THREADS environment variable pins it,
/// 0 or unset means hardware concurrency.
inline unsigned scan_thread_count() {
    if (const char* env = std::getenv("NESS_MPA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

inline ScanRow excluded_row(double eta_over_pi, const char* reason) {
    ScanRow row;
    row.eta_over_pi = eta_over_pi;
    row.f1 = std::numeric_limits<double>::quiet_NaN();
    row.f2 = std::numeric_limits<double>::quiet_NaN();
    row.sigma_plus =
        cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
    row.status = reason;
    return row;
}

/// Sweep the anisotropy phase at fixed drive: row k evaluates the steady state
/// at q = exp(i pi grid[k]) and reports the edge coherence and indicators. Rows
/// whose evaluation hits a pole or underflow are kept with a status tag. Row
/// order is the grid order regardless of the worker count.
inline ScanTable scan_anisotropy(const CircuitParams& base, const std::vector<double>& eta_grid) {
    ScanTable table;
    table.rows.resize(eta_grid.size());
    const auto evaluate = [&](std::size_t i) {
        ScanRow row;
        row.eta_over_pi = eta_grid[i];
        const double eta = eta_grid[i] * std::numbers::pi;
        try {
            const CircuitParams p =
                make_params(base.n_sites, std::exp(cplx(0.0, eta)), base.lambda, base.drive);
            row.sigma_plus = contract_expectation(p, sigma_plus(), 1, CycleParity::Cycle);
            const Indicators f = indicators(row.sigma_plus, p.z(), eta);
            row.f1 = f.f1;
            row.f2 = f.f2;
        } catch (const PoleInB&) {
            row = excluded_row(eta_grid[i], "pole");
        } catch (const PoleInG&) {
            row = excluded_row(eta_grid[i], "pole");
        } catch (const NormalizationFailure&) {
            row = excluded_row(eta_grid[i], "underflow");
        } catch (const UndefinedArg&) {
            row = excluded_row(eta_grid[i], "undefined");
        }
        table.rows[i] = row;
    };

    const unsigned workers =
        std::min<unsigned>(scan_thread_count(), static_cast<unsigned>(eta_grid.size()) + 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < eta_grid.size(); ++i) evaluate(i);
        return table;
    }
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = cursor.fetch_add(1); i < eta_grid.size(); i = cursor.fetch_add(1))
                evaluate(i);
        });
    for (std::thread& t : pool) t.join();
    return table;
}

} // namespace nessmpa
