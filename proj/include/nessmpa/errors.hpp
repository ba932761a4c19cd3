// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nessmpa {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonUnitaryRegime : Error {
    explicit NonUnitaryRegime(const std::string& what) : Error(what) {}
};

struct AmbiguousRegime : Error {
    explicit AmbiguousRegime(const std::string& what) : Error(what) {}
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& what) : Error(what) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct MemoryGuard : Error {
    explicit MemoryGuard(const std::string& what) : Error(what) {}
};

struct ZeroStereoCoord : Error {
    explicit ZeroStereoCoord(const std::string& what) : Error(what) {}
};

struct NoConvergence : Error {
    NoConvergence(const std::string& what, int iterations_run, double final_residual)
        : Error(what), iterations(iterations_run), residual(final_residual) {}
    int iterations;
    double residual;
};

/// Raised when a b_n coefficient denominator vanishes (inverted-helicity resonance).
struct PoleInB : Error {
    explicit PoleInB(const std::string& what) : Error(what) {}
};

/// Raised when a g_n coefficient denominator vanishes (hybrid drive).
struct PoleInG : Error {
    explicit PoleInG(const std::string& what) : Error(what) {}
};

struct NormalizationFailure : Error {
    explicit NormalizationFailure(const std::string& what) : Error(what) {}
};

struct UndefinedArg : Error {
    explicit UndefinedArg(const std::string& what) : Error(what) {}
};

} // namespace nessmpa
