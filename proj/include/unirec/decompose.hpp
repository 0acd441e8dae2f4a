#pragma once

// Inverse map: unitary matrix -> parameters.
//
// A unitary X is peeled from the bottom-right corner. Its last column equals
// e^{i psi} (s A, c) for the top A-factor, so one peel recovers (theta, A,
// psi) and leaves an (n-1) x (n-1) unitary block. Repeating gives
//   X = A_{n,n-1}(a_{n-1}) ... A_{n,1}(a_1) Phi(psi)
// with general complex unit vectors a_j (the raw decomposition). Gauge
// fixing then strips the overall phase of each a_j and pushes it into the
// outer phase matrices.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "unirec/cxcore.hpp"
#include "unirec/gauge.hpp"
#include "unirec/recursion.hpp"

namespace unirec {

/// Default unitarity gate for matrices handed to the decomposer.
inline constexpr double kDefaultInputTolerance = 1e-8;

/// A level whose sine falls below this is treated as theta = 0, A = e_1.
inline constexpr double kDegeneracyThreshold = 1e-12;

/// Raw vectors must be unit within this to be canonicalised.
inline constexpr double kRawNormTolerance = 1e-10;

struct RawLevel {
    std::size_t j = 1;
    double theta = 0.0;
    ComplexVector a;
};

/// X = compose_a(levels) * Phi(psi). levels[j-1] holds level j.
struct RawDecomposition {
    std::size_t n = 1;
    std::vector<RawLevel> levels;
    std::vector<double> psi;
};

struct PeelResult {
    double theta = 0.0;
    ComplexVector a;
    double psi = 0.0;
    ComplexMatrix reduced;
};

struct DecomposeOptions {
    double tolerance = kDefaultInputTolerance;
};

namespace detail {

inline void require_unitary_input(const ComplexMatrix& x, double tolerance, const char* who) {
    if (!x.is_square()) throw DimensionError(std::string(who) + ": matrix " + x.shape() + " is not square");
    if (!is_finite(x)) throw DomainError(std::string(who) + ": matrix has non-finite entries");
    const double dev = unitarity_deviation(x);
    if (!(dev <= tolerance)) {
        throw NotUnitaryError(std::string(who) + ": matrix is not unitary (deviation " + std::to_string(dev) +
                                  ", tolerance " + std::to_string(tolerance) + ")",
                              dev);
    }
}

inline PeelResult peel_unchecked(const ComplexMatrix& x) {
    const std::size_t n = x.rows();
    const std::size_t m = n - 1;

    ComplexVector column(m);
    for (std::size_t r = 0; r < m; ++r) column[r] = x(r, m);
    const Complex corner = x(m, m);
    const double corner_modulus = std::abs(corner);
    const double column_norm = column.norm();

    PeelResult out;
    out.psi = corner_modulus < kDegeneracyThreshold ? 0.0 : principal_arg(corner);
    if (column_norm < kDegeneracyThreshold) {
        out.theta = 0.0;
        out.a = basis_vector(m, 0);
    } else {
        // atan2 keeps theta accurate at both ends; for unitary input it
        // agrees with arccos(|x_nn|).
        out.theta = std::atan2(column_norm, corner_modulus);
        out.a = std::polar(1.0 / column_norm, -out.psi) * column;
    }

    const ComplexMatrix factor = embed_factor(detail::factor_block(out.theta, out.a, 1.0), n);
    out.reduced = leading_block(matmul(adjoint(factor), x), m, m);
    return out;
}

} // namespace detail

/// One inverse step: x = A_{n,n-1}(a) diag(reduced, e^{i psi}).
inline PeelResult peel_last(const ComplexMatrix& x, double tolerance = kDefaultInputTolerance) {
    detail::require_unitary_input(x, tolerance, "peel_last");
    if (x.rows() < 2) throw DimensionError("peel_last: need n >= 2, got " + x.shape());
    return detail::peel_unchecked(x);
}

inline RawDecomposition decompose_raw(const ComplexMatrix& x, const DecomposeOptions& options = {}) {
    detail::require_unitary_input(x, options.tolerance, "decompose_raw");
    const std::size_t n = x.rows();
    if (n < 1) throw DimensionError("decompose_raw: empty matrix");

    RawDecomposition raw;
    raw.n = n;
    raw.levels.resize(n - 1);
    raw.psi.assign(n, 0.0);

    ComplexMatrix current = x;
    for (std::size_t size = n; size >= 2; --size) {
        PeelResult step = detail::peel_unchecked(current);
        raw.levels[size - 2] = {size - 1, step.theta, std::move(step.a)};
        raw.psi[size - 1] = step.psi;
        current = std::move(step.reduced);
    }
    raw.psi[0] = principal_arg(current(0, 0));
    return raw;
}

/// compose_a(raw levels) * Phi(psi)
inline ComplexMatrix reconstruct(const RawDecomposition& raw) {
    std::vector<FactorSpec> specs;
    specs.reserve(raw.levels.size());
    for (const auto& level : raw.levels) specs.push_back({level.j, level.theta, level.a, FactorKind::A});
    return matmul(compose_a(specs, raw.n), phase_matrix(raw.psi));
}

/// Gauge-fixes a raw decomposition into a canonical ParameterSet.
///
/// Writing a_j = e^{i eta} a'_j with a'_j canonical, the factor satisfies
/// F_j(a_j) = D F_j(a'_j) D^dagger, D = e^{-i eta} at index j (0-based).
/// D^dagger commutes with every lower factor and lands in beta; D travels
/// left through the higher factors, F_k(u) D = D F_k(conj(D) u), and lands
/// in alpha.
inline ParameterSet canonicalize(const RawDecomposition& raw) {
    const std::size_t n = raw.n;
    if (n < 1) throw DomainError("canonicalize: n must be at least 1");
    if (raw.psi.size() != n) throw DimensionError("canonicalize: psi has wrong length");
    if (raw.levels.size() != n - 1) throw DimensionError("canonicalize: wrong number of levels");
    for (std::size_t idx = 0; idx < raw.levels.size(); ++idx) {
        const auto& level = raw.levels[idx];
        if (level.j != idx + 1 || level.a.size() != idx + 1) {
            throw DimensionError("canonicalize: level " + std::to_string(idx + 1) + " is malformed");
        }
        if (!(std::abs(level.a.norm() - 1.0) <= kRawNormTolerance) || !std::isfinite(level.theta)) {
            throw DomainError("canonicalize: level " + std::to_string(idx + 1) + " vector is not unit");
        }
    }

    std::vector<ComplexVector> vectors;
    vectors.reserve(n - 1);
    for (const auto& level : raw.levels) vectors.push_back(level.a);

    ParameterSet p;
    p.n = n;
    p.alpha.assign(n, 0.0);
    p.beta = raw.psi;
    p.levels.reserve(n - 1);

    for (std::size_t j = 1; j < n; ++j) {
        auto [canonical, eta] = canonicalize_vector(vectors[j - 1]);
        const Complex carried = std::polar(1.0, eta);
        for (std::size_t k = j + 1; k < n; ++k) vectors[k - 1][j] *= carried;
        p.alpha[j] -= eta;
        p.beta[j] += eta;
        p.levels.push_back({j, raw.levels[j - 1].theta, vector_to_spherical(canonical)});
    }
    normalize_phase_shift(p);
    return p;
}

/// Canonical parameters of a unitary matrix.
inline ParameterSet decompose(const ComplexMatrix& x, const DecomposeOptions& options = {}) {
    return canonicalize(decompose_raw(x, options));
}

} // namespace unirec
