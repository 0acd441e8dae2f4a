#pragma once

// Real coordinates for the unit vectors A^(j), the canonical gauge and the
// parameter bookkeeping that ties (alpha, beta, levels) to a matrix.
//
// Canonical gauge:
//   theta in [0, pi/2]
//   gammas in [0, pi/2], deltas in [-pi, pi)
//   first nonzero component of every A^(j) real and >= 0
//   beta_1 = 0 (fixes the constant shift between alpha and beta)

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "unirec/cxcore.hpp"
#include "unirec/recursion.hpp"

namespace unirec {

/// Modulus below which a component is treated as zero when picking phases.
inline constexpr double kPhaseThreshold = 1e-12;

/// Norm / canonical-phase tolerance for vector_to_spherical.
inline constexpr double kSphericalInputTolerance = 1e-10;

/// Generalised spherical coordinates of a unit j-vector:
///   a_k = (prod_{m<k} sin gamma_m) cos gamma_k e^{i delta_{k-1}}   (k < j)
///   a_j = (prod_{m<j} sin gamma_m) e^{i delta_{j-1}}
/// with delta_0 = 0, so j-1 gammas and j-1 deltas.
struct SphericalCoords {
    std::vector<double> gammas;
    std::vector<double> deltas;

    friend bool operator==(const SphericalCoords&, const SphericalCoords&) = default;
};

/// Level j: angle theta_{j+1} and the coordinates of A^(j).
struct LevelParams {
    std::size_t j = 1;
    double theta = 0.0;
    SphericalCoords coords;

    friend bool operator==(const LevelParams&, const LevelParams&) = default;
};

/// Full parameterisation X = Phi(alpha) V Phi(beta); levels[j-1] is level j.
struct ParameterSet {
    std::size_t n = 1;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<LevelParams> levels;

    friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

enum class CountScope { V, X };

/// (n-1)^2 for V, n^2 for X.
inline std::size_t parameter_count(std::size_t n, CountScope scope) {
    if (n < 1) throw DomainError("parameter_count: n must be at least 1");
    return scope == CountScope::V ? (n - 1) * (n - 1) : n * n;
}

/// Real degrees of freedom actually carried by a ParameterSet's levels.
inline std::size_t level_parameter_count(const ParameterSet& p) {
    std::size_t count = 0;
    for (const auto& level : p.levels) count += 1 + level.coords.gammas.size() + level.coords.deltas.size();
    return count;
}

inline ComplexVector spherical_to_vector(const SphericalCoords& coords, std::size_t j) {
    if (j < 1) throw DomainError("spherical_to_vector: j must be at least 1");
    if (coords.gammas.size() != j - 1 || coords.deltas.size() != j - 1) {
        throw DimensionError("spherical_to_vector: level " + std::to_string(j) + " needs " +
                             std::to_string(j - 1) + " gammas and deltas, got " +
                             std::to_string(coords.gammas.size()) + " and " +
                             std::to_string(coords.deltas.size()));
    }
    ComplexVector out(j);
    double sine_product = 1.0;
    for (std::size_t k = 0; k < j; ++k) {
        const double radial = k + 1 < j ? sine_product * std::cos(coords.gammas[k]) : sine_product;
        const double phase = k == 0 ? 0.0 : coords.deltas[k - 1];
        out[k] = std::polar(radial, phase);
        if (k + 1 < j) sine_product *= std::sin(coords.gammas[k]);
    }
    return out;
}

/// Inverse of spherical_to_vector on canonical vectors (first component real
/// and >= 0). Undetermined angles in degenerate cases come back as 0.
inline SphericalCoords vector_to_spherical(const ComplexVector& a) {
    const std::size_t j = a.size();
    if (j < 1) throw DomainError("vector_to_spherical: empty vector");
    const double norm = a.norm();
    if (!(std::abs(norm - 1.0) <= kSphericalInputTolerance)) {
        throw DomainError("vector_to_spherical: vector norm " + std::to_string(norm) + " is not 1");
    }
    if (std::abs(a[0].imag()) > kSphericalInputTolerance || a[0].real() < -kSphericalInputTolerance) {
        throw DomainError("vector_to_spherical: first component is not real and non-negative");
    }

    // tails[k] = || (a_k, ..., a_j) ||
    std::vector<double> tails(j + 1, 0.0);
    for (std::size_t k = j; k-- > 0;) tails[k] = std::hypot(tails[k + 1], std::abs(a[k]));

    SphericalCoords out;
    out.gammas.reserve(j - 1);
    out.deltas.reserve(j - 1);
    for (std::size_t k = 0; k + 1 < j; ++k) {
        const double modulus = std::abs(a[k]);
        const double rest = tails[k + 1];
        // atan2(0, 0) = 0 covers the degenerate tail.
        out.gammas.push_back(tails[k] < kPhaseThreshold ? 0.0 : std::atan2(rest, modulus));
    }
    for (std::size_t k = 1; k < j; ++k) {
        out.deltas.push_back(std::abs(a[k]) < kPhaseThreshold ? 0.0 : principal_arg(a[k]));
    }
    return out;
}

/// Strips the overall phase: returns (e^{-i eta} a, eta), eta being the
/// argument of the first component with modulus above kPhaseThreshold.
inline std::pair<ComplexVector, double> canonicalize_vector(const ComplexVector& a) {
    const double norm = a.norm();
    if (!(std::abs(norm - 1.0) <= kSphericalInputTolerance)) {
        throw DomainError("canonicalize_vector: vector norm " + std::to_string(norm) + " is not 1");
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k]) > kPhaseThreshold) {
            const double eta = principal_arg(a[k]);
            ComplexVector out = std::polar(1.0, -eta) * a;
            out[k] = std::abs(a[k]);
            return {std::move(out), eta};
        }
    }
    throw DomainError("canonicalize_vector: all components vanish");
}

/// Structural checks: sizes of alpha/beta/levels and per-level coordinate
/// counts. Ranges are not enforced here (any real angles compose fine).
inline void validate_parameter_set(const ParameterSet& p) {
    if (p.n < 1) throw DomainError("parameter set: n must be at least 1");
    if (p.alpha.size() != p.n) {
        throw DimensionError("parameter set: alpha has " + std::to_string(p.alpha.size()) +
                             " entries, expected " + std::to_string(p.n));
    }
    if (p.beta.size() != p.n) {
        throw DimensionError("parameter set: beta has " + std::to_string(p.beta.size()) +
                             " entries, expected " + std::to_string(p.n));
    }
    if (p.levels.size() != p.n - 1) {
        throw DimensionError("parameter set: " + std::to_string(p.levels.size()) + " levels, expected " +
                             std::to_string(p.n - 1));
    }
    for (std::size_t idx = 0; idx < p.levels.size(); ++idx) {
        const auto& level = p.levels[idx];
        if (level.j != idx + 1) {
            throw DomainError("parameter set: levels[" + std::to_string(idx) + "] has j = " +
                              std::to_string(level.j) + ", expected " + std::to_string(idx + 1));
        }
        if (level.coords.gammas.size() != idx || level.coords.deltas.size() != idx) {
            throw DimensionError("parameter set: level " + std::to_string(idx + 1) + " needs " +
                                 std::to_string(idx) + " gammas and deltas");
        }
    }
}

/// True when every range constraint of the canonical gauge holds (within tol).
inline bool is_canonical(const ParameterSet& p, double tol = 1e-12) {
    constexpr double half_pi = std::numbers::pi / 2;
    auto in_quarter = [&](double x) { return x >= -tol && x <= half_pi + tol; };
    auto in_phase = [&](double x) { return x >= -std::numbers::pi - tol && x < std::numbers::pi + tol; };
    if (!p.beta.empty() && std::abs(p.beta[0]) > tol) return false;
    for (double x : p.alpha)
        if (!in_phase(x)) return false;
    for (double x : p.beta)
        if (!in_phase(x)) return false;
    for (const auto& level : p.levels) {
        if (!in_quarter(level.theta)) return false;
        for (double g : level.coords.gammas)
            if (!in_quarter(g)) return false;
        for (double d : level.coords.deltas)
            if (!in_phase(d)) return false;
    }
    return true;
}

inline std::vector<FactorSpec> levels_to_factor_specs(const ParameterSet& p) {
    validate_parameter_set(p);
    std::vector<FactorSpec> specs;
    specs.reserve(p.levels.size());
    for (const auto& level : p.levels) {
        specs.push_back({level.j, level.theta, spherical_to_vector(level.coords, level.j), FactorKind::A});
    }
    return specs;
}

/// Matrix described by a ParameterSet.
inline ComplexMatrix compose(const ParameterSet& p) {
    return compose_full(p.alpha, p.beta, levels_to_factor_specs(p));
}

/// Zero parameters for dimension n (composes to the identity).
inline ParameterSet zero_parameters(std::size_t n) {
    if (n < 1) throw DomainError("zero_parameters: n must be at least 1");
    ParameterSet p;
    p.n = n;
    p.alpha.assign(n, 0.0);
    p.beta.assign(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        p.levels.push_back({j, 0.0, {std::vector<double>(j - 1, 0.0), std::vector<double>(j - 1, 0.0)}});
    }
    return p;
}

/// Moves a constant between alpha and beta so that beta_1 = 0; the composed
/// matrix is unchanged. Phases are wrapped to [-pi, pi).
inline void normalize_phase_shift(ParameterSet& p) {
    if (p.beta.empty()) return;
    const double shift = p.beta[0];
    for (auto& x : p.alpha) x = wrap_angle(x + shift);
    for (auto& x : p.beta) x = wrap_angle(x - shift);
    p.beta[0] = 0.0;
}

} // namespace unirec
