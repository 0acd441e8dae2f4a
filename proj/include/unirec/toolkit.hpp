#pragma once

// Sampling, unitarity reports and least-squares fitting over the
// parameterisation.
//
// Random numbers come from std::mt19937_64. Uniform sampling of the
// parameters is NOT the Haar measure on U(n); haar_unitary is the separate,
// measure-correct sampler used as an independent test oracle.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "unirec/cxcore.hpp"
#include "unirec/decompose.hpp"
#include "unirec/gauge.hpp"

namespace unirec {

using Rng = std::mt19937_64;

/// thetas, gammas ~ U[0, pi/2]; deltas, alpha, beta ~ U[-pi, pi); beta_1 = 0.
inline ParameterSet sample_parameters(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample_parameters: n must be at least 1");
    Rng rng(seed);
    std::uniform_real_distribution<double> quarter(0.0, std::numbers::pi / 2);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);

    ParameterSet p;
    p.n = n;
    p.alpha.resize(n);
    p.beta.resize(n);
    for (auto& x : p.alpha) x = phase(rng);
    for (auto& x : p.beta) x = phase(rng);
    p.beta[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        LevelParams level{j, quarter(rng), {}};
        for (std::size_t k = 0; k + 1 < j; ++k) level.coords.gammas.push_back(quarter(rng));
        for (std::size_t k = 0; k + 1 < j; ++k) level.coords.deltas.push_back(phase(rng));
        p.levels.push_back(std::move(level));
    }
    return p;
}

/// Haar-distributed unitary: complex Ginibre matrix, QR by twice-iterated
/// modified Gram-Schmidt. R has a positive real diagonal, which is the phase
/// correction that makes Q Haar.
inline ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("haar_unitary: n must be at least 1");
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<ComplexVector> columns(n, ComplexVector(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) columns[c][r] = Complex{gauss(rng), gauss(rng)};

    for (std::size_t k = 0; k < n; ++k) {
        auto& v = columns[k];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < k; ++i) {
                const Complex proj = inner_product(columns[i], v);
                for (std::size_t r = 0; r < n; ++r) v[r] -= proj * columns[i][r];
            }
        }
        const double norm = v.norm();
        if (norm == 0.0) throw Error("haar_unitary: rank-deficient Gaussian sample");
        for (std::size_t r = 0; r < n; ++r) v[r] /= norm;
    }

    ComplexMatrix q(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) q(r, c) = columns[c][r];
    return q;
}

struct UnitaryCheckReport {
    std::size_t n = 0;
    double deviation = 0.0;        // max |X^dagger X - I|
    double det_modulus_error = 0.0; // | |det X| - 1 |
    double tolerance = 0.0;
    bool pass = false;
};

/// Never throws on non-unitary input; only on a non-square one.
inline UnitaryCheckReport verify(const ComplexMatrix& x, double tolerance) {
    if (!x.is_square()) throw DimensionError("verify: matrix " + x.shape() + " is not square");
    UnitaryCheckReport report;
    report.n = x.rows();
    report.deviation = unitarity_deviation(x);
    report.det_modulus_error = std::abs(std::abs(determinant(x)) - 1.0);
    report.tolerance = tolerance;
    report.pass = report.deviation <= tolerance;
    return report;
}

struct FitConfig {
    std::size_t max_iterations = 500;
    double gradient_step = 1e-6;
    double learning_rate = 0.05;
    double convergence_tol = 1e-15;
    std::size_t seed_count = 4;
    std::uint64_t rng_seed = 0;
};

/// A fit this close is exact to working precision.
inline constexpr double kExactFitDistance = 1e-12;

struct FitResult {
    ParameterSet parameters;
    double distance = 0.0;
    std::size_t best_restart = 0;
};

/// Free coordinates of a ParameterSet, in the order
///   alpha_1..alpha_n, beta_2..beta_n, then per level j: theta, gammas, deltas.
/// beta_1 is pinned to 0, so there are n^2 of them.
inline std::vector<double> flatten_free_parameters(const ParameterSet& p) {
    validate_parameter_set(p);
    std::vector<double> out;
    out.reserve(p.n * p.n);
    out.insert(out.end(), p.alpha.begin(), p.alpha.end());
    out.insert(out.end(), p.beta.begin() + 1, p.beta.end());
    for (const auto& level : p.levels) {
        out.push_back(level.theta);
        out.insert(out.end(), level.coords.gammas.begin(), level.coords.gammas.end());
        out.insert(out.end(), level.coords.deltas.begin(), level.coords.deltas.end());
    }
    return out;
}

inline ParameterSet unflatten_free_parameters(std::span<const double> x, std::size_t n) {
    if (n < 1) throw DomainError("unflatten_free_parameters: n must be at least 1");
    if (x.size() != n * n) {
        throw DimensionError("unflatten_free_parameters: expected " + std::to_string(n * n) +
                             " coordinates, got " + std::to_string(x.size()));
    }
    ParameterSet p;
    p.n = n;
    auto it = x.begin();
    p.alpha.assign(it, it + static_cast<std::ptrdiff_t>(n));
    it += static_cast<std::ptrdiff_t>(n);
    p.beta.push_back(0.0);
    p.beta.insert(p.beta.end(), it, it + static_cast<std::ptrdiff_t>(n - 1));
    it += static_cast<std::ptrdiff_t>(n - 1);
    for (std::size_t j = 1; j < n; ++j) {
        LevelParams level{j, *it++, {}};
        const auto count = static_cast<std::ptrdiff_t>(j - 1);
        level.coords.gammas.assign(it, it + count);
        it += count;
        level.coords.deltas.assign(it, it + count);
        it += count;
        p.levels.push_back(std::move(level));
    }
    return p;
}

/// ||compose(P) - target||_F^2 at free coordinates x.
inline double fit_objective(std::span<const double> x, const ComplexMatrix& target) {
    const double d = frobenius_distance(compose(unflatten_free_parameters(x, target.rows())), target);
    return d * d;
}

/// Central finite-difference gradient of fit_objective.
inline std::vector<double> fit_gradient(std::span<const double> x, const ComplexMatrix& target, double step) {
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = probe[i];
        probe[i] = saved + step;
        const double up = fit_objective(probe, target);
        probe[i] = saved - step;
        const double down = fit_objective(probe, target);
        probe[i] = saved;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

namespace detail {

// Nearest unitary (polar factor) by the scaled-free Newton iteration
// X <- (X + X^{-dagger}) / 2. Empty when the target is singular.
inline std::optional<ComplexMatrix> polar_unitary_factor(const ComplexMatrix& target) {
    const std::size_t n = target.rows();
    ComplexMatrix x = target;
    for (int iter = 0; iter < 100; ++iter) {
        // Gauss-Jordan inverse of x.
        ComplexMatrix work = x;
        ComplexMatrix inv = ComplexMatrix::identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
            if (std::abs(work(pivot, col)) < 1e-12) return std::nullopt;
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(work(pivot, c), work(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
            const Complex p = work(col, col);
            for (std::size_t c = 0; c < n; ++c) {
                work(col, c) /= p;
                inv(col, c) /= p;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col) continue;
                const Complex f = work(r, col);
                if (f == Complex{}) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    work(r, c) -= f * work(col, c);
                    inv(r, c) -= f * inv(col, c);
                }
            }
        }
        const ComplexMatrix inv_adj = adjoint(inv);
        ComplexMatrix next(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) next(r, c) = 0.5 * (x(r, c) + inv_adj(r, c));
        const double change = frobenius_distance(next, x);
        x = std::move(next);
        if (!is_finite(x)) return std::nullopt;
        if (change < 1e-15 * static_cast<double>(n)) break;
    }
    if (unitarity_deviation(x) > 1e-10) return std::nullopt;
    return x;
}

inline ParameterSet fit_warm_start(const ComplexMatrix& target) {
    if (unitarity_deviation(target) <= 1e-10) return decompose(target, {1e-10});
    if (auto polar = polar_unitary_factor(target)) return decompose(*polar, {1e-10});
    return zero_parameters(target.rows());
}

struct DescentOutcome {
    std::vector<double> x;
    double objective;
};

// Gradient descent with step-size adaptation; a step is only taken when it
// lowers the objective.
inline DescentOutcome descend(std::vector<double> x, const ComplexMatrix& target, const FitConfig& config) {
    double f = fit_objective(x, target);
    if (x.empty()) return {std::move(x), f};
    double rate = config.learning_rate;
    std::vector<double> trial(x.size());
    for (std::size_t iter = 0; iter < config.max_iterations && f > 0.0; ++iter) {
        const std::vector<double> grad = fit_gradient(x, target, config.gradient_step);
        double grad_norm = 0.0;
        for (double g : grad) grad_norm += g * g;
        if (grad_norm == 0.0) break;
        bool accepted = false;
        while (rate > 1e-18) {
            for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - rate * grad[i];
            const double f_trial = fit_objective(trial, target);
            if (f_trial < f) {
                const double improvement = f - f_trial;
                x.swap(trial);
                f = f_trial;
                rate *= 1.5;
                accepted = true;
                if (improvement < config.convergence_tol) return {std::move(x), f};
                break;
            }
            rate *= 0.5;
        }
        if (!accepted) break;
    }
    return {std::move(x), f};
}

} // namespace detail

/// Minimises ||compose(P) - target||_F^2 over the n^2 free coordinates.
/// Restart 0 starts from the decomposition of the target (or of its nearest
/// unitary); restart k >= 1 from sample_parameters(n, rng_seed + k). The
/// lowest distance wins, ties going to the lowest restart index. Remaining
/// restarts are skipped once a distance of kExactFitDistance is reached.
inline FitResult fit(const ComplexMatrix& target, const FitConfig& config = {}) {
    if (!target.is_square() || target.rows() < 1) {
        throw DimensionError("fit: target " + target.shape() + " is not a non-empty square matrix");
    }
    if (!is_finite(target)) throw DomainError("fit: target has non-finite entries");
    if (config.seed_count < 1 || !(config.gradient_step > 0.0) || !(config.learning_rate > 0.0) ||
        !(config.convergence_tol > 0.0)) {
        throw DomainError("fit: configuration values must be positive and seed_count >= 1");
    }
    const std::size_t n = target.rows();

    std::optional<detail::DescentOutcome> best;
    std::size_t best_index = 0;
    for (std::size_t k = 0; k < config.seed_count; ++k) {
        const ParameterSet start = k == 0 ? detail::fit_warm_start(target) : sample_parameters(n, config.rng_seed + k);
        auto outcome = detail::descend(flatten_free_parameters(start), target, config);
        if (!best || outcome.objective < best->objective) {
            best = std::move(outcome);
            best_index = k;
        }
        if (best->objective <= kExactFitDistance * kExactFitDistance) break;
    }

    FitResult result;
    result.best_restart = best_index;
    result.parameters = unflatten_free_parameters(best->x, n);
    result.distance = std::sqrt(best->objective);

    // Re-express in the canonical gauge when that does not cost accuracy.
    ParameterSet canonical = decompose(compose(result.parameters), {1e-10});
    const double canonical_distance = frobenius_distance(compose(canonical), target);
    if (canonical_distance <= result.distance) {
        result.parameters = std::move(canonical);
        result.distance = canonical_distance;
    }
    return result;
}

} // namespace unirec
