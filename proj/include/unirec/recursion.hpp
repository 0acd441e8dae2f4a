#pragma once

// Forward construction of V^(n) level by level. A level j grows a j x j
// unitary to (j+1) x (j+1) using an angle theta_{j+1} and a unit j-vector A
// (or its partner B = -V^dagger A).

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "unirec/cxcore.hpp"

namespace unirec {

/// |v| must be within this of 1 for A/B vectors.
inline constexpr double kUnitNormTolerance = 1e-12;

/// Precondition gate for the V^(n-1) argument of single-step builders.
inline constexpr double kStepUnitarityTolerance = 1e-9;

enum class FactorKind { A, B };

/// One factor of the product recursion: level j in [1, n-1], the angle
/// theta_{j+1} and a unit vector of length j.
struct FactorSpec {
    std::size_t level = 1;
    double theta = 0.0;
    ComplexVector vector;
    FactorKind kind = FactorKind::A;
};

namespace detail {

inline void require_unit(const ComplexVector& v, const char* who) {
    const double norm = v.norm();
    if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
        throw DomainError(std::string(who) + ": vector norm " + std::to_string(norm) +
                          " is not 1 within tolerance");
    }
}

inline void require_unitary(const ComplexMatrix& v, const char* who) {
    if (!v.is_square()) throw DimensionError(std::string(who) + ": matrix " + v.shape() + " is not square");
    const double dev = unitarity_deviation(v);
    if (!(dev <= kStepUnitarityTolerance)) {
        throw NotUnitaryError(std::string(who) + ": matrix is not unitary (deviation " +
                                  std::to_string(dev) + ")",
                              dev);
    }
}

inline void require_matching(const ComplexMatrix& v, const ComplexVector& a, const char* who) {
    if (v.rows() != a.size()) {
        throw DimensionError(std::string(who) + ": matrix " + v.shape() +
                             " does not match vector of length " + std::to_string(a.size()));
    }
}

// [[I - (1-c) |u><u|, sign*s |u>], [-sign*s <u|, c]]
inline ComplexMatrix factor_block(double theta, const ComplexVector& u, double sign) {
    const std::size_t j = u.size();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ComplexMatrix out(j + 1, j + 1);
    for (std::size_t r = 0; r < j; ++r) {
        for (std::size_t q = 0; q < j; ++q) {
            out(r, q) = (r == q ? 1.0 : 0.0) - (1.0 - c) * u[r] * std::conj(u[q]);
        }
        out(r, j) = sign * s * u[r];
        out(j, r) = -sign * s * std::conj(u[r]);
    }
    out(j, j) = c;
    return out;
}

} // namespace detail

/// B = -V^dagger A
inline ComplexVector b_from_a(const ComplexMatrix& v, const ComplexVector& a) {
    detail::require_matching(v, a, "b_from_a");
    detail::require_unit(a, "b_from_a");
    detail::require_unitary(v, "b_from_a");
    return -matvec(adjoint(v), a);
}

/// A = -V B
inline ComplexVector a_from_b(const ComplexMatrix& v, const ComplexVector& b) {
    detail::require_matching(v, b, "a_from_b");
    detail::require_unit(b, "a_from_b");
    detail::require_unitary(v, "a_from_b");
    return -matvec(v, b);
}

/// Single-block form [[V + (1-c)|A><B|, s|A>], [s<B|, c]] with B = -V^dagger A.
inline ComplexMatrix mixed_form(const ComplexMatrix& v_prev, double theta, const ComplexVector& a) {
    const ComplexVector b = b_from_a(v_prev, a);
    const std::size_t m = a.size();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ComplexMatrix out(m + 1, m + 1);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t q = 0; q < m; ++q) out(r, q) = v_prev(r, q) + (1.0 - c) * a[r] * std::conj(b[q]);
        out(r, m) = s * a[r];
        out(m, r) = s * std::conj(b[r]);
    }
    out(m, m) = c;
    return out;
}

/// Inner block of A_{n,j}: [[I - (1-c)|A><A|, s|A>], [-s<A|, c]], size j+1.
inline ComplexMatrix a_factor_block(double theta, const ComplexVector& a) {
    detail::require_unit(a, "a_factor_block");
    return detail::factor_block(theta, a, 1.0);
}

/// Inner block of B_{n,j}: [[I - (1-c)|B><B|, -s|B>], [s<B|, c]], size j+1.
inline ComplexMatrix b_factor_block(double theta, const ComplexVector& b) {
    detail::require_unit(b, "b_factor_block");
    return detail::factor_block(theta, b, -1.0);
}

/// diag(block, I_{n - size(block)})
inline ComplexMatrix embed_factor(const ComplexMatrix& block, std::size_t n) {
    return block_diagonal_with_identity(block, n);
}

/// V^(n) = A_{n,n-1} diag(V^(n-1), 1)
inline ComplexMatrix step_a(const ComplexMatrix& v_prev, double theta, const ComplexVector& a) {
    detail::require_matching(v_prev, a, "step_a");
    detail::require_unitary(v_prev, "step_a");
    const std::size_t n = a.size() + 1;
    return matmul(a_factor_block(theta, a), embed_factor(v_prev, n));
}

/// V^(n) = diag(V^(n-1), 1) B_{n,n-1}
inline ComplexMatrix step_b(const ComplexMatrix& v_prev, double theta, const ComplexVector& b) {
    detail::require_matching(v_prev, b, "step_b");
    detail::require_unitary(v_prev, "step_b");
    const std::size_t n = b.size() + 1;
    return matmul(embed_factor(v_prev, n), b_factor_block(theta, b));
}

namespace detail {

inline void validate_levels(const std::vector<FactorSpec>& levels, std::size_t n, FactorKind kind,
                            const char* who) {
    if (n < 1) throw DomainError(std::string(who) + ": n must be at least 1");
    if (levels.size() != n - 1) {
        throw DimensionError(std::string(who) + ": expected " + std::to_string(n - 1) +
                             " levels for n = " + std::to_string(n) + ", got " +
                             std::to_string(levels.size()));
    }
    for (std::size_t idx = 0; idx < levels.size(); ++idx) {
        const auto& spec = levels[idx];
        const std::size_t j = idx + 1;
        if (spec.level != j) {
            throw DomainError(std::string(who) + ": levels[" + std::to_string(idx) +
                              "] carries level " + std::to_string(spec.level) + ", expected " +
                              std::to_string(j));
        }
        if (spec.vector.size() != j) {
            throw DimensionError(std::string(who) + ": level " + std::to_string(j) + " vector has " +
                                 std::to_string(spec.vector.size()) + " components, expected " +
                                 std::to_string(j));
        }
        if (spec.kind != kind) {
            throw DomainError(std::string(who) + ": level " + std::to_string(j) + " has the wrong factor kind");
        }
        if (!std::isfinite(spec.theta)) {
            throw DomainError(std::string(who) + ": level " + std::to_string(j) + " theta is not finite");
        }
    }
}

} // namespace detail

/// V^(n) = A_{n,n-1} A_{n,n-2} ... A_{n,1}. `levels` is indexed by level
/// (levels[j-1] holds level j) and accumulated left to right as written.
inline ComplexMatrix compose_a(const std::vector<FactorSpec>& levels, std::size_t n) {
    detail::validate_levels(levels, n, FactorKind::A, "compose_a");
    ComplexMatrix out = ComplexMatrix::identity(n);
    for (std::size_t j = n - 1; j >= 1; --j) {
        const auto& spec = levels[j - 1];
        out = matmul(out, embed_factor(a_factor_block(spec.theta, spec.vector), n));
    }
    return out;
}

/// V^(n) = B_{n,1} B_{n,2} ... B_{n,n-1}, accumulated left to right.
inline ComplexMatrix compose_b(const std::vector<FactorSpec>& levels, std::size_t n) {
    detail::validate_levels(levels, n, FactorKind::B, "compose_b");
    ComplexMatrix out = ComplexMatrix::identity(n);
    for (std::size_t j = 1; j < n; ++j) {
        const auto& spec = levels[j - 1];
        out = matmul(out, embed_factor(b_factor_block(spec.theta, spec.vector), n));
    }
    return out;
}

/// Converts A-form levels into the B-form levels that produce the same V^(n):
/// level j gets B^(j) = -V^(j)^dagger A^(j), V^(j) being the partial product
/// of levels 1..j-1.
inline std::vector<FactorSpec> paired_b_levels(const std::vector<FactorSpec>& a_levels, std::size_t n) {
    detail::validate_levels(a_levels, n, FactorKind::A, "paired_b_levels");
    std::vector<FactorSpec> out;
    out.reserve(a_levels.size());
    ComplexMatrix v = ComplexMatrix::identity(1);
    for (const auto& spec : a_levels) {
        out.push_back({spec.level, spec.theta, b_from_a(v, spec.vector), FactorKind::B});
        v = step_a(v, spec.theta, spec.vector);
    }
    return out;
}

/// Both sides of A_{n,j} = diag(V^(j), I) B_{n,j} diag(V^(j)^dagger, I) with
/// B = -V^(j)^dagger A. First: A_{n,j} built directly; second: the
/// conjugated B-factor.
inline std::pair<ComplexMatrix, ComplexMatrix> factor_conjugation(std::size_t j, std::size_t n,
                                                                  const ComplexMatrix& vj, double theta,
                                                                  const ComplexVector& a) {
    if (j < 1 || j >= n) {
        throw DimensionError("factor_conjugation: level " + std::to_string(j) + " outside [1, " +
                             std::to_string(n - 1) + "]");
    }
    if (vj.rows() != j || a.size() != j) {
        throw DimensionError("factor_conjugation: expected " + std::to_string(j) + "x" + std::to_string(j) +
                             " matrix and length-" + std::to_string(j) + " vector, got " + vj.shape() +
                             " and " + std::to_string(a.size()));
    }
    const ComplexVector b = b_from_a(vj, a);
    ComplexMatrix direct = embed_factor(a_factor_block(theta, a), n);
    const ComplexMatrix frame = embed_factor(vj, n);
    ComplexMatrix conjugated =
        matmul(matmul(frame, embed_factor(b_factor_block(theta, b), n)), adjoint(frame));
    return {std::move(direct), std::move(conjugated)};
}

/// X = Phi(alpha) V Phi(beta) with V = compose_a(levels).
inline ComplexMatrix compose_full(std::span<const double> alpha, std::span<const double> beta,
                                  const std::vector<FactorSpec>& levels) {
    if (alpha.size() != beta.size()) {
        throw DimensionError("compose_full: alpha has " + std::to_string(alpha.size()) +
                             " entries but beta has " + std::to_string(beta.size()));
    }
    const std::size_t n = alpha.size();
    if (n < 1) throw DomainError("compose_full: n must be at least 1");
    const ComplexMatrix v = compose_a(levels, n);
    // Phi(alpha) V Phi(beta) entrywise.
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = std::polar(1.0, alpha[r]) * v(r, c) * std::polar(1.0, beta[c]);
    return out;
}

} // namespace unirec
