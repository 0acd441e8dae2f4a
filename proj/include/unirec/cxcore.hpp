#pragma once

// Small dense complex linear algebra: just enough for building and peeling
// unitary matrices of desk-scale size. Row-major, value semantics, double
// precision throughout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unirec/error.hpp"

namespace unirec {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Fixed-length complex column vector.
class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::size_t size) : entries_(size) {}
    ComplexVector(std::initializer_list<Complex> entries) : entries_(entries) {}
    explicit ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {}

    std::size_t size() const noexcept { return entries_.size(); }

    Complex& operator[](std::size_t i) { return entries_[i]; }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }
    auto begin() noexcept { return entries_.begin(); }
    auto end() noexcept { return entries_.end(); }

    std::span<const Complex> entries() const noexcept { return entries_; }

    /// Euclidean norm.
    double norm() const {
        double sum = 0.0;
        for (const auto& z : entries_) sum += std::norm(z);
        return std::sqrt(sum);
    }

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

private:
    std::vector<Complex> entries_;
};

inline ComplexVector operator*(Complex scale, const ComplexVector& v) {
    ComplexVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * v[i];
    return out;
}

inline ComplexVector operator-(const ComplexVector& v) { return Complex{-1.0, 0.0} * v; }

/// e_k of length m (0-based k).
inline ComplexVector basis_vector(std::size_t m, std::size_t k) {
    ComplexVector e(m);
    e[k] = 1.0;
    return e;
}

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_) {
            throw DimensionError("matrix entry count " + std::to_string(entries_.size()) +
                                 " does not match shape " + std::to_string(rows_) + "x" +
                                 std::to_string(cols_));
        }
    }

    /// Row-wise literal, e.g. {{1, 0}, {0, 1}}. All rows must have equal length.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) throw DimensionError("ragged matrix literal");
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static ComplexMatrix diagonal(std::span<const Complex> diag) {
        ComplexMatrix m(diag.size(), diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const Complex> entries() const noexcept { return entries_; }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: cannot multiply " + a.shape() + " by " + b.shape());
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

inline ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& v) {
    if (a.cols() != v.size()) {
        throw DimensionError("matvec: cannot apply " + a.shape() + " to vector of length " +
                             std::to_string(v.size()));
    }
    ComplexVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex sum{};
        for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * v[k];
        out[i] = sum;
    }
    return out;
}

/// Conjugate transpose.
inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

/// result(i, j) = a_i * conj(b_j)
inline ComplexMatrix outer_product(const ComplexVector& a, const ComplexVector& b) {
    ComplexMatrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

/// Inner product <a|b> = sum conj(a_i) b_i.
inline Complex inner_product(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionError("inner_product: length mismatch");
    Complex sum{};
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

/// Largest entrywise modulus of a - b.
inline double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_difference: shapes " + a.shape() + " and " + b.shape() +
                             " differ");
    }
    double worst = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
    return worst;
}

/// max |(a^dagger a - I)_ij|
inline double unitarity_deviation(const ComplexMatrix& a) {
    if (!a.is_square()) throw DimensionError("unitarity_deviation: matrix " + a.shape() + " is not square");
    const std::size_t n = a.rows();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex sum{};
            for (std::size_t k = 0; k < n; ++k) sum += std::conj(a(k, i)) * a(k, j);
            if (i == j) sum -= 1.0;
            worst = std::max(worst, std::abs(sum));
        }
    }
    return worst;
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("frobenius_distance: shapes " + a.shape() + " and " + b.shape() +
                             " differ");
    }
    double sum = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) sum += std::norm(ea[i] - eb[i]);
    return std::sqrt(sum);
}

/// Determinant by LU with partial pivoting.
inline Complex determinant(ComplexMatrix a) {
    if (!a.is_square()) throw DimensionError("determinant: matrix " + a.shape() + " is not square");
    const std::size_t n = a.rows();
    Complex det{1.0, 0.0};
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == Complex{}) return Complex{};
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            det = -det;
        }
        const Complex p = a(col, col);
        det *= p;
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a(r, col) / p;
            if (f == Complex{}) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

inline bool is_finite(const ComplexMatrix& a) {
    return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

/// Diagonal unitary with entries e^{i phase_k}.
inline ComplexMatrix phase_matrix(std::span<const double> phases) {
    ComplexMatrix m(phases.size(), phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k) m(k, k) = std::polar(1.0, phases[k]);
    return m;
}

/// Top-left rows x cols block.
inline ComplexMatrix leading_block(const ComplexMatrix& a, std::size_t rows, std::size_t cols) {
    if (rows > a.rows() || cols > a.cols()) {
        throw DimensionError("leading_block: " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " exceeds " + a.shape());
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
    return out;
}

/// diag(block, I) of total size n.
inline ComplexMatrix block_diagonal_with_identity(const ComplexMatrix& block, std::size_t n) {
    if (!block.is_square()) throw DimensionError("block " + block.shape() + " is not square");
    if (block.rows() > n) {
        throw DimensionError("block " + block.shape() + " does not fit into " + std::to_string(n) +
                             "x" + std::to_string(n));
    }
    ComplexMatrix out = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j) out(i, j) = block(i, j);
    return out;
}

/// Maps an angle onto the principal range [-pi, pi).
inline double wrap_angle(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = angle - two_pi * std::floor((angle + std::numbers::pi) / two_pi);
    if (wrapped >= std::numbers::pi) wrapped -= two_pi;
    if (wrapped < -std::numbers::pi) wrapped = -std::numbers::pi;
    return wrapped;
}

/// Principal argument in [-pi, pi), with arg(0) = 0.
inline double principal_arg(Complex z) {
    if (z == Complex{}) return 0.0;
    return wrap_angle(std::arg(z));
}

} // namespace unirec
