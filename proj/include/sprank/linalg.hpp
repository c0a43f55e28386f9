#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sprank/field.hpp"

namespace sprank {

/// Dense matrix over a FieldCtx. Row-major. All elimination uses deterministic
/// first-nonzero pivoting, so ranks, kernels and solutions are reproducible.
class Matrix {
  public:
    Matrix() = default;
    Matrix(FieldCtx field, size_t rows, size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

    const FieldCtx& field() const { return field_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    FieldElement& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const FieldElement& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Matrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix transposed() const {
        Matrix t(field_, cols_, rows_);
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    /// Reduce to reduced row echelon form in place; returns the pivot columns.
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t row = 0;
        for (size_t col = 0; col < cols_ && row < rows_; ++col) {
            size_t piv = row;
            while (piv < rows_ && field_.is_zero(at(piv, col))) ++piv;
            if (piv == rows_) continue;
            if (piv != row)
                for (size_t k = 0; k < cols_; ++k) std::swap(at(piv, k), at(row, k));
            FieldElement s = field_.inv(at(row, col));
            for (size_t k = col; k < cols_; ++k) at(row, k) = field_.mul(at(row, k), s);
            for (size_t r = 0; r < rows_; ++r) {
                if (r == row || field_.is_zero(at(r, col))) continue;
                FieldElement f = at(r, col);
                for (size_t k = col; k < cols_; ++k)
                    at(r, k) = field_.sub(at(r, k), field_.mul(f, at(row, k)));
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    size_t rank() const {
        Matrix m = *this;
        return m.rref().size();
    }

  private:
    FieldCtx field_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElement> data_;
};

/// Solve A x = b. Returns the particular solution with all free variables set
/// to zero, or nullopt when the system is inconsistent.
inline std::optional<std::vector<FieldElement>> solve(const Matrix& A,
                                                      const std::vector<FieldElement>& b) {
    const FieldCtx& F = A.field();
    Matrix aug(F, A.rows(), A.cols() + 1);
    for (size_t r = 0; r < A.rows(); ++r) {
        for (size_t c = 0; c < A.cols(); ++c) aug.at(r, c) = A.at(r, c);
        aug.at(r, A.cols()) = b[r];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
    std::vector<FieldElement> x(A.cols(), F.zero());
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(i, A.cols());
    return x;
}

/// Basis of the right kernel {x : A x = 0}, one vector per free column of the
/// RREF, ordered by ascending free column index.
inline std::vector<std::vector<FieldElement>> kernel_basis(const Matrix& A) {
    const FieldCtx& F = A.field();
    Matrix m = A;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(A.cols(), false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<FieldElement>> basis;
    for (size_t free = 0; free < A.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<FieldElement> v(A.cols(), F.zero());
        v[free] = F.one();
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(m.at(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Inverse of a square matrix, or nullopt when singular.
inline std::optional<Matrix> invert(const Matrix& A) {
    if (A.rows() != A.cols()) return std::nullopt;
    const FieldCtx& F = A.field();
    size_t n = A.rows();
    Matrix aug(F, n, 2 * n);
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < n; ++c) aug.at(r, c) = A.at(r, c);
        aug.at(r, n + r) = F.one();
    }
    auto pivots = aug.rref();
    if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
    Matrix inv(F, n, n);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) inv.at(r, c) = aug.at(r, n + c);
    return inv;
}

/// Deterministic basis of the row space: the nonzero rows of the RREF.
inline std::vector<std::vector<FieldElement>> row_space_basis(const Matrix& A) {
    const FieldCtx& F = A.field();
    Matrix m = A;
    auto pivots = m.rref();
    std::vector<std::vector<FieldElement>> basis;
    for (size_t i = 0; i < pivots.size(); ++i) {
        std::vector<FieldElement> v(A.cols(), F.zero());
        for (size_t c = 0; c < A.cols(); ++c) v[c] = m.at(i, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace sprank
