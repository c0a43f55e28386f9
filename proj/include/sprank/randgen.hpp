#pragma once

#include <cstdint>
#include <vector>

#include "sprank/linalg.hpp"
#include "sprank/poly.hpp"
#include "sprank/rng.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

/// Uniform element for finite fields; small bounded-height rationals for Q.
inline FieldElement random_element(const FieldCtx& F, Rng& rng) {
    if (F.is_finite()) return F.element_at(rng.below(F.size()));
    int64_t num = static_cast<int64_t>(rng.below(19)) - 9;
    int64_t den = static_cast<int64_t>(rng.below(9)) + 1;
    return F.from_rational(BigRat(num, den));
}

inline FieldElement random_nonzero_element(const FieldCtx& F, Rng& rng) {
    for (;;) {
        FieldElement x = random_element(F, rng);
        if (!F.is_zero(x)) return x;
    }
}

inline Form random_form(const FieldCtx& F, int nvars, int degree, Rng& rng) {
    Form f(F, nvars, degree);
    for (const auto& e : monomials_exact(nvars, degree)) f.add_term(e, random_element(F, rng));
    return f;
}

inline Form random_nonzero_form(const FieldCtx& F, int nvars, int degree, Rng& rng) {
    for (;;) {
        Form f = random_form(F, nvars, degree, rng);
        if (!f.is_zero()) return f;
    }
}

inline Tensor random_tensor(const FieldCtx& F, const std::vector<uint32_t>& shape, Rng& rng) {
    Tensor t(F, shape);
    for (size_t off = 0; off < t.total_entries(); ++off) t.set_flat(off, random_element(F, rng));
    return t;
}

inline Tensor random_nonzero_tensor(const FieldCtx& F, const std::vector<uint32_t>& shape,
                                    Rng& rng) {
    for (;;) {
        Tensor t = random_tensor(F, shape, rng);
        if (!t.is_zero()) return t;
    }
}

inline Matrix random_matrix(const FieldCtx& F, size_t rows, size_t cols, Rng& rng) {
    Matrix m(F, rows, cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) m.at(r, c) = random_element(F, rng);
    return m;
}

inline Matrix random_invertible_matrix(const FieldCtx& F, size_t n, Rng& rng) {
    for (;;) {
        Matrix m = random_matrix(F, n, n, rng);
        if (m.rank() == n) return m;
    }
}

} // namespace sprank
