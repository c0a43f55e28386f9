#pragma once

#include <algorithm>
#include <cstdint>

#include "sprank/poly.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

/// Symmetrisation pi: sends a cubical order-d tensor to the degree-d form
/// whose coefficient at exponent alpha is the sum of all entries whose
/// multi-index content sorts to alpha.
inline Form sym_pi(const Tensor& t) {
    const auto& shape = t.shape();
    for (uint32_t n : shape)
        if (n != shape[0]) fail(Errc::NOT_CUBICAL, "pi needs a cubical tensor");
    int n = static_cast<int>(shape[0]);
    int d = t.order();
    Form f(t.field(), n, d);
    size_t total = t.total_entries();
    for (size_t off = 0; off < total; ++off) {
        if (t.field().is_zero(t.flat(off))) continue;
        auto idx = t.index_at(off);
        Expo e(n, 0);
        for (uint32_t i : idx) e[i] += 1;
        f.add_term(e, t.flat(off));
    }
    return f;
}

/// Polarisation iota: the entry of iota(f) at multi-index (i1,...,id) is
/// alpha! * coeff(alpha), alpha the content of the multi-index. Summing the
/// resulting tensor over each content orbit recovers the S_d-orbit sum.
inline Tensor polarize_iota(const Form& f) {
    int n = f.nvars();
    int d = f.degree();
    std::vector<uint32_t> shape(d, static_cast<uint32_t>(n));
    Tensor t(f.field(), shape);
    size_t total = t.total_entries();
    for (size_t off = 0; off < total; ++off) {
        auto idx = t.index_at(off);
        Expo e(n, 0);
        for (uint32_t i : idx) e[i] += 1;
        FieldElement c = f.coeff(e);
        if (f.field().is_zero(c)) continue;
        uint64_t fact = 1;
        for (uint32_t a : e)
            for (uint32_t k = 2; k <= a; ++k) fact *= k;
        t.set_flat(off, f.field().mul(c, f.field().from_int(static_cast<int64_t>(fact))));
    }
    return t;
}

/// D = C(d, floor(d/2)), the polarisation blow-up constant.
inline uint64_t dconst(int d) {
    if (d < 1) fail(Errc::UNSUPPORTED, "d must be >= 1");
    int k = d / 2;
    uint64_t num = 1;
    for (int i = 0; i < k; ++i) num = num * static_cast<uint64_t>(d - i) / static_cast<uint64_t>(i + 1);
    return num;
}

/// d! as a plain integer.
inline uint64_t factorial_u64(int d) {
    uint64_t f = 1;
    for (int k = 2; k <= d; ++k) f *= static_cast<uint64_t>(k);
    return f;
}

} // namespace sprank
