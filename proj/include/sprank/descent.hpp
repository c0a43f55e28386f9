#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "sprank/linalg.hpp"
#include "sprank/ranktypes.hpp"

namespace sprank {

/// Prop-2.2 blow-up: an r-term decomposition over a degree-e extension
/// descends to at most e*r terms over the base field.
inline uint64_t blowup_bound(uint64_t e, uint64_t r) { return e * r; }

/// Minimal integer extension degree strictly exceeding log2(d * deg_h); over
/// any base field of size >= 2 this makes |L| > d * deg_h.
inline uint32_t ext_degree_needed(uint64_t d, uint64_t deg_h) {
    if (d < 1 || deg_h < 1) fail(Errc::UNSUPPORTED, "d and deg_h must be >= 1");
    return static_cast<uint32_t>(std::bit_width(d * deg_h));
}

inline Tensor lift_tensor(const FieldExt& ext, const Tensor& t) {
    Tensor out(ext.top(), t.shape());
    for (size_t off = 0; off < t.total_entries(); ++off) out.set_flat(off, ext.embed(t.flat(off)));
    return out;
}

inline Form lift_form(const FieldExt& ext, const Form& f) {
    Form out(ext.top(), f.nvars(), f.degree());
    for (const auto& [e, c] : f.terms()) out.add_term(e, ext.embed(c));
    return out;
}

namespace descentdetail {

/// True when x lies in the embedded base field; writes the base-field value.
inline bool in_base(const FieldExt& ext, const FieldElement& x, FieldElement& down) {
    auto cs = ext.coords(x);
    for (size_t j = 1; j < cs.size(); ++j)
        if (!ext.base().is_zero(cs[j])) return false;
    down = cs[0];
    return true;
}

inline size_t pivot_index(const FieldCtx& L, const std::vector<FieldElement>& coeffs) {
    for (size_t k = coeffs.size(); k-- > 0;)
        if (!L.is_zero(coeffs[k])) return k;
    fail(Errc::NOT_A_DECOMPOSITION, "collective coefficients are all zero");
}

} // namespace descentdetail

/// Field-extension descent for partition decompositions: converts a valid
/// r-term decomposition of sum_k c_k t_k over L into a decomposition over K
/// with at most [L:K]*r terms, witnessing a K-combination whose pivot
/// coefficient is 1. Solvability of the K-linear system is guaranteed, so an
/// inconsistent system signals an implementation bug.
inline Decomposition descend(const TensorTuple& ts, const FieldExt& ext, const Decomposition& dec) {
    const FieldCtx& K = ext.base();
    const FieldCtx& L = ext.top();
    if (ts.field() != K) fail(Errc::FIELD_MISMATCH, "tuple is not over the base field");
    if (dec.kind != DecompKind::Partition) fail(Errc::NOT_A_DECOMPOSITION, "expected a partition certificate");
    if (dec.coeffs.size() != ts.size()) fail(Errc::NOT_A_DECOMPOSITION, "coefficient count != m");

    std::vector<Tensor> lifted;
    for (const auto& t : ts.entries()) lifted.push_back(lift_tensor(ext, t));
    TensorTuple ts_L(lifted);
    if (!decomposition_matches(dec, ts_L))
        fail(Errc::NOT_A_DECOMPOSITION, "certificate does not reassemble over L");

    size_t m = ts.size();
    size_t pivot = descentdetail::pivot_index(L, dec.coeffs);
    FieldElement scale = L.inv(dec.coeffs[pivot]);

    // base-field short-circuit: nothing to descend when every element already
    // lies in K (after pivot normalisation)
    {
        Decomposition down;
        down.kind = DecompKind::Partition;
        down.coeff_field = K;
        down.coeffs.assign(m, K.zero());
        bool all_base = true;
        for (size_t k = 0; k < m && all_base; ++k)
            all_base = descentdetail::in_base(ext, L.mul(dec.coeffs[k], scale), down.coeffs[k]);
        for (const auto& term : dec.pterms) {
            if (!all_base) break;
            Tensor a(K, term.a.shape()), b(K, term.b.shape());
            for (size_t off = 0; off < term.a.total_entries() && all_base; ++off) {
                FieldElement v;
                all_base = descentdetail::in_base(ext, term.a.flat(off), v);
                if (all_base) a.set_flat(off, v);
            }
            for (size_t off = 0; off < term.b.total_entries() && all_base; ++off) {
                FieldElement v;
                all_base = descentdetail::in_base(ext, L.mul(term.b.flat(off), scale), v);
                if (all_base) b.set_flat(off, v);
            }
            if (all_base) down.pterms.push_back({term.slots, std::move(a), std::move(b)});
        }
        if (all_base) {
            if (!decomposition_matches(down, ts)) fail(Errc::UNSOLVABLE, "internal: base-field descent failed");
            return down;
        }
    }

    uint32_t e = ext.degree();
    int d = ts.order();
    size_t entries = ts[0].total_entries();

    // expand each a_i over the K-basis of L and set up the unknown columns
    struct Column {
        std::vector<int> slots;
        Tensor a;     // a_{ij} over K
        size_t bdim;  // unknowns of this column group
    };
    std::vector<Column> cols;
    for (const auto& term : dec.pterms) {
        auto Ic = complement_subset(term.slots, d);
        size_t bdim = 1;
        for (uint32_t n : subshape(ts.shape(), Ic)) bdim *= n;
        for (uint32_t j = 0; j < e; ++j) {
            Tensor aij(K, term.a.shape());
            bool zero = true;
            for (size_t off = 0; off < term.a.total_entries(); ++off) {
                FieldElement c = ext.coords(term.a.flat(off))[j];
                zero = zero && K.is_zero(c);
                aij.set_flat(off, c);
            }
            if (zero) continue;
            cols.push_back({term.slots, std::move(aij), bdim});
        }
    }

    size_t total_cols = m - 1;
    for (const auto& c : cols) total_cols += c.bdim;
    Matrix A(K, entries, total_cols);
    std::vector<FieldElement> rhs(entries);
    for (size_t off = 0; off < entries; ++off) rhs[off] = ts[pivot].flat(off);
    size_t base = 0;
    for (const auto& col : cols) {
        auto Ic = complement_subset(col.slots, d);
        auto bshape = subshape(ts.shape(), Ic);
        for (size_t off = 0; off < entries; ++off) {
            auto idx = shape_index(ts.shape(), off);
            std::vector<uint32_t> ia, ib;
            for (int v : col.slots) ia.push_back(idx[v - 1]);
            for (int v : Ic) ib.push_back(idx[v - 1]);
            A.at(off, base + shape_offset(bshape, ib)) = col.a.at(ia);
        }
        base += col.bdim;
    }
    {
        size_t ci = 0;
        for (size_t k = 0; k < m; ++k) {
            if (k == pivot) continue;
            for (size_t off = 0; off < entries; ++off)
                A.at(off, base + ci) = K.neg(ts[k].flat(off));
            ++ci;
        }
    }

    auto sol = solve(A, rhs);
    if (!sol) fail(Errc::UNSOLVABLE, "internal: descent system is inconsistent");

    Decomposition out;
    out.kind = DecompKind::Partition;
    out.coeff_field = K;
    out.coeffs.assign(m, K.zero());
    out.coeffs[pivot] = K.one();
    {
        size_t ci = 0;
        for (size_t k = 0; k < m; ++k) {
            if (k == pivot) continue;
            out.coeffs[k] = (*sol)[base + ci];
            ++ci;
        }
    }
    base = 0;
    for (const auto& col : cols) {
        auto Ic = complement_subset(col.slots, d);
        Tensor b(K, subshape(ts.shape(), Ic));
        bool zero = true;
        for (size_t k = 0; k < col.bdim; ++k) {
            b.set_flat(k, (*sol)[base + k]);
            zero = zero && K.is_zero((*sol)[base + k]);
        }
        base += col.bdim;
        if (zero) continue;
        out.pterms.push_back({col.slots, col.a, std::move(b)});
    }
    if (!decomposition_matches(out, ts)) fail(Errc::UNSOLVABLE, "internal: descent output fails reassembly");
    return out;
}

/// Descent for strength decompositions; the same linear-system argument with
/// forms in place of tensors.
inline Decomposition descend(const FormTuple& fs, const FieldExt& ext, const Decomposition& dec) {
    const FieldCtx& K = ext.base();
    const FieldCtx& L = ext.top();
    if (fs.field() != K) fail(Errc::FIELD_MISMATCH, "tuple is not over the base field");
    if (dec.kind != DecompKind::Strength) fail(Errc::NOT_A_DECOMPOSITION, "expected a strength certificate");
    if (dec.coeffs.size() != fs.size()) fail(Errc::NOT_A_DECOMPOSITION, "coefficient count != m");

    std::vector<Form> lifted;
    for (const auto& f : fs.entries()) lifted.push_back(lift_form(ext, f));
    FormTuple fs_L(lifted);
    if (!decomposition_matches(dec, fs_L))
        fail(Errc::NOT_A_DECOMPOSITION, "certificate does not reassemble over L");

    size_t m = fs.size();
    size_t pivot = descentdetail::pivot_index(L, dec.coeffs);
    FieldElement scale = L.inv(dec.coeffs[pivot]);

    {
        Decomposition down;
        down.kind = DecompKind::Strength;
        down.coeff_field = K;
        down.coeffs.assign(m, K.zero());
        bool all_base = true;
        for (size_t k = 0; k < m && all_base; ++k)
            all_base = descentdetail::in_base(ext, L.mul(dec.coeffs[k], scale), down.coeffs[k]);
        for (const auto& term : dec.sterms) {
            if (!all_base) break;
            Form a(K, term.a.nvars(), term.a.degree());
            Form b(K, term.b.nvars(), term.b.degree());
            for (const auto& [ex, c] : term.a.terms()) {
                FieldElement v;
                if (!(all_base = descentdetail::in_base(ext, c, v))) break;
                a.add_term(ex, v);
            }
            for (const auto& [ex, c] : term.b.terms()) {
                if (!all_base) break;
                FieldElement v;
                if (!(all_base = descentdetail::in_base(ext, L.mul(c, scale), v))) break;
                b.add_term(ex, v);
            }
            if (all_base) down.sterms.push_back({std::move(a), std::move(b)});
        }
        if (all_base) {
            if (!decomposition_matches(down, fs)) fail(Errc::UNSOLVABLE, "internal: base-field descent failed");
            return down;
        }
    }

    uint32_t e = ext.degree();
    int n = fs.nvars();
    int d = fs.degree();
    auto dmons = monomials_exact(n, d);

    struct Column {
        Form a; // a_{ij} over K
        int deg_b;
        size_t bdim;
    };
    std::vector<Column> cols;
    for (const auto& term : dec.sterms) {
        int deg_b = d - term.a.degree();
        size_t bdim = monomials_exact(n, deg_b).size();
        for (uint32_t j = 0; j < e; ++j) {
            Form aij(K, n, term.a.degree());
            for (const auto& [ex, c] : term.a.terms()) aij.add_term(ex, ext.coords(c)[j]);
            if (aij.is_zero()) continue;
            cols.push_back({std::move(aij), deg_b, bdim});
        }
    }

    size_t total_cols = m - 1;
    for (const auto& c : cols) total_cols += c.bdim;
    Matrix A(K, dmons.size(), total_cols);
    std::vector<FieldElement> rhs = fs[pivot].dense_coeffs();
    size_t base = 0;
    for (const auto& col : cols) {
        auto bmons = monomials_exact(n, col.deg_b);
        for (size_t bc = 0; bc < bmons.size(); ++bc) {
            for (const auto& [ea, ca] : col.a.terms()) {
                Expo sum(n);
                for (int i = 0; i < n; ++i) sum[i] = ea[i] + bmons[bc][i];
                size_t row =
                    std::lower_bound(dmons.begin(), dmons.end(), sum, GrlexLess{}) - dmons.begin();
                A.at(row, base + bc) = K.add(A.at(row, base + bc), ca);
            }
        }
        base += col.bdim;
    }
    {
        size_t ci = 0;
        for (size_t k = 0; k < m; ++k) {
            if (k == pivot) continue;
            auto dense = fs[k].dense_coeffs();
            for (size_t row = 0; row < dense.size(); ++row) A.at(row, base + ci) = K.neg(dense[row]);
            ++ci;
        }
    }

    auto sol = solve(A, rhs);
    if (!sol) fail(Errc::UNSOLVABLE, "internal: descent system is inconsistent");

    Decomposition out;
    out.kind = DecompKind::Strength;
    out.coeff_field = K;
    out.coeffs.assign(m, K.zero());
    out.coeffs[pivot] = K.one();
    {
        size_t ci = 0;
        for (size_t k = 0; k < m; ++k) {
            if (k == pivot) continue;
            out.coeffs[k] = (*sol)[base + ci];
            ++ci;
        }
    }
    base = 0;
    for (const auto& col : cols) {
        Form b = Form::from_dense(K, n, col.deg_b, {sol->begin() + base, sol->begin() + base + col.bdim});
        base += col.bdim;
        if (b.is_zero()) continue;
        out.sterms.push_back({col.a, std::move(b)});
    }
    if (!decomposition_matches(out, fs)) fail(Errc::UNSOLVABLE, "internal: descent output fails reassembly");
    return out;
}

} // namespace sprank
