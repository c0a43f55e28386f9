#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sprank/linalg.hpp"
#include "sprank/poly.hpp"
#include "sprank/ranksearch.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

/// The graded space D(f) spanned by all iterated partials of f of orders
/// 1..d-1, with a deterministic RREF basis per degree.
struct DerivativeSpace {
    Form source;
    std::vector<Form> basis;               // concatenated, degree d-1 downwards
    std::map<int, std::vector<Form>> by_degree;
};

inline DerivativeSpace dspace(const Form& f) {
    if (f.degree() < 2) fail(Errc::UNSUPPORTED, "dspace needs degree >= 2");
    const FieldCtx& F = f.field();
    int n = f.nvars();
    int d = f.degree();
    DerivativeSpace out;
    out.source = f;
    // partials commute, so multisets of directions suffice; extend each level
    // by directions >= the last one used
    struct Node {
        Form value;
        int last_dir;
    };
    std::vector<Node> level;
    level.push_back({f, 1});
    for (int order = 1; order <= d - 1; ++order) {
        std::vector<Node> next;
        for (const auto& node : level) {
            for (int j = node.last_dir; j <= n; ++j) {
                Form p = form_partial(node.value, j);
                next.push_back({std::move(p), j});
            }
        }
        level = std::move(next);
        int deg = d - order;
        auto mons = monomials_exact(n, deg);
        Matrix rows(F, level.size(), mons.size());
        for (size_t i = 0; i < level.size(); ++i) {
            auto dense = level[i].value.dense_coeffs();
            for (size_t c = 0; c < dense.size(); ++c) rows.at(i, c) = dense[c];
        }
        std::vector<Form> basis;
        for (const auto& rowvec : row_space_basis(rows))
            basis.push_back(Form::from_dense(F, n, deg, rowvec));
        if (!basis.empty()) out.by_degree[deg] = basis;
        for (auto& b : basis) out.basis.push_back(std::move(b));
    }
    return out;
}

/// A membership verdict: when member, `combination` lists, per product of
/// generators (multiset of generator indices), its coefficient.
struct MembershipVerdict {
    bool member = false;
    std::vector<std::pair<std::vector<size_t>, FieldElement>> combination;
};

/// Decides whether f lies in the degree-d graded piece of the subalgebra
/// generated by the given homogeneous forms, by solving the linear membership
/// problem over all products with degree sum d.
inline MembershipVerdict subalgebra_member(const Form& f, const std::vector<Form>& gens) {
    const FieldCtx& F = f.field();
    int n = f.nvars();
    int d = f.degree();
    for (const auto& g : gens) {
        f.require_compatible(g);
        if (g.degree() < 1) fail(Errc::UNSUPPORTED, "generators must have positive degree");
    }
    // multisets of generator indices with total degree d, nondecreasing index
    std::vector<std::vector<size_t>> products;
    std::vector<size_t> cur;
    auto rec = [&](auto&& self, size_t next, int remaining) -> void {
        if (remaining == 0) {
            products.push_back(cur);
            return;
        }
        for (size_t g = next; g < gens.size(); ++g) {
            if (gens[g].degree() > remaining) continue;
            cur.push_back(g);
            self(self, g, remaining - gens[g].degree());
            cur.pop_back();
        }
    };
    rec(rec, 0, d);

    auto dmons = monomials_exact(n, d);
    Matrix A(F, dmons.size(), products.size());
    for (size_t c = 0; c < products.size(); ++c) {
        Form prod(F, n, 0);
        prod.add_term(Expo(n, 0), F.one());
        for (size_t g : products[c]) prod = form_mul(prod, gens[g]);
        auto dense = prod.dense_coeffs();
        for (size_t r = 0; r < dense.size(); ++r) A.at(r, c) = dense[r];
    }
    auto sol = solve(A, f.dense_coeffs());
    MembershipVerdict v;
    if (!sol) return v;
    v.member = true;
    for (size_t c = 0; c < products.size(); ++c)
        if (!F.is_zero((*sol)[c])) v.combination.emplace_back(products[c], (*sol)[c]);
    return v;
}

/// Observational report from expressing f in its own derivative space.
struct DfReport {
    size_t dspace_dim = 0;
    bool member = false;
    size_t pruned_generator_count = 0;
    std::optional<RankCertificate> strength; // finite fields only
    bool outside_char_hypotheses = false;    // char(K) <= d
};

/// Runs subalgebra membership of f against dspace(f), greedily prunes the
/// generator set to a locally minimal one, and attaches strength when an exact
/// search is available. No pass/fail is attached: the quantitative theorem
/// constants are unspecified.
inline DfReport df_experiment(const Form& f, const Budget& budget = {}) {
    DfReport rep;
    const FieldCtx& F = f.field();
    uint64_t ch = F.characteristic();
    rep.outside_char_hypotheses = ch != 0 && ch <= static_cast<uint64_t>(f.degree());
    if (f.is_zero()) {
        rep.member = true;
        return rep;
    }
    DerivativeSpace ds = dspace(f);
    rep.dspace_dim = ds.basis.size();
    MembershipVerdict v = subalgebra_member(f, ds.basis);
    rep.member = v.member;
    if (v.member) {
        std::vector<Form> gens = ds.basis;
        for (size_t i = 0; i < gens.size();) {
            std::vector<Form> trial;
            for (size_t j = 0; j < gens.size(); ++j)
                if (j != i) trial.push_back(gens[j]);
            if (subalgebra_member(f, trial).member)
                gens = std::move(trial); // drop generator i, retest from the same spot
            else
                ++i;
        }
        rep.pruned_generator_count = gens.size();
    }
    if (F.is_finite() && f.degree() >= 2) rep.strength = strength_exact(FormTuple({f}), budget);
    return rep;
}

// -- adapted-basis coefficient extraction -----------------------------------------

/// Per-slot bases of a subspace U'_j and a complement V'_j; their union is a
/// basis of the slot space.
struct SlotSplit {
    std::vector<Matrix> u_basis; // n_j x k_j columns
    std::vector<Matrix> v_basis; // n_j x (n_j - k_j) columns
};

/// A monomial in the U' bases: one chosen U'-basis column per slot in I.
struct SplitMonomial {
    std::vector<int> slots;      // I, sorted, 1-based, possibly empty
    std::vector<uint32_t> picks; // U'-basis index per slot of I
};

/// V'-coordinate block of the coefficient t_u; shape may be empty (a scalar)
/// when the monomial covers every slot.
struct CoeffBlock {
    std::vector<uint32_t> vshape;
    std::vector<FieldElement> data;
};

namespace splitdetail {

inline void validate_split(const Tensor& t, const SlotSplit& split) {
    int d = t.order();
    if (static_cast<int>(split.u_basis.size()) != d || static_cast<int>(split.v_basis.size()) != d)
        fail(Errc::SHAPE_MISMATCH, "split needs one basis pair per slot");
    for (int j = 0; j < d; ++j) {
        uint32_t nj = t.shape()[j];
        if (split.u_basis[j].rows() != nj || split.v_basis[j].rows() != nj ||
            split.u_basis[j].cols() + split.v_basis[j].cols() != nj)
            fail(Errc::SHAPE_MISMATCH, "split bases do not fit the slot dimension");
    }
}

/// [U | V] and its inverse per slot; the first k_j rows of the inverse are the
/// dual functionals of the U' basis in the adapted sense.
inline void adapted_matrices(const Tensor& t, const SlotSplit& split, std::vector<Matrix>& M,
                             std::vector<Matrix>& Minv) {
    const FieldCtx& F = t.field();
    int d = t.order();
    for (int j = 0; j < d; ++j) {
        uint32_t nj = t.shape()[j];
        size_t k = split.u_basis[j].cols();
        Matrix m(F, nj, nj);
        for (uint32_t r = 0; r < nj; ++r) {
            for (size_t c = 0; c < k; ++c) m.at(r, c) = split.u_basis[j].at(r, c);
            for (size_t c = k; c < nj; ++c) m.at(r, c) = split.v_basis[j].at(r, c - k);
        }
        auto inv = invert(m);
        if (!inv) fail(Errc::SHAPE_MISMATCH, "split bases are not a basis of the slot space");
        M.push_back(std::move(m));
        Minv.push_back(std::move(*inv));
    }
}

} // namespace splitdetail

/// Extracts the coefficient tensor t_u of the unique adapted-basis expansion
/// t = sum_u u (x) t_u. Computed twice: by direct coordinate extraction and by
/// the inclusion-exclusion contraction formula; a disagreement is an
/// implementation bug and raises IE_MISMATCH.
inline CoeffBlock coeff_extract(const Tensor& t, const SlotSplit& split, const SplitMonomial& u) {
    const FieldCtx& F = t.field();
    int d = t.order();
    splitdetail::validate_split(t, split);
    if (!u.slots.empty()) check_subset(u.slots, d, false);
    if (u.picks.size() != u.slots.size()) fail(Errc::SHAPE_MISMATCH, "one pick per monomial slot");
    std::vector<bool> in_I(d + 1, false);
    for (size_t i = 0; i < u.slots.size(); ++i) {
        in_I[u.slots[i]] = true;
        if (u.picks[i] >= split.u_basis[u.slots[i] - 1].cols())
            fail(Errc::BAD_INDEX, "monomial pick out of range");
    }

    std::vector<Matrix> M, Minv;
    splitdetail::adapted_matrices(t, split, M, Minv);

    // path (a): full change of basis, then slice
    Tensor C = apply_maps(t, Minv);
    std::vector<int> Ic;
    for (int j = 1; j <= d; ++j)
        if (!in_I[j]) Ic.push_back(j);
    CoeffBlock block;
    for (int j : Ic) block.vshape.push_back(static_cast<uint32_t>(split.v_basis[j - 1].cols()));
    size_t vtotal = 1;
    for (uint32_t nv : block.vshape) vtotal *= nv;
    block.data.assign(vtotal, F.zero());
    for (size_t off = 0; off < vtotal; ++off) {
        auto gamma = shape_index(block.vshape, off);
        std::vector<uint32_t> idx(d);
        for (size_t i = 0; i < u.slots.size(); ++i) idx[u.slots[i] - 1] = u.picks[i];
        for (size_t i = 0; i < Ic.size(); ++i)
            idx[Ic[i] - 1] = static_cast<uint32_t>(split.u_basis[Ic[i] - 1].cols()) + gamma[i];
        block.data[off] = C.at(idx);
    }

    // path (b): inclusion-exclusion over all monomial multiples u' = u (x) u''
    auto cshape = subshape(t.shape(), Ic);
    size_t ctotal = 1;
    for (uint32_t nv : cshape) ctotal *= nv;
    std::vector<FieldElement> ambient_b(ctotal, F.zero());
    size_t esize = Ic.size();
    for (uint64_t emask = 0; emask < (1ULL << esize); ++emask) {
        std::vector<int> E; // extension slots, a subset of I^c
        for (size_t i = 0; i < esize; ++i)
            if (emask & (1ULL << i)) E.push_back(Ic[i]);
        std::vector<int> Iprime; // I  union  E, sorted
        {
            size_t a = 0, b = 0;
            while (a < u.slots.size() || b < E.size()) {
                if (b == E.size() || (a < u.slots.size() && u.slots[a] < E[b]))
                    Iprime.push_back(u.slots[a++]);
                else
                    Iprime.push_back(E[b++]);
            }
        }
        bool neg = (E.size() % 2) == 1;
        // enumerate picks q over the extension slots
        std::vector<uint32_t> q(E.size(), 0);
        for (;;) {
            bool overflow = false;
            // contraction of t over I' with the dual rows of the chosen picks
            std::vector<int> Ipc; // I'^c
            {
                std::vector<bool> inIp(d + 1, false);
                for (int v : Iprime) inIp[v] = true;
                for (int j = 1; j <= d; ++j)
                    if (!inIp[j]) Ipc.push_back(j);
            }
            auto rshape = subshape(t.shape(), Ipc);
            size_t rtotal = 1;
            for (uint32_t nv : rshape) rtotal *= nv;
            std::vector<FieldElement> contracted(rtotal, F.zero());
            for (size_t off = 0; off < t.total_entries(); ++off) {
                auto idx = shape_index(t.shape(), off);
                FieldElement w = t.flat(off);
                if (F.is_zero(w)) continue;
                for (size_t i = 0; i < u.slots.size(); ++i)
                    w = F.mul(w, Minv[u.slots[i] - 1].at(u.picks[i], idx[u.slots[i] - 1]));
                for (size_t i = 0; i < E.size(); ++i)
                    w = F.mul(w, Minv[E[i] - 1].at(q[i], idx[E[i] - 1]));
                if (F.is_zero(w)) continue;
                std::vector<uint32_t> ridx;
                for (int v : Ipc) ridx.push_back(idx[v - 1]);
                size_t ro = shape_offset(rshape, ridx);
                contracted[ro] = F.add(contracted[ro], w);
            }
            // tensor the contraction with the embedded u'' and accumulate
            for (size_t off = 0; off < ctotal; ++off) {
                auto idx = shape_index(cshape, off); // indices over I^c slots
                FieldElement w = F.one();
                bool dead = false;
                std::vector<uint32_t> ridx;
                for (size_t i = 0; i < Ic.size(); ++i) {
                    int slot = Ic[i];
                    auto it = std::lower_bound(E.begin(), E.end(), slot);
                    if (it != E.end() && *it == slot) {
                        size_t epos = static_cast<size_t>(it - E.begin());
                        w = F.mul(w, split.u_basis[slot - 1].at(idx[i], q[epos]));
                        if (F.is_zero(w)) {
                            dead = true;
                            break;
                        }
                    } else {
                        ridx.push_back(idx[i]);
                    }
                }
                if (dead) continue;
                FieldElement contrib = F.mul(w, contracted[shape_offset(rshape, ridx)]);
                if (neg) contrib = F.neg(contrib);
                ambient_b[off] = F.add(ambient_b[off], contrib);
            }
            // next pick vector
            size_t pos = 0;
            while (pos < E.size()) {
                if (++q[pos] < split.u_basis[E[pos] - 1].cols()) break;
                q[pos] = 0;
                ++pos;
            }
            if (pos == E.size()) {
                overflow = true;
            }
            if (overflow || E.empty()) break;
        }
    }

    // compare: embed path (a) into ambient coordinates on the I^c slots
    {
        std::vector<FieldElement> ambient_a(ctotal, F.zero());
        for (size_t off = 0; off < ctotal; ++off) {
            auto idx = shape_index(cshape, off);
            FieldElement acc = F.zero();
            for (size_t v = 0; v < vtotal; ++v) {
                auto gamma = shape_index(block.vshape, v);
                FieldElement w = block.data[v];
                if (F.is_zero(w)) continue;
                for (size_t i = 0; i < Ic.size(); ++i)
                    w = F.mul(w, split.v_basis[Ic[i] - 1].at(idx[i], gamma[i]));
                acc = F.add(acc, w);
            }
            ambient_a[off] = acc;
        }
        if (ambient_a != ambient_b)
            fail(Errc::IE_MISMATCH, "direct extraction and inclusion-exclusion disagree");
    }
    return block;
}

inline std::vector<CoeffBlock> coeff_extract(const TensorTuple& ts, const SlotSplit& split,
                                             const SplitMonomial& u) {
    std::vector<CoeffBlock> out;
    for (const auto& t : ts.entries()) out.push_back(coeff_extract(t, split, u));
    return out;
}

/// Every monomial of the split (all subsets I, all picks), the empty monomial
/// first; used by the reconstruction identity.
inline std::vector<SplitMonomial> all_split_monomials(const Tensor& t, const SlotSplit& split) {
    int d = t.order();
    std::vector<SplitMonomial> out;
    for (uint64_t mask = 0; mask < (1ULL << d); ++mask) {
        SplitMonomial u;
        for (int j = 1; j <= d; ++j)
            if (mask & (1ULL << (j - 1))) u.slots.push_back(j);
        bool possible = true;
        for (int j : u.slots) possible = possible && split.u_basis[j - 1].cols() > 0;
        if (!possible) continue;
        std::vector<uint32_t> picks(u.slots.size(), 0);
        for (;;) {
            u.picks = picks;
            out.push_back(u);
            size_t pos = 0;
            while (pos < picks.size()) {
                if (++picks[pos] < split.u_basis[u.slots[pos] - 1].cols()) break;
                picks[pos] = 0;
                ++pos;
            }
            if (pos == picks.size()) break;
            if (picks.empty()) break;
        }
    }
    return out;
}

/// The ambient tensor u (x) block, placed back on the original coordinates.
inline Tensor embed_monomial_block(const Tensor& like, const SlotSplit& split,
                                   const SplitMonomial& u, const CoeffBlock& block) {
    const FieldCtx& F = like.field();
    int d = like.order();
    std::vector<bool> in_I(d + 1, false);
    for (int v : u.slots) in_I[v] = true;
    std::vector<int> Ic;
    for (int j = 1; j <= d; ++j)
        if (!in_I[j]) Ic.push_back(j);
    Tensor out(F, like.shape());
    for (size_t off = 0; off < out.total_entries(); ++off) {
        auto idx = shape_index(like.shape(), off);
        FieldElement acc = F.zero();
        size_t vtotal = block.data.size();
        for (size_t v = 0; v < vtotal; ++v) {
            auto gamma = shape_index(block.vshape, v);
            FieldElement w = block.data[v];
            if (F.is_zero(w)) continue;
            for (size_t i = 0; i < u.slots.size(); ++i)
                w = F.mul(w, split.u_basis[u.slots[i] - 1].at(idx[u.slots[i] - 1], u.picks[i]));
            for (size_t i = 0; i < Ic.size(); ++i)
                w = F.mul(w, split.v_basis[Ic[i] - 1].at(idx[Ic[i] - 1], gamma[i]));
            acc = F.add(acc, w);
        }
        out.set_flat(off, acc);
    }
    return out;
}

} // namespace sprank
