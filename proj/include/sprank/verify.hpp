#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sprank/derivspace.hpp"
#include "sprank/descent.hpp"
#include "sprank/randgen.hpp"
#include "sprank/ranksearch.hpp"
#include "sprank/symmetrize.hpp"

namespace sprank {

struct SuiteReport {
    std::string suite;
    uint64_t count = 0;
    uint64_t passes = 0;
    uint64_t failures = 0;
    uint64_t skipped = 0;
    std::vector<std::string> notes;

    bool ok() const { return failures == 0; }
    void pass() {
        ++count;
        ++passes;
    }
    void fail_case(const std::string& note) {
        ++count;
        ++failures;
        if (notes.size() < 8) notes.push_back(note);
    }
};

/// pi(iota(f)) = d! f on seeded random forms. In characteristic <= d the
/// identity carries no information (d! vanishes), so the suite reports the
/// cases as skipped.
inline SuiteReport verify_pi_iota(const FieldCtx& F, int d, int n, uint64_t seed, uint64_t count) {
    SuiteReport rep;
    rep.suite = "pi-iota";
    uint64_t ch = F.characteristic();
    if (ch != 0 && ch <= static_cast<uint64_t>(d)) {
        rep.skipped = count;
        rep.notes.push_back("SKIPPED_CHAR: characteristic <= d");
        return rep;
    }
    Rng rng(seed);
    for (uint64_t i = 0; i < count; ++i) {
        Form f = random_form(F, n, d, rng);
        Form lhs = sym_pi(polarize_iota(f));
        Form rhs = f.scaled(F.from_int(static_cast<int64_t>(factorial_u64(d))));
        if (lhs == rhs)
            rep.pass();
        else
            rep.fail_case("pi(iota(f)) != d! f at sample " + std::to_string(i));
    }
    return rep;
}

/// The two Prop-2.1 style inequalities, which hold in every characteristic:
/// s(pi(t)) <= prk(t) on tensors and prk(iota(f)) <= C(d, floor(d/2)) s(f) on
/// forms. count = 0 enumerates every tensor and form of the given size.
inline SuiteReport verify_prop_sym(const FieldCtx& F, int d, int n, uint64_t seed, uint64_t count,
                                   const Budget& budget = {}) {
    SuiteReport rep;
    rep.suite = "prop-sym";
    std::vector<uint32_t> shape(d, static_cast<uint32_t>(n));
    uint64_t Dc = dconst(d);

    auto check_tensor = [&](const Tensor& t, const std::string& tag) {
        RankCertificate prk = prk_exact(TensorTuple({t}), budget);
        RankCertificate s = strength_exact(FormTuple({sym_pi(t)}), budget);
        bool ok = s.value && prk.value && *s.value <= *prk.value && s.exhaustive && prk.exhaustive;
        if (ok)
            rep.pass();
        else
            rep.fail_case("s(pi(t)) > prk(t) at " + tag);
    };
    auto check_form = [&](const Form& f, const std::string& tag) {
        RankCertificate prk = prk_exact(TensorTuple({polarize_iota(f)}), budget);
        RankCertificate s = strength_exact(FormTuple({f}), budget);
        bool ok = s.value && prk.value && *prk.value <= Dc * *s.value && s.exhaustive && prk.exhaustive;
        if (ok)
            rep.pass();
        else
            rep.fail_case("prk(iota(f)) > D s(f) at " + tag);
    };

    if (count == 0) {
        // exhaustive over the whole space
        size_t entries = 1;
        for (uint32_t m : shape) entries *= m;
        uint64_t tensors = vector_count(F, entries, 1ULL << 24);
        if (tensors >= (1ULL << 24)) fail(Errc::CAP_EXCEEDED, "space too large to enumerate");
        for (uint64_t k = 0; k < tensors; ++k) {
            Tensor t(F, shape);
            auto v = vector_at(F, entries, k);
            for (size_t off = 0; off < entries; ++off) t.set_flat(off, v[off]);
            check_tensor(t, "tensor #" + std::to_string(k));
        }
        auto mons = monomials_exact(n, d);
        uint64_t forms = vector_count(F, mons.size(), 1ULL << 24);
        if (forms >= (1ULL << 24)) fail(Errc::CAP_EXCEEDED, "space too large to enumerate");
        for (uint64_t k = 0; k < forms; ++k) {
            auto v = vector_at(F, mons.size(), k);
            Form f = Form::from_dense(F, n, d, v);
            check_form(f, "form #" + std::to_string(k));
        }
    } else {
        Rng rng(seed);
        for (uint64_t i = 0; i < count; ++i) {
            check_tensor(random_tensor(F, shape, rng), "sample " + std::to_string(i));
            check_form(random_form(F, n, d, rng), "sample " + std::to_string(i));
        }
    }
    return rep;
}

/// Round-trip of the descent: search an L-decomposition of a random base-field
/// tuple, descend it, and check reassembly, the e*r term bound, and that the
/// output survives serialisation over K (no extension elements leak).
inline SuiteReport verify_descent(const FieldCtx& K, uint32_t e, const std::vector<uint32_t>& shape,
                                  int m, uint64_t seed, uint64_t count, const Budget& budget = {}) {
    SuiteReport rep;
    rep.suite = "descent";
    if (!K.is_finite()) fail(Errc::INFINITE_FIELD, "descent suite needs a finite base field");
    FieldCtx L = e == 1 ? K : FieldCtx::extension(K.p(), e * K.ext_degree());
    FieldExt ext = FieldExt::make(K, L);
    Rng rng(seed);
    for (uint64_t i = 0; i < count; ++i) {
        std::vector<Tensor> entries;
        for (int k = 0; k < m; ++k) entries.push_back(random_tensor(K, shape, rng));
        TensorTuple ts(entries);
        std::vector<Tensor> lifted;
        for (const auto& t : ts.entries()) lifted.push_back(lift_tensor(ext, t));
        RankCertificate cert = prk_exact(TensorTuple(lifted), budget);
        if (!cert.value || !cert.exhaustive) {
            rep.fail_case("L-search not exhaustive at sample " + std::to_string(i));
            continue;
        }
        if (!cert.witness) { // infinite rank cannot happen for d >= 2
            rep.fail_case("missing witness at sample " + std::to_string(i));
            continue;
        }
        Decomposition down = descend(ts, ext, *cert.witness);
        bool ok = decomposition_matches(down, ts) &&
                  down.term_count() <= blowup_bound(ext.degree(), *cert.value);
        if (ok)
            rep.pass();
        else
            rep.fail_case("descent bound or reassembly failed at sample " + std::to_string(i));
    }
    return rep;
}

/// Random adapted-basis split of each slot: an invertible matrix cut at a
/// random column into the U' and V' bases.
inline SlotSplit random_slot_split(const FieldCtx& F, const std::vector<uint32_t>& shape, Rng& rng) {
    SlotSplit split;
    for (uint32_t nj : shape) {
        Matrix M = random_invertible_matrix(F, nj, rng);
        size_t k = rng.below(nj + 1);
        Matrix u(F, nj, k), v(F, nj, nj - k);
        for (uint32_t r = 0; r < nj; ++r) {
            for (size_t c = 0; c < k; ++c) u.at(r, c) = M.at(r, c);
            for (size_t c = k; c < nj; ++c) v.at(r, c - k) = M.at(r, c);
        }
        split.u_basis.push_back(std::move(u));
        split.v_basis.push_back(std::move(v));
    }
    return split;
}

/// Both coeff_extract computation paths agree (checked inside the call) and
/// the blocks reassemble the tensor: sum_u u (x) t_u = t.
inline SuiteReport verify_coeff_extract(const FieldCtx& F, const std::vector<uint32_t>& shape,
                                        uint64_t seed, uint64_t count) {
    SuiteReport rep;
    rep.suite = "coeff-extract";
    Rng rng(seed);
    for (uint64_t i = 0; i < count; ++i) {
        Tensor t = random_tensor(F, shape, rng);
        SlotSplit split = random_slot_split(F, shape, rng);
        auto monomial_list = all_split_monomials(t, split);
        // one random monomial gets the two-path check...
        const SplitMonomial& u = monomial_list[rng.below(monomial_list.size())];
        try {
            coeff_extract(t, split, u);
        } catch (const Error& err) {
            rep.fail_case(std::string("coeff_extract: ") + err.what());
            continue;
        }
        // ...and the full reconstruction identity covers every monomial
        Tensor sum(F, shape);
        bool ok = true;
        try {
            for (const auto& mono : monomial_list) {
                CoeffBlock block = coeff_extract(t, split, mono);
                sum = sum.plus(embed_monomial_block(t, split, mono, block));
            }
        } catch (const Error& err) {
            rep.fail_case(std::string("reconstruction: ") + err.what());
            ok = false;
        }
        if (!ok) continue;
        if (sum == t)
            rep.pass();
        else
            rep.fail_case("reconstruction sum != t at sample " + std::to_string(i));
    }
    return rep;
}

} // namespace sprank
