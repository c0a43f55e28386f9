#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "sprank/enumerate.hpp"
#include "sprank/linalg.hpp"
#include "sprank/poly.hpp"
#include "sprank/ranktypes.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

/// Search limits. Exceeding a limit never aborts a rank query: the search
/// returns its best upper bound with exhaustive = false and budget_hit = true.
struct Budget {
    uint64_t max_systems = 4'000'000; // linear systems solved per call
    uint64_t max_universe = 100'000;  // enumerated a-factor candidates per level
    uint64_t max_entries = 1'000'000; // dense coordinate count guard
};

namespace searchdetail {

struct Candidate {
    std::vector<int> slots; // partition case: the subset I (empty for strength)
    int deg_a = 0;          // strength case: the degree split
    Tensor ta;              // partition factor
    Form fa;                // strength factor
    Matrix block;           // ambient_dim x b_dim, the linear action b -> a (x) b
    size_t bdim = 0;
};

struct SearchCut {};

/// Iterate strictly increasing r-subsets of [0, n) in lexicographic order.
/// Stops early (returning true) as soon as fn returns true.
template <typename Fn>
bool for_each_combination(size_t n, size_t r, Fn&& fn) {
    if (r > n) return false;
    std::vector<size_t> c(r);
    for (size_t i = 0; i < r; ++i) c[i] = i;
    if (r == 0) return fn(c);
    for (;;) {
        if (fn(c)) return true;
        size_t i = r;
        bool done = true;
        while (i > 0) {
            --i;
            if (c[i] != i + n - r) {
                done = false;
                break;
            }
        }
        if (done) return false;
        ++c[i];
        for (size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
}

/// Try to write `rhs` as a combination of the selected candidate blocks.
/// Returns the per-candidate b-coordinate vectors on success.
inline std::optional<std::vector<std::vector<FieldElement>>> solve_terms(
    const FieldCtx& F, const std::vector<const Candidate*>& picks,
    const std::vector<FieldElement>& rhs) {
    size_t rows = rhs.size();
    size_t cols = 0;
    for (const auto* c : picks) cols += c->bdim;
    Matrix A(F, rows, cols);
    size_t base = 0;
    for (const auto* c : picks) {
        for (size_t r = 0; r < rows; ++r)
            for (size_t k = 0; k < c->bdim; ++k) A.at(r, base + k) = c->block.at(r, k);
        base += c->bdim;
    }
    auto sol = solve(A, rhs);
    if (!sol) return std::nullopt;
    std::vector<std::vector<FieldElement>> out;
    base = 0;
    for (const auto* c : picks) {
        out.emplace_back(sol->begin() + base, sol->begin() + base + c->bdim);
        base += c->bdim;
    }
    return out;
}

} // namespace searchdetail

/// Remark-1.12 style ceiling: the minimum over slots of the concise dimension
/// of that slot across the tuple.
inline uint64_t easy_cap(const TensorTuple& ts) {
    uint64_t cap = UINT64_MAX;
    for (int j = 1; j <= ts.order(); ++j)
        cap = std::min<uint64_t>(cap, slot_span_basis(ts, j).size());
    return cap;
}

namespace searchdetail {

/// Slice decomposition of a single nonzero tensor along its thinnest concise
/// slot; always has easy_cap terms. Requires order >= 2.
inline std::vector<PartitionTerm> slice_decomposition(const Tensor& t) {
    const FieldCtx& F = t.field();
    TensorTuple single({t});
    int d = t.order();
    int best_slot = 1;
    size_t best_dim = SIZE_MAX;
    std::vector<std::vector<FieldElement>> best_basis;
    for (int j = 1; j <= d; ++j) {
        auto basis = slot_span_basis(single, j);
        if (basis.size() < best_dim) {
            best_dim = basis.size();
            best_slot = j;
            best_basis = std::move(basis);
        }
    }
    std::vector<int> I{best_slot};
    auto Ic = complement_subset(I, d);
    Matrix flat = flatten(t, I); // n_j x rest
    std::vector<PartitionTerm> terms;
    for (size_t b = 0; b < best_basis.size(); ++b) {
        size_t pivot = 0;
        while (pivot < best_basis[b].size() && F.is_zero(best_basis[b][pivot])) ++pivot;
        Tensor a(F, subshape(t.shape(), I));
        for (uint32_t i = 0; i < t.shape()[best_slot - 1]; ++i)
            a.set_flat(i, best_basis[b][i]);
        Tensor bt(F, subshape(t.shape(), Ic));
        for (size_t col = 0; col < flat.cols(); ++col) bt.set_flat(col, flat.at(pivot, col));
        terms.push_back({I, std::move(a), std::move(bt)});
    }
    return terms;
}

inline void sort_terms(Decomposition& dec) {
    auto key_tensor = [](const Tensor& t) {
        std::vector<FieldElement> v;
        for (size_t i = 0; i < t.total_entries(); ++i) v.push_back(t.flat(i));
        return v;
    };
    if (dec.kind == DecompKind::Partition) {
        std::stable_sort(dec.pterms.begin(), dec.pterms.end(),
                         [&](const PartitionTerm& x, const PartitionTerm& y) {
                             if (x.slots != y.slots) return x.slots < y.slots;
                             auto ax = key_tensor(x.a), ay = key_tensor(y.a);
                             if (ax != ay) return ax < ay;
                             return key_tensor(x.b) < key_tensor(y.b);
                         });
    } else {
        auto key_form = [](const Form& f) {
            std::vector<std::pair<Expo, FieldElement>> v(f.terms().begin(), f.terms().end());
            return v;
        };
        std::stable_sort(dec.sterms.begin(), dec.sterms.end(),
                         [&](const StrengthTerm& x, const StrengthTerm& y) {
                             if (x.a.degree() != y.a.degree()) return x.a.degree() < y.a.degree();
                             auto ax = key_form(x.a), ay = key_form(y.a);
                             if (ax != ay) return ax < ay;
                             return key_form(x.b) < key_form(y.b);
                         });
    }
}

} // namespace searchdetail

/// Exact collective partition rank over a finite field, by exhaustive
/// certificate-producing search. The returned witness always reassembles to
/// the coefficient combination of the input.
inline RankCertificate prk_exact(const TensorTuple& ts, const Budget& budget = {}) {
    using namespace searchdetail;
    const FieldCtx& F = ts.field();
    if (!F.is_finite()) fail(Errc::INFINITE_FIELD, "exact partition-rank search needs a finite field");
    if (ts[0].total_entries() > budget.max_entries) fail(Errc::CAP_EXCEEDED, "tensor too large");
    int d = ts.order();
    size_t m = ts.size();
    size_t entries = ts[0].total_entries();

    auto finish = [&](RankCertificate cert) {
        if (cert.witness) {
            searchdetail::sort_terms(*cert.witness);
            if (!decomposition_matches(*cert.witness, ts))
                fail(Errc::UNSOLVABLE, "internal: certificate fails reassembly");
        }
        return cert;
    };

    // value 0: some nonzero combination vanishes
    {
        Matrix rows(F, m, entries);
        for (size_t k = 0; k < m; ++k)
            for (size_t off = 0; off < entries; ++off) rows.at(k, off) = ts[k].flat(off);
        auto ker = kernel_basis(rows.transposed());
        if (!ker.empty()) {
            Decomposition dec;
            dec.kind = DecompKind::Partition;
            dec.coeff_field = F;
            dec.coeffs = ker.front();
            RankCertificate cert;
            cert.value = 0;
            cert.witness = std::move(dec);
            cert.exhaustive = true;
            return finish(std::move(cert));
        }
    }

    if (d == 1) {
        // no proper nonempty bipartition exists: nonzero order-1 tuples are infinite
        RankCertificate cert;
        cert.value = std::nullopt;
        cert.exhaustive = true;
        return cert;
    }

    // projective coefficient candidates (single (1) when m = 1)
    auto cs = projective_points(F, m);
    std::vector<Tensor> combos;
    combos.reserve(cs.size());
    uint64_t cap = UINT64_MAX;
    size_t cstar = 0;
    for (size_t i = 0; i < cs.size(); ++i) {
        combos.push_back(ts.combine(cs[i]));
        uint64_t c = easy_cap(TensorTuple({combos.back()}));
        if (c < cap) {
            cap = c;
            cstar = i;
        }
    }

    auto cap_certificate = [&](bool exhaustive, bool hit) {
        Decomposition dec;
        dec.kind = DecompKind::Partition;
        dec.coeff_field = F;
        dec.coeffs = cs[cstar];
        dec.pterms = slice_decomposition(combos[cstar]);
        RankCertificate cert;
        cert.value = cap;
        cert.witness = std::move(dec);
        cert.exhaustive = exhaustive;
        cert.budget_hit = hit;
        return finish(std::move(cert));
    };

    if (cap <= 1) return cap_certificate(true, false);

    // candidate universe: (I, a) with 1 <= |I| <= floor(d/2); for even d and
    // |I| = d/2 only subsets containing slot 1 (complementation symmetry)
    std::vector<Candidate> universe;
    for (int size = 1; size <= d / 2; ++size) {
        for (auto& I : subsets_of_size(d, size)) {
            if (2 * size == d && I.front() != 1) continue;
            auto ashape = subshape(ts.shape(), I);
            auto Ic = complement_subset(I, d);
            auto bshape = subshape(ts.shape(), Ic);
            size_t adim = 1, bdim = 1;
            for (uint32_t n : ashape) adim *= n;
            for (uint32_t n : bshape) bdim *= n;
            if (vector_count(F, adim) > budget.max_universe) return cap_certificate(false, true);
            for (auto& av : projective_points(F, adim)) {
                Candidate c;
                c.slots = I;
                c.ta = Tensor(F, ashape);
                for (size_t i = 0; i < adim; ++i) c.ta.set_flat(i, av[i]);
                c.bdim = bdim;
                c.block = Matrix(F, entries, bdim);
                for (size_t off = 0; off < entries; ++off) {
                    auto idx = shape_index(ts.shape(), off);
                    std::vector<uint32_t> ia, ib;
                    for (int v : I) ia.push_back(idx[v - 1]);
                    for (int v : Ic) ib.push_back(idx[v - 1]);
                    c.block.at(off, shape_offset(bshape, ib)) = c.ta.at(ia);
                }
                universe.push_back(std::move(c));
                if (universe.size() > budget.max_universe) return cap_certificate(false, true);
            }
        }
    }

    uint64_t systems = 0;
    for (uint64_t r = 1; r < cap; ++r) {
        for (size_t ci = 0; ci < cs.size(); ++ci) {
            std::vector<FieldElement> rhs(entries);
            for (size_t off = 0; off < entries; ++off) rhs[off] = combos[ci].flat(off);
            std::optional<RankCertificate> found;
            bool cut = false;
            for_each_combination(universe.size(), r, [&](const std::vector<size_t>& pick) {
                if (++systems > budget.max_systems) {
                    cut = true;
                    return true;
                }
                std::vector<const Candidate*> picks;
                for (size_t i : pick) picks.push_back(&universe[i]);
                auto sol = solve_terms(F, picks, rhs);
                if (!sol) return false;
                Decomposition dec;
                dec.kind = DecompKind::Partition;
                dec.coeff_field = F;
                dec.coeffs = cs[ci];
                for (size_t i = 0; i < picks.size(); ++i) {
                    Tensor bt(F, subshape(ts.shape(), complement_subset(picks[i]->slots, d)));
                    bool zero = true;
                    for (size_t k = 0; k < picks[i]->bdim; ++k) {
                        bt.set_flat(k, (*sol)[i][k]);
                        zero = zero && F.is_zero((*sol)[i][k]);
                    }
                    if (zero) continue;
                    dec.pterms.push_back({picks[i]->slots, picks[i]->ta, std::move(bt)});
                }
                RankCertificate cert;
                cert.value = dec.pterms.size();
                cert.witness = std::move(dec);
                cert.exhaustive = true;
                found = std::move(cert);
                return true;
            });
            if (found) return finish(std::move(*found));
            if (cut) return cap_certificate(false, true);
        }
    }
    return cap_certificate(true, false);
}

/// Exact collective strength over a finite field.
inline RankCertificate strength_exact(const FormTuple& fs, const Budget& budget = {}) {
    using namespace searchdetail;
    const FieldCtx& F = fs.field();
    if (!F.is_finite()) fail(Errc::INFINITE_FIELD, "exact strength search needs a finite field");
    int n = fs.nvars();
    int d = fs.degree();
    size_t m = fs.size();
    auto dmons = monomials_exact(n, d);
    if (dmons.size() > budget.max_entries) fail(Errc::CAP_EXCEEDED, "form too large");

    auto finish = [&](RankCertificate cert) {
        if (cert.witness) {
            searchdetail::sort_terms(*cert.witness);
            if (!decomposition_matches(*cert.witness, fs))
                fail(Errc::UNSOLVABLE, "internal: certificate fails reassembly");
        }
        return cert;
    };

    // value 0: the entries are linearly dependent
    {
        Matrix rows(F, m, dmons.size());
        for (size_t k = 0; k < m; ++k) {
            auto dense = fs[k].dense_coeffs();
            for (size_t i = 0; i < dense.size(); ++i) rows.at(k, i) = dense[i];
        }
        auto ker = kernel_basis(rows.transposed());
        if (!ker.empty()) {
            Decomposition dec;
            dec.kind = DecompKind::Strength;
            dec.coeff_field = F;
            dec.coeffs = ker.front();
            RankCertificate cert;
            cert.value = 0;
            cert.witness = std::move(dec);
            cert.exhaustive = true;
            return finish(std::move(cert));
        }
    }

    if (d == 1) {
        RankCertificate cert; // nonzero linear combinations only: infinite strength
        cert.value = std::nullopt;
        cert.exhaustive = true;
        return cert;
    }
    if (d == 0) fail(Errc::UNSUPPORTED, "strength needs degree >= 1");

    auto cs = projective_points(F, m);
    std::vector<Form> combos;
    combos.reserve(cs.size());

    // ceiling: group the monomials of the combination by leading variable,
    // f = sum_j x_j g_j, which needs at most (#leading variables) terms
    auto leading_count = [&](const Form& f) {
        std::vector<bool> seen(n, false);
        for (const auto& [e, c] : f.terms()) {
            for (int i = 0; i < n; ++i)
                if (e[i] > 0) {
                    seen[i] = true;
                    break;
                }
        }
        uint64_t cnt = 0;
        for (bool b : seen) cnt += b;
        return cnt;
    };
    uint64_t cap = UINT64_MAX;
    size_t cstar = 0;
    for (size_t i = 0; i < cs.size(); ++i) {
        combos.push_back(fs.combine(cs[i]));
        uint64_t c = leading_count(combos.back());
        if (c < cap) {
            cap = c;
            cstar = i;
        }
    }

    auto cap_certificate = [&](bool exhaustive, bool hit) {
        Decomposition dec;
        dec.kind = DecompKind::Strength;
        dec.coeff_field = F;
        dec.coeffs = cs[cstar];
        const Form& f = combos[cstar];
        for (int j = 1; j <= n; ++j) {
            Form g(F, n, d - 1);
            for (const auto& [e, c] : f.terms()) {
                int lead = 0;
                for (int i = 0; i < n; ++i)
                    if (e[i] > 0) {
                        lead = i + 1;
                        break;
                    }
                if (lead != j) continue;
                Expo q = e;
                q[j - 1] -= 1;
                g.add_term(q, c);
            }
            if (g.is_zero()) continue;
            dec.sterms.push_back({form_var(F, n, j), std::move(g)});
        }
        RankCertificate cert;
        cert.value = dec.sterms.size();
        cert.witness = std::move(dec);
        cert.exhaustive = exhaustive;
        cert.budget_hit = hit;
        return finish(std::move(cert));
    };

    if (cap <= 1) return cap_certificate(true, false);

    // candidate universe: (deg split e, a) with 1 <= e <= floor(d/2)
    std::vector<Candidate> universe;
    for (int e = 1; e <= d / 2; ++e) {
        auto amons = monomials_exact(n, e);
        auto bmons = monomials_exact(n, d - e);
        if (vector_count(F, amons.size()) > budget.max_universe) return cap_certificate(false, true);
        for (auto& av : projective_points(F, amons.size())) {
            Candidate c;
            c.deg_a = e;
            c.fa = Form(F, n, e);
            for (size_t i = 0; i < amons.size(); ++i) c.fa.add_term(amons[i], av[i]);
            c.bdim = bmons.size();
            c.block = Matrix(F, dmons.size(), bmons.size());
            for (size_t col = 0; col < bmons.size(); ++col) {
                for (const auto& [ea, ca] : c.fa.terms()) {
                    Expo sum(n);
                    for (int i = 0; i < n; ++i) sum[i] = ea[i] + bmons[col][i];
                    size_t row = std::lower_bound(dmons.begin(), dmons.end(), sum, GrlexLess{}) -
                                 dmons.begin();
                    c.block.at(row, col) = F.add(c.block.at(row, col), ca);
                }
            }
            universe.push_back(std::move(c));
            if (universe.size() > budget.max_universe) return cap_certificate(false, true);
        }
    }

    uint64_t systems = 0;
    for (uint64_t r = 1; r < cap; ++r) {
        for (size_t ci = 0; ci < cs.size(); ++ci) {
            std::vector<FieldElement> rhs = combos[ci].dense_coeffs();
            std::optional<RankCertificate> found;
            bool cut = false;
            for_each_combination(universe.size(), r, [&](const std::vector<size_t>& pick) {
                if (++systems > budget.max_systems) {
                    cut = true;
                    return true;
                }
                std::vector<const Candidate*> picks;
                for (size_t i : pick) picks.push_back(&universe[i]);
                auto sol = solve_terms(F, picks, rhs);
                if (!sol) return false;
                Decomposition dec;
                dec.kind = DecompKind::Strength;
                dec.coeff_field = F;
                dec.coeffs = cs[ci];
                for (size_t i = 0; i < picks.size(); ++i) {
                    Form bf = Form::from_dense(F, n, d - picks[i]->deg_a, (*sol)[i]);
                    if (bf.is_zero()) continue;
                    dec.sterms.push_back({picks[i]->fa, std::move(bf)});
                }
                RankCertificate cert;
                cert.value = dec.sterms.size();
                cert.witness = std::move(dec);
                cert.exhaustive = true;
                found = std::move(cert);
                return true;
            });
            if (found) return finish(std::move(*found));
            if (cut) return cap_certificate(false, true);
        }
    }
    return cap_certificate(true, false);
}

enum class QuadMode { AlgClosed, RealDiagonal, FiniteOdd };

/// Exact strength of a quadratic form under the three closed-form regimes of
/// the classical quadric theory.
inline uint64_t quad_strength(const Form& f, QuadMode mode) {
    if (f.degree() != 2) fail(Errc::NOT_QUADRATIC, "quad_strength needs a degree-2 form");
    const FieldCtx& F = f.field();
    int n = f.nvars();

    auto gram = [&]() {
        if (F.characteristic() == 2) fail(Errc::CHAR_TWO_UNSUPPORTED, "no Gram matrix in characteristic 2");
        Matrix G(F, n, n);
        FieldElement half = F.inv(F.from_int(2));
        for (int i = 1; i <= n; ++i) {
            for (int j = i; j <= n; ++j) {
                Expo e(n, 0);
                e[i - 1] += 1;
                e[j - 1] += 1;
                FieldElement c = f.coeff(e);
                if (i == j) {
                    G.at(i - 1, j - 1) = c;
                } else {
                    FieldElement h = F.mul(c, half);
                    G.at(i - 1, j - 1) = h;
                    G.at(j - 1, i - 1) = h;
                }
            }
        }
        return G;
    };

    switch (mode) {
        case QuadMode::AlgClosed: {
            size_t r = gram().rank();
            return (r + 1) / 2;
        }
        case QuadMode::RealDiagonal: {
            if (F.is_finite()) fail(Errc::UNSUPPORTED, "REAL_DIAGONAL needs rational coefficients");
            uint64_t pos = 0, neg = 0;
            for (const auto& [e, c] : f.terms()) {
                bool diag = false;
                for (int i = 0; i < n; ++i) diag = diag || e[i] == 2;
                if (!diag) fail(Errc::UNSUPPORTED, "REAL_DIAGONAL needs a diagonal form");
                if (c.rat > 0)
                    ++pos;
                else
                    ++neg;
            }
            return std::max(pos, neg);
        }
        case QuadMode::FiniteOdd: {
            if (!F.is_finite()) fail(Errc::INFINITE_FIELD, "FINITE_ODD needs a finite field");
            if (F.characteristic() == 2) fail(Errc::CHAR_TWO_UNSUPPORTED, "FINITE_ODD needs odd characteristic");
            Matrix G = gram();
            // maximal totally singular subspace by exhaustive subspace search,
            // largest dimension first
            for (size_t k = n; k >= 1; --k) {
                uint64_t est = 1;
                for (size_t i = 0; i < k * (n - k) && est < (1ULL << 22); ++i) est *= F.size();
                if (est >= (1ULL << 22)) fail(Errc::CAP_EXCEEDED, "subspace search too large");
                for (const auto& basis : subspaces(F, n, k)) {
                    bool singular = true;
                    for (size_t a = 0; a < k && singular; ++a) {
                        for (size_t b = a; b < k && singular; ++b) {
                            FieldElement acc = F.zero();
                            for (int i = 0; i < n; ++i)
                                for (int j = 0; j < n; ++j)
                                    acc = F.add(acc, F.mul(basis[a][i],
                                                           F.mul(G.at(i, j), basis[b][j])));
                            singular = F.is_zero(acc);
                        }
                    }
                    if (singular) return n - k;
                }
            }
            return n;
        }
    }
    fail(Errc::UNSUPPORTED, "bad mode");
}

} // namespace sprank
