#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sprank/linalg.hpp"
#include "sprank/poly.hpp"
#include "sprank/randgen.hpp"
#include "sprank/ranksearch.hpp"
#include "sprank/rng.hpp"
#include "sprank/tensor.hpp"

namespace sprank {

/// Parameters of a bounded-rank locus: the image of the standard
/// parameterisation with r terms over the given partitions (tensor case) or
/// degree splits (form case), mixed through an m x m coefficient matrix.
struct LocusSpec {
    int d = 2;
    int m = 1;
    int r = 1;
    bool form_mode = false;
    std::vector<uint32_t> shape;              // tensor case
    std::vector<std::vector<int>> partitions; // tensor case, one subset per term
    int nvars = 0;                            // form case
    std::vector<int> splits;                  // form case, one degree per term

    static LocusSpec tensors(std::vector<uint32_t> shape, int m, int r,
                             std::vector<std::vector<int>> partitions = {}) {
        LocusSpec s;
        s.d = static_cast<int>(shape.size());
        s.m = m;
        s.r = r;
        s.shape = std::move(shape);
        if (partitions.empty()) partitions.assign(r, {1}); // default: all terms split off slot 1
        s.partitions = std::move(partitions);
        if (static_cast<int>(s.partitions.size()) != r)
            fail(Errc::SHAPE_MISMATCH, "one partition per term");
        for (auto& I : s.partitions) check_subset(I, s.d);
        if (s.m < 1 || s.r < 0 || s.d < 2) fail(Errc::UNSUPPORTED, "bad locus parameters");
        return s;
    }

    static LocusSpec forms(int nvars, int d, int m, int r, std::vector<int> splits = {}) {
        LocusSpec s;
        s.form_mode = true;
        s.d = d;
        s.m = m;
        s.r = r;
        s.nvars = nvars;
        if (splits.empty()) splits.assign(r, 1);
        s.splits = std::move(splits);
        if (static_cast<int>(s.splits.size()) != r) fail(Errc::SHAPE_MISMATCH, "one split per term");
        for (int e : s.splits)
            if (e < 1 || e > d - 1) fail(Errc::UNSUPPORTED, "degree split out of range");
        if (s.m < 1 || s.r < 0 || s.d < 2 || s.nvars < 1) fail(Errc::UNSUPPORTED, "bad locus parameters");
        return s;
    }

    /// Number of ambient coordinates of the tuple space.
    size_t ambient_dim() const {
        size_t per = 1;
        if (form_mode) {
            per = monomials_exact(nvars, d).size();
        } else {
            for (uint32_t n : shape) per *= n;
        }
        return per * static_cast<size_t>(m);
    }
};

/// Draws one point of the locus: g, the free tuple entries and the (a_i, b_i)
/// factors all uniform from the seeded stream, then evaluates the
/// parameterisation exactly.
inline TensorTuple sample_image_tensors(const LocusSpec& spec, const FieldCtx& F, Rng& rng) {
    if (spec.form_mode) fail(Errc::UNSUPPORTED, "tensor sampler on a form locus");
    if (!F.is_finite()) fail(Errc::INFINITE_FIELD, "sampling needs a finite field");
    int m = spec.m;
    Matrix g = random_matrix(F, m, m, rng);
    std::vector<Tensor> list;
    for (int k = 0; k + 1 < m; ++k) list.push_back(random_tensor(F, spec.shape, rng));
    Tensor s(F, spec.shape);
    for (int i = 0; i < spec.r; ++i) {
        const auto& I = spec.partitions[i];
        auto Ic = complement_subset(I, spec.d);
        Tensor a = random_tensor(F, subshape(spec.shape, I), rng);
        Tensor b = random_tensor(F, subshape(spec.shape, Ic), rng);
        Decomposition one;
        one.kind = DecompKind::Partition;
        one.coeff_field = F;
        one.coeffs = {F.one()};
        one.pterms.push_back({I, std::move(a), std::move(b)});
        s = s.plus(reassemble_partition(one, F, spec.shape));
    }
    list.push_back(std::move(s));
    std::vector<Tensor> out;
    for (int k = 0; k < m; ++k) {
        Tensor acc(F, spec.shape);
        for (int l = 0; l < m; ++l) acc = acc.plus(list[l].scaled(g.at(k, l)));
        out.push_back(std::move(acc));
    }
    return TensorTuple(std::move(out));
}

inline FormTuple sample_image_forms(const LocusSpec& spec, const FieldCtx& F, Rng& rng) {
    if (!spec.form_mode) fail(Errc::UNSUPPORTED, "form sampler on a tensor locus");
    if (!F.is_finite()) fail(Errc::INFINITE_FIELD, "sampling needs a finite field");
    int m = spec.m;
    Matrix g = random_matrix(F, m, m, rng);
    std::vector<Form> list;
    for (int k = 0; k + 1 < m; ++k) list.push_back(random_form(F, spec.nvars, spec.d, rng));
    Form s(F, spec.nvars, spec.d);
    for (int i = 0; i < spec.r; ++i) {
        Form a = random_form(F, spec.nvars, spec.splits[i], rng);
        Form b = random_form(F, spec.nvars, spec.d - spec.splits[i], rng);
        s = s.plus(form_mul(a, b));
    }
    list.push_back(std::move(s));
    std::vector<Form> out;
    for (int k = 0; k < m; ++k) {
        Form acc(F, spec.nvars, spec.d);
        for (int l = 0; l < m; ++l) acc = acc.plus(list[l].scaled(g.at(k, l)));
        out.push_back(std::move(acc));
    }
    return FormTuple(std::move(out));
}

/// Flat coordinates of a sampled tuple: tuple index major, then the entry
/// coordinates (row-major entries / graded-lex monomials).
inline std::vector<FieldElement> locus_coordinates(const LocusSpec& spec, const FieldCtx& F,
                                                   Rng& rng) {
    std::vector<FieldElement> out;
    if (spec.form_mode) {
        FormTuple fs = sample_image_forms(spec, F, rng);
        for (size_t k = 0; k < fs.size(); ++k) {
            auto dense = fs[k].dense_coeffs();
            out.insert(out.end(), dense.begin(), dense.end());
        }
    } else {
        TensorTuple ts = sample_image_tensors(spec, F, rng);
        for (size_t k = 0; k < ts.size(); ++k)
            for (size_t off = 0; off < ts[k].total_entries(); ++off) out.push_back(ts[k].flat(off));
    }
    return out;
}

/// A mined defining equation. Certified against samples only: the recorded
/// evaluation points and the fresh verification points all evaluate to zero.
struct MinedEquation {
    Form polynomial; // over the locus coordinates
    int degree_cap = 0;
    uint64_t samples_used = 0;
    uint64_t verification_samples = 0;
    uint64_t seed = 0;
    size_t kernel_dim = 0;
};

/// Full mining state, kept for analysis: the recorded samples, the monomial
/// list of degree <= D, and the kernel of the evaluation matrix.
struct MiningRun {
    std::vector<std::vector<FieldElement>> samples;
    std::vector<Expo> monomial_list;
    std::vector<std::vector<FieldElement>> kernel;
    std::optional<MinedEquation> equation;
};

namespace minedetail {

inline FieldElement eval_monomial(const FieldCtx& F, const Expo& e,
                                  const std::vector<FieldElement>& point) {
    FieldElement acc = F.one();
    for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) acc = F.mul(acc, F.pow(point[i], e[i]));
    return acc;
}

inline FieldElement eval_poly(const FieldCtx& F, const std::vector<Expo>& mons,
                              const std::vector<FieldElement>& coeffs,
                              const std::vector<FieldElement>& point) {
    FieldElement acc = F.zero();
    for (size_t i = 0; i < mons.size(); ++i) {
        if (F.is_zero(coeffs[i])) continue;
        acc = F.add(acc, F.mul(coeffs[i], eval_monomial(F, mons[i], point)));
    }
    return acc;
}

} // namespace minedetail

/// Mines one defining equation of the locus by interpolation: evaluates all
/// monomials of degree <= D at (#monomials + margin) seeded samples, takes a
/// kernel vector of the evaluation matrix, and verifies it on `margin` fresh
/// samples. The reported polynomial is the lowest-degree homogeneous component
/// of the chosen kernel vector (the locus is a cone, so each component must
/// vanish separately); a component failing any recorded or fresh sample raises
/// VERIFICATION_FAILED.
inline MiningRun mine_equation_run(const LocusSpec& spec, const FieldCtx& F, int degree_cap,
                                   uint64_t margin, uint64_t seed, const Budget& budget = {}) {
    if (!F.is_finite()) fail(Errc::INFINITE_FIELD, "mining needs a finite field");
    MiningRun run;
    size_t nv = spec.ambient_dim();
    run.monomial_list = monomials(static_cast<int>(nv), degree_cap);
    if (run.monomial_list.size() > budget.max_universe)
        fail(Errc::CAP_EXCEEDED, "interpolation matrix too wide");
    uint64_t nsamples = run.monomial_list.size() + margin;
    if (nsamples * run.monomial_list.size() > budget.max_systems)
        fail(Errc::CAP_EXCEEDED, "interpolation matrix too large");

    Rng rng(seed);
    Matrix eval(F, nsamples, run.monomial_list.size());
    for (uint64_t s = 0; s < nsamples; ++s) {
        auto point = locus_coordinates(spec, F, rng);
        for (size_t c = 0; c < run.monomial_list.size(); ++c)
            eval.at(s, c) = minedetail::eval_monomial(F, run.monomial_list[c], point);
        run.samples.push_back(std::move(point));
    }
    run.kernel = kernel_basis(eval);
    if (run.kernel.empty()) return run; // NONE_FOUND

    // kernel vector with the graded-lex smallest leading monomial
    auto leading = [&](const std::vector<FieldElement>& v) {
        size_t i = 0;
        while (i < v.size() && F.is_zero(v[i])) ++i;
        return i;
    };
    size_t best = 0;
    for (size_t i = 1; i < run.kernel.size(); ++i)
        if (leading(run.kernel[i]) < leading(run.kernel[best])) best = i;
    const auto& chosen = run.kernel[best];

    // split into homogeneous components; keep the lowest nonzero degree
    std::optional<int> low_degree;
    for (size_t i = 0; i < chosen.size(); ++i) {
        if (F.is_zero(chosen[i])) continue;
        int deg = static_cast<int>(expo_degree(run.monomial_list[i]));
        if (!low_degree || deg < *low_degree) low_degree = deg;
    }
    std::vector<FieldElement> component(chosen.size(), F.zero());
    for (size_t i = 0; i < chosen.size(); ++i)
        if (!F.is_zero(chosen[i]) &&
            static_cast<int>(expo_degree(run.monomial_list[i])) == *low_degree)
            component[i] = chosen[i];

    for (const auto& pt : run.samples)
        if (!F.is_zero(minedetail::eval_poly(F, run.monomial_list, component, pt)))
            fail(Errc::VERIFICATION_FAILED,
                 "homogeneous component fails a recorded sample; the kernel vector mixes degrees");
    uint64_t fresh = margin;
    for (uint64_t s = 0; s < fresh; ++s) {
        auto point = locus_coordinates(spec, F, rng);
        if (!F.is_zero(minedetail::eval_poly(F, run.monomial_list, component, point)))
            fail(Errc::VERIFICATION_FAILED, "mined equation fails a fresh verification sample");
    }

    MinedEquation eq;
    eq.polynomial = Form(F, static_cast<int>(nv), *low_degree);
    for (size_t i = 0; i < component.size(); ++i)
        if (!F.is_zero(component[i])) eq.polynomial.add_term(run.monomial_list[i], component[i]);
    eq.degree_cap = degree_cap;
    eq.samples_used = nsamples;
    eq.verification_samples = fresh;
    eq.seed = seed;
    eq.kernel_dim = run.kernel.size();
    run.equation = std::move(eq);
    return run;
}

inline std::optional<MinedEquation> mine_equation(const LocusSpec& spec, const FieldCtx& F,
                                                  int degree_cap, uint64_t margin, uint64_t seed,
                                                  const Budget& budget = {}) {
    return mine_equation_run(spec, F, degree_cap, margin, seed, budget).equation;
}

// -- explicit numeric bounds -----------------------------------------------------

/// Whether n^d > m^2 + r(n^(d-1) + n), the non-dominance inequality.
inline bool nbound_holds(int d, int m, int r, const BigInt& n) {
    BigInt nd = 1, nd1 = 1;
    for (int i = 0; i < d; ++i) nd *= n;
    for (int i = 0; i < d - 1; ++i) nd1 *= n;
    return nd > BigInt(m) * m + BigInt(r) * (nd1 + n);
}

/// Smallest n with n^d > m^2 + r(n^(d-1) + n).
inline uint64_t min_n(int d, int m, int r) {
    if (d < 2 || m < 1 || r < 0) fail(Errc::UNSUPPORTED, "need d >= 2, m >= 1, r >= 0");
    BigInt n = 1;
    while (!nbound_holds(d, m, r, n)) ++n;
    return n.convert_to<uint64_t>();
}

/// m * sum over subsets I with 1 <= |I| <= floor(d/2) of prod_{j in I^c} n_j.
inline BigInt prk_bound(int d, int m, const std::vector<uint32_t>& shape) {
    if (d < 2) fail(Errc::UNSUPPORTED, "need d >= 2");
    if (static_cast<int>(shape.size()) != d) fail(Errc::SHAPE_MISMATCH, "shape length != d");
    BigInt total = 0;
    for (int size = 1; size <= d / 2; ++size) {
        for (const auto& I : subsets_of_size(d, size)) {
            BigInt prod = 1;
            for (int j : complement_subset(I, d)) prod *= shape[j - 1];
            total += prod;
        }
    }
    return BigInt(m) * total;
}

struct DegreeBound {
    uint64_t n = 0; // the 4(r + m^(2/d)) dimension, rounded up
    BigInt D;       // smallest degree meeting the displayed sufficient condition
};

namespace minedetail {

inline BigInt ceil_rat(const BigRat& x) {
    BigInt num = numerator(x), den = denominator(x);
    BigInt q = num / den;
    if (q * den < num) ++q;
    return q;
}

/// Enclosure of Euler's number by Taylor partial sums: e in [lo, lo + 2/terms!].
inline void e_enclosure(unsigned terms, BigRat& lo, BigRat& hi) {
    BigInt fact = 1;
    lo = 0;
    for (unsigned k = 0; k < terms; ++k) {
        if (k > 0) fact *= k;
        lo += BigRat(1, fact);
    }
    fact *= terms;
    hi = lo + BigRat(2, fact);
}

} // namespace minedetail

/// Smallest integer D with
///   log2(D) >= 4 log2(m n^d) + 4(m - 1/4) log2(3e / ((m - 1/3) n^d))
/// and D >= (m - 1/4) n^d, where n = 4(r + m^(2/d)) rounded up. Since
/// 4(m - 1/4) is the integer 4m - 1, the first condition is D >= q * e^(4m-1)
/// with q exactly rational, and the ceiling is computed with an interval
/// enclosure of e tightened until it decides (q e^k is irrational, so the
/// bracket always resolves).
inline DegreeBound degree_bound(int d, int m, int r) {
    if (d < 2 || m < 1 || r < 0) fail(Errc::UNSUPPORTED, "need d >= 2, m >= 1, r >= 0");
    // n = 4r + ceil(4 m^(2/d)): smallest k with k^d >= 4^d m^2
    BigInt target = 1;
    for (int i = 0; i < d; ++i) target *= 4;
    target *= BigInt(m) * m;
    BigInt k = 1;
    for (;;) {
        BigInt kd = 1;
        for (int i = 0; i < d; ++i) kd *= k;
        if (kd >= target) break;
        ++k;
    }
    BigInt n = BigInt(4) * r + k;
    if (!nbound_holds(d, m, r, n)) fail(Errc::NBOUND_UNMET, "n = 4(r + m^(2/d)) fails the n-bound");

    BigInt nd = 1;
    for (int i = 0; i < d; ++i) nd *= n;
    int pw = 4 * m - 1;
    BigRat mn4 = BigRat(BigInt(m) * nd);
    BigRat q = mn4 * mn4 * mn4 * mn4;
    BigRat base = BigRat(3) / (BigRat(m) - BigRat(1, 3)); // 3 / (m - 1/3), times e later
    base /= BigRat(nd);
    for (int i = 0; i < pw; ++i) q *= base;

    BigInt DA;
    for (unsigned terms = 32;; terms *= 2) {
        BigRat lo, hi;
        minedetail::e_enclosure(terms, lo, hi);
        BigRat elo = 1, ehi = 1;
        for (int i = 0; i < pw; ++i) {
            elo *= lo;
            ehi *= hi;
        }
        BigInt cl = minedetail::ceil_rat(q * elo);
        BigInt ch = minedetail::ceil_rat(q * ehi);
        if (cl == ch) {
            DA = cl;
            break;
        }
        if (terms > 4096) fail(Errc::UNSOLVABLE, "e-enclosure failed to resolve the ceiling");
    }
    BigInt DB = minedetail::ceil_rat((BigRat(m) - BigRat(1, 4)) * BigRat(nd));
    DegreeBound out;
    out.n = n.convert_to<uint64_t>();
    out.D = DA > DB ? DA : DB;
    return out;
}

} // namespace sprank
