#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "sprank/field.hpp"

namespace sprank {

using Expo = std::vector<uint32_t>;

inline uint32_t expo_degree(const Expo& e) {
    return std::accumulate(e.begin(), e.end(), uint32_t{0});
}

/// Graded-lexicographic term order used everywhere monomials are indexed:
/// lower total degree first; within a degree, the vector whose first differing
/// exponent is larger comes first (so for n=2, d=1: (1,0) precedes (0,1)).
struct GrlexLess {
    bool operator()(const Expo& a, const Expo& b) const {
        uint32_t da = expo_degree(a), db = expo_degree(b);
        if (da != db) return da < db;
        for (size_t i = 0; i < a.size() && i < b.size(); ++i)
            if (a[i] != b[i]) return a[i] > b[i];
        return a.size() < b.size();
    }
};

/// All exponent vectors in n variables of total degree <= D, graded-lex order.
/// Count is C(n+D, n).
inline std::vector<Expo> monomials(int nvars, int max_degree) {
    std::vector<Expo> out;
    Expo cur(nvars, 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == nvars - 1) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    for (int d = 0; d <= max_degree; ++d) rec(rec, 0, d);
    return out;
}

/// Exponent vectors of total degree exactly d, graded-lex order.
inline std::vector<Expo> monomials_exact(int nvars, int degree) {
    std::vector<Expo> out;
    Expo cur(nvars, 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == nvars - 1) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, degree);
    return out;
}

/// A homogeneous form: sparse exponent-vector to coefficient map with no zero
/// coefficients stored. The zero form keeps a nominal degree tag but compares
/// equal to every other zero form.
class Form {
  public:
    Form() = default;
    Form(FieldCtx field, int nvars, int degree)
        : field_(std::move(field)), nvars_(nvars), degree_(degree) {
        if (nvars < 1 || degree < 0) fail(Errc::UNSUPPORTED, "bad form dimensions");
    }

    const FieldCtx& field() const { return field_; }
    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    const std::map<Expo, FieldElement, GrlexLess>& terms() const { return terms_; }

    /// Adds c * x^e into the form; drops the entry if the total cancels.
    void add_term(const Expo& e, const FieldElement& c) {
        if (static_cast<int>(e.size()) != nvars_) fail(Errc::VAR_MISMATCH, "exponent length != nvars");
        if (static_cast<int>(expo_degree(e)) != degree_)
            fail(Errc::UNSUPPORTED, "term degree breaks homogeneity");
        field_.check(c);
        if (field_.is_zero(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = field_.add(it->second, c);
            if (field_.is_zero(it->second)) terms_.erase(it);
        }
    }

    FieldElement coeff(const Expo& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? field_.zero() : it->second;
    }

    Form scaled(const FieldElement& c) const {
        Form out(field_, nvars_, degree_);
        if (field_.is_zero(c)) return out;
        for (const auto& [e, v] : terms_) out.add_term(e, field_.mul(v, c));
        return out;
    }

    Form plus(const Form& o) const {
        require_compatible(o);
        if (is_zero()) {
            Form out = o;
            return out;
        }
        if (!o.is_zero() && degree_ != o.degree_) fail(Errc::UNSUPPORTED, "degree mismatch in sum");
        Form out = *this;
        for (const auto& [e, v] : o.terms_) out.add_term(e, v);
        return out;
    }

    bool operator==(const Form& o) const {
        if (field_ != o.field_ || nvars_ != o.nvars_) return false;
        if (terms_.empty() && o.terms_.empty()) return true; // zero forms of any tag agree
        return degree_ == o.degree_ && terms_ == o.terms_;
    }
    bool operator!=(const Form& o) const { return !(*this == o); }

    void require_compatible(const Form& o) const {
        if (field_ != o.field_) fail(Errc::FIELD_MISMATCH, "forms over different fields");
        if (nvars_ != o.nvars_) fail(Errc::VAR_MISMATCH, "forms in different variable counts");
    }

    /// Dense coefficient vector over monomials_exact(nvars, degree).
    std::vector<FieldElement> dense_coeffs() const {
        auto mons = monomials_exact(nvars_, degree_);
        std::vector<FieldElement> out(mons.size(), field_.zero());
        for (size_t i = 0; i < mons.size(); ++i) out[i] = coeff(mons[i]);
        return out;
    }

    static Form from_dense(const FieldCtx& field, int nvars, int degree,
                           const std::vector<FieldElement>& coeffs) {
        auto mons = monomials_exact(nvars, degree);
        if (coeffs.size() != mons.size()) fail(Errc::SHAPE_MISMATCH, "dense coefficient count");
        Form f(field, nvars, degree);
        for (size_t i = 0; i < mons.size(); ++i) f.add_term(mons[i], coeffs[i]);
        return f;
    }

  private:
    FieldCtx field_;
    int nvars_ = 1;
    int degree_ = 0;
    std::map<Expo, FieldElement, GrlexLess> terms_;
};

inline Form form_mul(const Form& a, const Form& b) {
    a.require_compatible(b);
    Form out(a.field(), a.nvars(), a.degree() + b.degree());
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            Expo e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, a.field().mul(ca, cb));
        }
    }
    return out;
}

/// Formal partial derivative with respect to variable index i (1-based).
inline Form form_partial(const Form& f, int i) {
    if (i < 1 || i > f.nvars()) fail(Errc::BAD_INDEX, "variable index out of range");
    if (f.degree() < 1) fail(Errc::UNSUPPORTED, "cannot differentiate a degree-0 form");
    Form out(f.field(), f.nvars(), f.degree() - 1);
    for (const auto& [e, c] : f.terms()) {
        if (e[i - 1] == 0) continue;
        Expo d = e;
        d[i - 1] -= 1;
        out.add_term(d, f.field().mul(c, f.field().from_int(e[i - 1])));
    }
    return out;
}

inline FieldElement form_eval(const Form& f, const std::vector<FieldElement>& point) {
    if (point.size() != static_cast<size_t>(f.nvars()))
        fail(Errc::FIELD_MISMATCH, "point length != nvars");
    const FieldCtx& F = f.field();
    for (const auto& x : point) F.check(x);
    FieldElement acc = F.zero();
    for (const auto& [e, c] : f.terms()) {
        FieldElement term = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) term = F.mul(term, F.pow(point[i], e[i]));
        acc = F.add(acc, term);
    }
    return acc;
}

/// x_i as a linear form (1-based index).
inline Form form_var(const FieldCtx& field, int nvars, int i) {
    Form f(field, nvars, 1);
    Expo e(nvars, 0);
    e[i - 1] = 1;
    f.add_term(e, field.one());
    return f;
}

/// An m-tuple of forms sharing field, variable count and degree. Zero entries
/// are retagged to the common degree.
class FormTuple {
  public:
    explicit FormTuple(std::vector<Form> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) fail(Errc::UNSUPPORTED, "empty form tuple");
        int d = -1;
        for (const auto& f : entries_) {
            entries_.front().require_compatible(f);
            if (!f.is_zero()) {
                if (d >= 0 && f.degree() != d) fail(Errc::UNSUPPORTED, "mixed degrees in tuple");
                d = f.degree();
            }
        }
        if (d >= 0)
            for (auto& f : entries_)
                if (f.is_zero()) f = Form(f.field(), f.nvars(), d);
    }

    size_t size() const { return entries_.size(); }
    const Form& operator[](size_t i) const { return entries_[i]; }
    const std::vector<Form>& entries() const { return entries_; }
    const FieldCtx& field() const { return entries_.front().field(); }
    int nvars() const { return entries_.front().nvars(); }
    int degree() const { return entries_.front().degree(); }

    Form combine(const std::vector<FieldElement>& c) const {
        if (c.size() != entries_.size()) fail(Errc::SHAPE_MISMATCH, "coefficient count != m");
        Form acc(field(), nvars(), degree());
        for (size_t k = 0; k < entries_.size(); ++k) acc = acc.plus(entries_[k].scaled(c[k]));
        return acc;
    }

  private:
    std::vector<Form> entries_;
};

} // namespace sprank
