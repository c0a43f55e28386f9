#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sprank/error.hpp"

namespace sprank {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// An element of Q, GF(p) or GF(p^e). Exactly one part is active depending on
/// the owning FieldCtx: `rat` for Q, `res` for prime fields, `ext` (length e,
/// power-basis coefficients low to high) for extensions. Canonical form is
/// unique, so equality is plain memberwise comparison.
struct FieldElement {
    BigRat rat;
    uint64_t res = 0;
    std::vector<uint64_t> ext;

    bool operator==(const FieldElement& o) const {
        return res == o.res && ext == o.ext && rat == o.rat;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    bool operator<(const FieldElement& o) const {
        if (res != o.res) return res < o.res;
        if (ext != o.ext) return ext < o.ext;
        return rat < o.rat;
    }
};

namespace detail {

// -- dense polynomials over GF(p), coefficients low to high -------------------

inline void gfp_trim(std::vector<uint64_t>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int gfp_deg(const std::vector<uint64_t>& a) { return static_cast<int>(a.size()) - 1; }

inline uint64_t gfp_inv_scalar(uint64_t a, uint64_t p) {
    // extended Euclid on (a, p)
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(p), new_r = static_cast<int64_t>(a % p);
    while (new_r != 0) {
        int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) fail(Errc::DIV_BY_ZERO, "no inverse mod " + std::to_string(p));
    if (t < 0) t += static_cast<int64_t>(p);
    return static_cast<uint64_t>(t);
}

inline std::vector<uint64_t> gfp_mul(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                                     uint64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint64_t> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    gfp_trim(c);
    return c;
}

/// In-place remainder of a modulo monic-normalisable m.
inline void gfp_mod(std::vector<uint64_t>& a, const std::vector<uint64_t>& m, uint64_t p) {
    uint64_t lead_inv = gfp_inv_scalar(m.back(), p);
    while (gfp_deg(a) >= gfp_deg(m)) {
        uint64_t c = (a.back() * lead_inv) % p;
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
            uint64_t sub = (c * m[i]) % p;
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        gfp_trim(a);
        if (a.empty()) break;
    }
}

inline std::vector<uint64_t> gfp_gcd(std::vector<uint64_t> a, std::vector<uint64_t> b, uint64_t p) {
    gfp_trim(a);
    gfp_trim(b);
    while (!b.empty()) {
        gfp_mod(a, b, p);
        std::swap(a, b);
    }
    return a;
}

/// x^(p^k) mod f, by repeated Frobenius steps of x^p.
inline std::vector<uint64_t> gfp_frobenius_power(const std::vector<uint64_t>& f, uint64_t p,
                                                 uint32_t k) {
    auto powmod = [&](std::vector<uint64_t> base, uint64_t exp) {
        std::vector<uint64_t> acc{1};
        while (exp > 0) {
            if (exp & 1) {
                acc = gfp_mul(acc, base, p);
                gfp_mod(acc, f, p);
            }
            base = gfp_mul(base, base, p);
            gfp_mod(base, f, p);
            exp >>= 1;
        }
        return acc;
    };
    std::vector<uint64_t> r{0, 1}; // x
    for (uint32_t i = 0; i < k; ++i) r = powmod(r, p);
    return r;
}

/// Rabin irreducibility test for a monic f of degree e >= 1 over GF(p).
inline bool gfp_irreducible(const std::vector<uint64_t>& f, uint64_t p) {
    int e = gfp_deg(f);
    if (e < 1) return false;
    if (e == 1) return true;
    // x^(p^e) == x mod f
    auto xq = gfp_frobenius_power(f, p, static_cast<uint32_t>(e));
    std::vector<uint64_t> x{0, 1};
    {
        auto diff = xq;
        diff.resize(std::max(diff.size(), x.size()), 0);
        for (size_t i = 0; i < x.size(); ++i) diff[i] = (diff[i] + p - x[i]) % p;
        gfp_trim(diff);
        if (!diff.empty()) return false;
    }
    // gcd(x^(p^(e/q)) - x, f) == 1 for every prime q | e
    std::vector<int> primes;
    int rem = e;
    for (int q = 2; q * q <= rem; ++q) {
        if (rem % q == 0) {
            primes.push_back(q);
            while (rem % q == 0) rem /= q;
        }
    }
    if (rem > 1) primes.push_back(rem);
    for (int q : primes) {
        auto diff = gfp_frobenius_power(f, p, static_cast<uint32_t>(e / q));
        diff.resize(std::max<size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        gfp_trim(diff);
        auto g = gfp_gcd(f, diff, p);
        if (gfp_deg(g) != 0) return false;
    }
    return true;
}

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace detail

/// A field descriptor: Q, GF(p), or GF(p^e) with an explicit monic irreducible
/// modulus. Value type; two contexts are the same field iff they compare equal.
class FieldCtx {
  public:
    enum class Kind { Rational, Prime, Extension };

    static constexpr uint64_t kMaxPrime = (1ULL << 31) - 1;

    FieldCtx() : kind_(Kind::Rational) {}

    static FieldCtx rational() { return FieldCtx(); }

    static FieldCtx prime(uint64_t p) {
        if (!detail::is_prime_u64(p)) fail(Errc::NON_PRIME, std::to_string(p) + " is not prime");
        if (p > kMaxPrime) fail(Errc::UNSUPPORTED, "prime too large");
        FieldCtx f;
        f.kind_ = Kind::Prime;
        f.p_ = p;
        f.e_ = 1;
        return f;
    }

    /// Extension field with the given modulus (length e+1, low to high, monic).
    static FieldCtx extension(uint64_t p, const std::vector<uint64_t>& modulus) {
        if (!detail::is_prime_u64(p)) fail(Errc::NON_PRIME, std::to_string(p) + " is not prime");
        if (p > kMaxPrime) fail(Errc::UNSUPPORTED, "prime too large");
        if (modulus.size() < 3) fail(Errc::UNSUPPORTED, "extension degree must be >= 2");
        for (uint64_t c : modulus)
            if (c >= p) fail(Errc::PARSE_ERROR, "modulus coefficient out of range");
        if (modulus.back() != 1) fail(Errc::UNSUPPORTED, "modulus must be monic");
        if (!detail::gfp_irreducible(modulus, p))
            fail(Errc::REDUCIBLE_MODULUS, "modulus factors over GF(" + std::to_string(p) + ")");
        FieldCtx f;
        f.kind_ = Kind::Extension;
        f.p_ = p;
        f.e_ = static_cast<uint32_t>(modulus.size() - 1);
        f.modulus_ = modulus;
        return f;
    }

    /// Extension field with the lexicographically smallest monic irreducible
    /// modulus of degree e (coefficients compared low-degree first).
    static FieldCtx extension(uint64_t p, uint32_t e) {
        if (!detail::is_prime_u64(p)) fail(Errc::NON_PRIME, std::to_string(p) + " is not prime");
        if (e == 1) return prime(p);
        if (e == 0) fail(Errc::UNSUPPORTED, "degree must be >= 1");
        uint64_t total = 1;
        for (uint32_t i = 0; i < e; ++i) {
            if (total > (1ULL << 24)) fail(Errc::CAP_EXCEEDED, "field too large for modulus search");
            total *= p;
        }
        std::vector<uint64_t> mod(e + 1, 0);
        mod[e] = 1;
        for (uint64_t k = 0; k < total; ++k) {
            uint64_t v = k;
            for (uint32_t i = 0; i < e; ++i) { // c0 most significant in lex order
                mod[e - 1 - i] = v % p;
                v /= p;
            }
            if (detail::gfp_irreducible(mod, p)) return extension(p, mod);
        }
        fail(Errc::UNSOLVABLE, "no irreducible modulus found"); // unreachable
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ != Kind::Rational; }
    uint64_t characteristic() const { return kind_ == Kind::Rational ? 0 : p_; }
    uint64_t p() const { return p_; }
    uint32_t ext_degree() const { return e_; }
    const std::vector<uint64_t>& modulus() const { return modulus_; }

    /// Field size q = p^e; only for finite fields.
    uint64_t size() const {
        if (!is_finite()) fail(Errc::INFINITE_FIELD, "Q has no size");
        uint64_t q = 1;
        for (uint32_t i = 0; i < e_; ++i) q *= p_;
        return q;
    }

    bool operator==(const FieldCtx& o) const {
        return kind_ == o.kind_ && p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
    }
    bool operator!=(const FieldCtx& o) const { return !(*this == o); }

    // -- element construction -------------------------------------------------

    FieldElement zero() const { return from_int(0); }
    FieldElement one() const { return from_int(1); }

    FieldElement from_int(int64_t v) const {
        FieldElement x;
        switch (kind_) {
            case Kind::Rational: x.rat = v; break;
            case Kind::Prime: x.res = reduce_int(v); break;
            case Kind::Extension:
                x.ext.assign(e_, 0);
                x.ext[0] = reduce_int(v);
                break;
        }
        return x;
    }

    FieldElement from_rational(const BigRat& r) const {
        if (kind_ != Kind::Rational) fail(Errc::FIELD_MISMATCH, "rational literal in finite field");
        FieldElement x;
        x.rat = r;
        return x;
    }

    FieldElement from_residue(uint64_t r) const {
        if (kind_ == Kind::Rational) return from_int(static_cast<int64_t>(r));
        FieldElement x;
        if (kind_ == Kind::Prime) {
            x.res = r % p_;
        } else {
            x.ext.assign(e_, 0);
            x.ext[0] = r % p_;
        }
        return x;
    }

    FieldElement from_coeffs(const std::vector<uint64_t>& c) const {
        if (kind_ != Kind::Extension) fail(Errc::FIELD_MISMATCH, "coefficient vector literal in non-extension field");
        if (c.size() != e_) fail(Errc::PARSE_ERROR, "coefficient vector has wrong length");
        FieldElement x;
        x.ext = c;
        for (auto& v : x.ext) v %= p_;
        return x;
    }

    /// The power-basis generator z (class of x) of an extension field.
    FieldElement gen() const {
        if (kind_ != Kind::Extension) fail(Errc::UNSUPPORTED, "gen() on non-extension field");
        FieldElement x;
        x.ext.assign(e_, 0);
        x.ext[1] = 1;
        return x;
    }

    // -- structural validation -------------------------------------------------

    void check(const FieldElement& x) const {
        bool ok = true;
        switch (kind_) {
            case Kind::Rational: ok = x.ext.empty() && x.res == 0; break;
            case Kind::Prime:
                ok = x.ext.empty() && x.rat == 0 && x.res < p_;
                break;
            case Kind::Extension:
                ok = x.rat == 0 && x.res == 0 && x.ext.size() == e_;
                if (ok)
                    for (uint64_t c : x.ext) ok = ok && c < p_;
                break;
        }
        if (!ok) fail(Errc::FIELD_MISMATCH, "element does not belong to this field");
    }

    // -- arithmetic -------------------------------------------------------------

    bool is_zero(const FieldElement& x) const {
        switch (kind_) {
            case Kind::Rational: return x.rat == 0;
            case Kind::Prime: return x.res == 0;
            case Kind::Extension:
                return std::all_of(x.ext.begin(), x.ext.end(), [](uint64_t c) { return c == 0; });
        }
        return true;
    }

    bool is_one(const FieldElement& x) const { return x == one(); }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        check(a);
        check(b);
        FieldElement x;
        switch (kind_) {
            case Kind::Rational: x.rat = a.rat + b.rat; break;
            case Kind::Prime: x.res = (a.res + b.res) % p_; break;
            case Kind::Extension:
                x.ext.resize(e_);
                for (uint32_t i = 0; i < e_; ++i) x.ext[i] = (a.ext[i] + b.ext[i]) % p_;
                break;
        }
        return x;
    }

    FieldElement neg(const FieldElement& a) const {
        check(a);
        FieldElement x;
        switch (kind_) {
            case Kind::Rational: x.rat = -a.rat; break;
            case Kind::Prime: x.res = (p_ - a.res) % p_; break;
            case Kind::Extension:
                x.ext.resize(e_);
                for (uint32_t i = 0; i < e_; ++i) x.ext[i] = (p_ - a.ext[i]) % p_;
                break;
        }
        return x;
    }

    FieldElement sub(const FieldElement& a, const FieldElement& b) const { return add(a, neg(b)); }

    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        check(a);
        check(b);
        FieldElement x;
        switch (kind_) {
            case Kind::Rational: x.rat = a.rat * b.rat; break;
            case Kind::Prime: x.res = (a.res * b.res) % p_; break;
            case Kind::Extension: {
                auto prod = detail::gfp_mul(a.ext, b.ext, p_);
                detail::gfp_mod(prod, modulus_, p_);
                prod.resize(e_, 0);
                x.ext = std::move(prod);
                break;
            }
        }
        return x;
    }

    FieldElement inv(const FieldElement& a) const {
        check(a);
        if (is_zero(a)) fail(Errc::DIV_BY_ZERO, "inverse of zero");
        FieldElement x;
        switch (kind_) {
            case Kind::Rational: x.rat = 1 / a.rat; break;
            case Kind::Prime: x.res = detail::gfp_inv_scalar(a.res, p_); break;
            case Kind::Extension: {
                // extended Euclid in GF(p)[x] against the modulus
                std::vector<uint64_t> r0 = modulus_, r1 = a.ext;
                detail::gfp_trim(r1);
                std::vector<uint64_t> t0, t1{1};
                while (!r1.empty()) {
                    // r0 = q*r1 + r2
                    std::vector<uint64_t> q;
                    std::vector<uint64_t> rem = r0;
                    uint64_t lead_inv = detail::gfp_inv_scalar(r1.back(), p_);
                    while (detail::gfp_deg(rem) >= detail::gfp_deg(r1)) {
                        uint64_t c = (rem.back() * lead_inv) % p_;
                        size_t shift = rem.size() - r1.size();
                        if (q.size() < shift + 1) q.resize(shift + 1, 0);
                        q[shift] = c;
                        for (size_t i = 0; i < r1.size(); ++i) {
                            uint64_t s = (c * r1[i]) % p_;
                            rem[shift + i] = (rem[shift + i] + p_ - s) % p_;
                        }
                        detail::gfp_trim(rem);
                        if (rem.empty()) break;
                    }
                    auto qt1 = detail::gfp_mul(q, t1, p_);
                    std::vector<uint64_t> t2 = t0;
                    t2.resize(std::max(t2.size(), qt1.size()), 0);
                    for (size_t i = 0; i < qt1.size(); ++i) t2[i] = (t2[i] + p_ - qt1[i]) % p_;
                    detail::gfp_trim(t2);
                    t0 = std::move(t1);
                    t1 = std::move(t2);
                    r0 = std::move(r1);
                    r1 = std::move(rem);
                }
                // r0 is the gcd, a nonzero constant since the modulus is irreducible
                uint64_t s = detail::gfp_inv_scalar(r0[0], p_);
                std::vector<uint64_t> res(e_, 0);
                for (size_t i = 0; i < t0.size(); ++i) res[i] = (t0[i] * s) % p_;
                x.ext = std::move(res);
                break;
            }
        }
        return x;
    }

    FieldElement div(const FieldElement& a, const FieldElement& b) const { return mul(a, inv(b)); }

    FieldElement pow(FieldElement base, uint64_t exp) const {
        FieldElement acc = one();
        while (exp > 0) {
            if (exp & 1) acc = mul(acc, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return acc;
    }

    // -- enumeration (finite fields) --------------------------------------------

    /// Element with index k in the fixed enumeration order: residues ascending
    /// for prime fields; base-p digits of k, lowest power first, for extensions.
    FieldElement element_at(uint64_t k) const {
        if (!is_finite()) fail(Errc::INFINITE_FIELD, "cannot enumerate Q");
        if (kind_ == Kind::Prime) return from_residue(k % p_);
        std::vector<uint64_t> c(e_, 0);
        for (uint32_t i = 0; i < e_; ++i) {
            c[i] = k % p_;
            k /= p_;
        }
        return from_coeffs(c);
    }

    uint64_t index_of(const FieldElement& x) const {
        if (!is_finite()) fail(Errc::INFINITE_FIELD, "cannot enumerate Q");
        check(x);
        if (kind_ == Kind::Prime) return x.res;
        uint64_t k = 0;
        for (uint32_t i = e_; i-- > 0;) k = k * p_ + x.ext[i];
        return k;
    }

    // -- element literals --------------------------------------------------------

    /// Canonical literal: `num/den` for Q, decimal residue for GF(p),
    /// `[c0,c1,...]` for GF(p^e).
    std::string format(const FieldElement& x) const {
        check(x);
        std::ostringstream os;
        switch (kind_) {
            case Kind::Rational: os << numerator(x.rat) << "/" << denominator(x.rat); break;
            case Kind::Prime: os << x.res; break;
            case Kind::Extension: {
                os << "[";
                for (uint32_t i = 0; i < e_; ++i) {
                    if (i) os << ",";
                    os << x.ext[i];
                }
                os << "]";
                break;
            }
        }
        return os.str();
    }

    FieldElement parse(const std::string& s) const {
        try {
            switch (kind_) {
                case Kind::Rational: {
                    auto slash = s.find('/');
                    if (slash == std::string::npos) return from_rational(BigRat(BigInt(s)));
                    BigInt num(s.substr(0, slash));
                    BigInt den(s.substr(slash + 1));
                    if (den == 0) fail(Errc::PARSE_ERROR, "zero denominator");
                    return from_rational(BigRat(num, den));
                }
                case Kind::Prime: {
                    size_t pos = 0;
                    unsigned long long v = std::stoull(s, &pos);
                    if (pos != s.size() || v >= p_) fail(Errc::PARSE_ERROR, "bad residue: " + s);
                    return from_residue(v);
                }
                case Kind::Extension: {
                    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
                        fail(Errc::PARSE_ERROR, "bad extension literal: " + s);
                    std::vector<uint64_t> c;
                    std::string body = s.substr(1, s.size() - 2);
                    std::istringstream is(body);
                    std::string tok;
                    while (std::getline(is, tok, ',')) {
                        size_t pos = 0;
                        unsigned long long v = std::stoull(tok, &pos);
                        if (pos != tok.size() || v >= p_) fail(Errc::PARSE_ERROR, "bad coefficient: " + tok);
                        c.push_back(v);
                    }
                    if (c.size() != e_) fail(Errc::PARSE_ERROR, "wrong coefficient count: " + s);
                    return from_coeffs(c);
                }
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(Errc::PARSE_ERROR, "bad element literal: " + s);
        }
        fail(Errc::PARSE_ERROR, "bad element literal: " + s);
    }

    /// Canonical field spec: `Q`, `GF(p)`, or `GF(p^e;c0,...,ce)`.
    std::string spec() const {
        switch (kind_) {
            case Kind::Rational: return "Q";
            case Kind::Prime: return "GF(" + std::to_string(p_) + ")";
            case Kind::Extension: {
                std::ostringstream os;
                os << "GF(" << p_ << "^" << e_ << ";";
                for (size_t i = 0; i < modulus_.size(); ++i) {
                    if (i) os << ",";
                    os << modulus_[i];
                }
                os << ")";
                return os.str();
            }
        }
        return "?";
    }

  private:
    uint64_t reduce_int(int64_t v) const {
        int64_t m = static_cast<int64_t>(p_);
        int64_t r = v % m;
        if (r < 0) r += m;
        return static_cast<uint64_t>(r);
    }

    Kind kind_;
    uint64_t p_ = 0;
    uint32_t e_ = 1;
    std::vector<uint64_t> modulus_;
};

/// Parse a field spec: `Q` | `GF(p)` | `GF(p^e)` | `GF(p^e;c0,c1,...,ce)`.
/// `GF(q)` with q a proper prime power is resolved to the extension field with
/// the default (lexicographically smallest) modulus.
inline FieldCtx field_make(const std::string& spec_in) {
    std::string s = spec_in;
    // strip surrounding whitespace
    auto issp = [](char c) { return c == ' ' || c == '\t'; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();

    if (s == "Q") return FieldCtx::rational();
    if (s.rfind("GF(", 0) != 0 || s.back() != ')')
        fail(Errc::UNSUPPORTED, "unrecognised field spec: " + spec_in);
    std::string body = s.substr(3, s.size() - 4);

    std::string head = body;
    std::optional<std::string> modpart;
    if (auto semi = body.find(';'); semi != std::string::npos) {
        head = body.substr(0, semi);
        modpart = body.substr(semi + 1);
    }

    uint64_t p = 0;
    uint32_t e = 1;
    try {
        if (auto caret = head.find('^'); caret != std::string::npos) {
            size_t pos = 0;
            p = std::stoull(head.substr(0, caret), &pos);
            std::string epart = head.substr(caret + 1);
            size_t epos = 0;
            e = static_cast<uint32_t>(std::stoul(epart, &epos));
            if (pos != caret || epos != epart.size()) fail(Errc::PARSE_ERROR, "bad field spec: " + spec_in);
        } else {
            size_t pos = 0;
            uint64_t q = std::stoull(head, &pos);
            if (pos != head.size()) fail(Errc::PARSE_ERROR, "bad field spec: " + spec_in);
            if (q < 2) fail(Errc::NON_PRIME, std::to_string(q) + " is not a prime power");
            // factor q as p^e; any second prime factor makes it invalid
            uint64_t base = q;
            for (uint64_t d = 2; d * d <= base; ++d) {
                if (base % d == 0) {
                    base = d;
                    break;
                }
            }
            p = base;
            uint64_t rest = q;
            e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            if (rest != 1) fail(Errc::NON_PRIME, std::to_string(q) + " is not a prime power");
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(Errc::PARSE_ERROR, "bad field spec: " + spec_in);
    }
    if (e == 0) fail(Errc::PARSE_ERROR, "bad field spec: " + spec_in);

    if (modpart) {
        std::vector<uint64_t> mod;
        std::istringstream is(*modpart);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                size_t pos = 0;
                mod.push_back(std::stoull(tok, &pos));
                if (pos != tok.size()) fail(Errc::PARSE_ERROR, "bad modulus coefficient: " + tok);
            } catch (const Error&) {
                throw;
            } catch (const std::exception&) {
                fail(Errc::PARSE_ERROR, "bad modulus coefficient: " + tok);
            }
        }
        if (mod.size() != e + 1) fail(Errc::PARSE_ERROR, "modulus must list e+1 coefficients");
        return FieldCtx::extension(p, mod);
    }
    if (e == 1) return FieldCtx::prime(p);
    return FieldCtx::extension(p, e);
}

enum class ArithOp { ADD, MUL, INV, NEG };

/// Single-dispatch arithmetic entry point (INV and NEG act on `b`).
inline FieldElement arith(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b,
                          ArithOp op) {
    switch (op) {
        case ArithOp::ADD: return ctx.add(a, b);
        case ArithOp::MUL: return ctx.mul(a, b);
        case ArithOp::INV: return ctx.inv(b);
        case ArithOp::NEG: return ctx.neg(b);
    }
    fail(Errc::UNSUPPORTED, "bad op");
}

/// A declared extension L/K with its coordinate machinery: K-basis of L is
/// (1, w, ..., w^{e-1}) with w the power-basis generator of L, and elements of
/// K embed via the smallest root of K's modulus in L.
class FieldExt {
  public:
    /// Builds the extension descriptor, or throws NOT_AN_EXTENSION.
    /// Supported pairs: any field as an extension of itself, GF(p) in GF(p^e),
    /// and GF(p^a) in GF(p^(a*b)).
    static FieldExt make(const FieldCtx& K, const FieldCtx& L) {
        FieldExt x;
        x.base_ = K;
        x.top_ = L;
        if (K == L) {
            x.degree_ = 1;
            return x;
        }
        if (!K.is_finite() || !L.is_finite() || K.p() != L.p())
            fail(Errc::NOT_AN_EXTENSION, "no embedding of " + K.spec() + " into " + L.spec());
        uint32_t a = K.ext_degree(), ab = L.ext_degree();
        if (ab % a != 0 || ab == a)
            fail(Errc::NOT_AN_EXTENSION, "no embedding of " + K.spec() + " into " + L.spec());
        x.degree_ = ab / a;
        if (K.kind() == FieldCtx::Kind::Prime) {
            x.setup_coord_solver();
            return x;
        }
        // find the smallest root of K's modulus in L, in the fixed element order
        uint64_t q = L.size();
        for (uint64_t k = 0; k < q; ++k) {
            FieldElement cand = L.element_at(k);
            FieldElement acc = L.zero();
            // Horner on K's modulus (coefficients are GF(p) scalars)
            const auto& mod = K.modulus();
            for (size_t i = mod.size(); i-- > 0;) {
                acc = L.mul(acc, cand);
                acc = L.add(acc, L.from_residue(mod[i]));
            }
            if (L.is_zero(acc)) {
                x.gen_image_ = cand;
                x.setup_coord_solver();
                return x;
            }
        }
        fail(Errc::NOT_AN_EXTENSION, "modulus of " + K.spec() + " has no root in " + L.spec());
    }

    const FieldCtx& base() const { return base_; }
    const FieldCtx& top() const { return top_; }
    uint32_t degree() const { return degree_; }

    /// The K-basis of L: powers w^0 .. w^{e-1} of L's generator.
    FieldElement basis_element(uint32_t j) const {
        if (degree_ == 1) return top_.one();
        return top_.pow(top_.gen(), j);
    }

    /// Embed x in K into L.
    FieldElement embed(const FieldElement& x) const {
        base_.check(x);
        if (degree_ == 1 && base_ == top_) return x;
        if (base_.kind() == FieldCtx::Kind::Prime) return top_.from_residue(x.res);
        FieldElement acc = top_.zero();
        FieldElement pw = top_.one();
        for (uint32_t i = 0; i < base_.ext_degree(); ++i) {
            acc = top_.add(acc, top_.mul(top_.from_residue(x.ext[i]), pw));
            pw = top_.mul(pw, gen_image_);
        }
        return acc;
    }

    /// Coordinates of x in L with respect to the declared K-basis; composing
    /// with recombine() is the identity.
    std::vector<FieldElement> coords(const FieldElement& x) const {
        top_.check(x);
        if (degree_ == 1 && base_ == top_) return {x};
        uint64_t p = base_.p();
        uint32_t a = base_.ext_degree(), ab = top_.ext_degree();
        // solve coord_matrix * u = x over GF(p), u indexed by (j, i) = w^j r^i
        std::vector<uint64_t> rhs(ab);
        if (top_.kind() == FieldCtx::Kind::Prime)
            rhs[0] = x.res;
        else
            for (uint32_t i = 0; i < ab; ++i) rhs[i] = x.ext[i];
        std::vector<uint64_t> u(ab, 0);
        // back-substitute through the precomputed inverse
        for (uint32_t row = 0; row < ab; ++row) {
            uint64_t acc = 0;
            for (uint32_t col = 0; col < ab; ++col)
                acc = (acc + inv_matrix_[row * ab + col] * rhs[col]) % p;
            u[row] = acc;
        }
        std::vector<FieldElement> out(degree_);
        for (uint32_t j = 0; j < degree_; ++j) {
            if (base_.kind() == FieldCtx::Kind::Prime) {
                out[j] = base_.from_residue(u[j * a]);
            } else {
                std::vector<uint64_t> c(a);
                for (uint32_t i = 0; i < a; ++i) c[i] = u[j * a + i];
                out[j] = base_.from_coeffs(c);
            }
        }
        return out;
    }

    FieldElement recombine(const std::vector<FieldElement>& cs) const {
        if (cs.size() != degree_) fail(Errc::SHAPE_MISMATCH, "coordinate count != extension degree");
        FieldElement acc = top_.zero();
        for (uint32_t j = 0; j < degree_; ++j)
            acc = top_.add(acc, top_.mul(embed(cs[j]), basis_element(j)));
        return acc;
    }

  private:
    void setup_coord_solver() {
        // columns of M are the GF(p)-coordinates of w^j r^i; inv_matrix_ = M^(-1)
        uint64_t p = base_.p();
        uint32_t a = base_.ext_degree(), ab = top_.ext_degree();
        auto to_vec = [&](const FieldElement& x) {
            std::vector<uint64_t> v(ab, 0);
            if (top_.kind() == FieldCtx::Kind::Prime)
                v[0] = x.res;
            else
                for (uint32_t i = 0; i < ab; ++i) v[i] = x.ext[i];
            return v;
        };
        std::vector<uint64_t> M(ab * ab);
        for (uint32_t j = 0; j < degree_; ++j) {
            FieldElement wj = basis_element(j);
            FieldElement ri = top_.one();
            for (uint32_t i = 0; i < a; ++i) {
                auto col = to_vec(top_.mul(wj, ri));
                for (uint32_t row = 0; row < ab; ++row) M[row * ab + (j * a + i)] = col[row];
                if (i + 1 < a) ri = top_.mul(ri, gen_image_);
            }
        }
        // Gauss-Jordan inverse over GF(p)
        std::vector<uint64_t> inv(ab * ab, 0);
        for (uint32_t i = 0; i < ab; ++i) inv[i * ab + i] = 1;
        for (uint32_t col = 0, row = 0; col < ab && row < ab; ++col) {
            uint32_t piv = row;
            while (piv < ab && M[piv * ab + col] == 0) ++piv;
            if (piv == ab) fail(Errc::NOT_AN_EXTENSION, "basis products are dependent");
            if (piv != row)
                for (uint32_t k = 0; k < ab; ++k) {
                    std::swap(M[piv * ab + k], M[row * ab + k]);
                    std::swap(inv[piv * ab + k], inv[row * ab + k]);
                }
            uint64_t s = detail::gfp_inv_scalar(M[row * ab + col], p);
            for (uint32_t k = 0; k < ab; ++k) {
                M[row * ab + k] = (M[row * ab + k] * s) % p;
                inv[row * ab + k] = (inv[row * ab + k] * s) % p;
            }
            for (uint32_t r2 = 0; r2 < ab; ++r2) {
                if (r2 == row || M[r2 * ab + col] == 0) continue;
                uint64_t f = M[r2 * ab + col];
                for (uint32_t k = 0; k < ab; ++k) {
                    M[r2 * ab + k] = (M[r2 * ab + k] + (p - f) * M[row * ab + k]) % p;
                    inv[r2 * ab + k] = (inv[r2 * ab + k] + (p - f) * inv[row * ab + k]) % p;
                }
            }
            ++row;
        }
        inv_matrix_ = std::move(inv);
    }

    FieldCtx base_;
    FieldCtx top_;
    uint32_t degree_ = 1;
    FieldElement gen_image_; // root of K's modulus in L (extension K only)
    std::vector<uint64_t> inv_matrix_;
};

/// Coordinates of x (in L) over the base field K of the declared extension.
inline std::vector<FieldElement> ext_coords(const FieldExt& ext, const FieldElement& x) {
    return ext.coords(x);
}

} // namespace sprank
